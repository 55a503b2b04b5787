pub mod config;
pub mod experiments;
pub mod report;
pub mod classes;

pub use config::{ExperimentConfig, ExperimentId, EXACT_PROB_GUARD, PARTITION_GUARD};
pub use experiments::{run_experiment, trial_rng};
pub use report::{Aggregate, ExperimentReport, TrialRecord};
pub use classes::{class_summary, ClassSummaryOptions, ClassRow};
