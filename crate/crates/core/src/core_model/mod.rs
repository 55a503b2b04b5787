//! Players, coalitions, partitions, samples and the exhaustive stability
//! oracles everything else is checked against.

mod coalition;
mod oracle;
mod partition;
mod sample;
mod valuation;

pub use coalition::{
    full_mask, guard, submasks, Coalition, Members, Player, PlayerSet, MAX_PLAYERS, PARTITION_LIMIT, SUBSET_LIMIT,
};
pub use oracle::{
    blocking_entries, blocking_probability, blocks, consistent_with_sample, consistent_with_values, core_certificate,
    find_blocking, is_core_stable, solve_core, solve_core_with_limit, CoreResult,
};
pub use partition::{all_partitions, bell, Partition, SetPartitions};
pub use sample::{LabeledSample, SampleEntry};
pub use valuation::{GameClass, Valuation, ValueTable};
