use std::path::PathBuf;

use hedonic_core::distributions::DistributionSpec;
use hedonic_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Partition-enumeration experiments stay at or below this many players.
pub const PARTITION_GUARD: usize = 12;
/// Experiments that sum exact probabilities over all coalitions.
pub const EXACT_PROB_GUARD: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    /// Pairing/exact stabilizer on random W-games, exact blocking probability.
    WStability,
    /// Whether the learned pair estimate is an eps-estimate for every player.
    WEstimate,
    /// Green-player count and the no-green probability of the pairing output.
    WGreen,
    /// Exact regime with every pair in the sample.
    WExact,
    /// Bottom-responsive stabilizer on size-decreasing games.
    BrConsistency,
    /// Enemy-aversion stabilizer on random friend graphs.
    EaConsistency,
    /// The seven-agent anonymous counterexample.
    AnonCounterexample,
    /// Tail-event lower bounds and the coalition probability sandwich.
    TailBounds,
}

impl ExperimentId {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::WStability => "w-stability",
            ExperimentId::WEstimate => "w-estimate",
            ExperimentId::WGreen => "w-green",
            ExperimentId::WExact => "w-exact",
            ExperimentId::BrConsistency => "br-consistency",
            ExperimentId::EaConsistency => "ea-consistency",
            ExperimentId::AnonCounterexample => "anon-counterexample",
            ExperimentId::TailBounds => "tail-bounds",
        }
    }

    fn guard(self) -> Option<usize> {
        match self {
            ExperimentId::WExact | ExperimentId::WStability | ExperimentId::AnonCounterexample => Some(PARTITION_GUARD),
            ExperimentId::WEstimate | ExperimentId::BrConsistency | ExperimentId::EaConsistency => None,
            ExperimentId::WGreen | ExperimentId::TailBounds => Some(EXACT_PROB_GUARD),
        }
    }
}

fn default_trials() -> usize {
    1
}

fn default_lambda() -> f64 {
    1.0
}

fn default_friend_prob() -> f64 {
    0.5
}

fn default_distribution() -> DistributionSpec {
    DistributionSpec::Uniform
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    /// Class tag; only `br-consistency` reads it (`size-decreasing` or
    /// `bottom-responsive`).
    #[serde(default)]
    pub class: Option<String>,
    pub n: usize,
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Sample size; each experiment has its own default.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_distribution")]
    pub distribution: DistributionSpec,
    #[serde(default = "default_friend_prob")]
    pub friend_prob: f64,
    /// CSV path; the aggregate goes next to it with a `.json` extension.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub unsafe_n: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentId, n: usize) -> Self {
        ExperimentConfig {
            experiment,
            class: None,
            n,
            eps: 0.0,
            delta: 0.0,
            lambda: 1.0,
            m: None,
            trials: 1,
            seed: 0,
            distribution: DistributionSpec::Uniform,
            friend_prob: 0.5,
            output: None,
            unsafe_n: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInstance(format!("{}: {msg}", self.experiment.name())));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if let Some(limit) = self.experiment.guard() {
            if self.n > limit && !self.unsafe_n {
                return bad(format!("n = {} exceeds the default guard of {limit}; pass --unsafe-n to override", self.n));
            }
        }
        let needs_eps = matches!(
            self.experiment,
            ExperimentId::WStability | ExperimentId::WEstimate | ExperimentId::WGreen | ExperimentId::TailBounds
        );
        if needs_eps && !(self.eps > 0.0 && self.eps <= 1.0) {
            return bad(format!("eps = {} must be in (0, 1]", self.eps));
        }
        let needs_delta = matches!(self.experiment, ExperimentId::WStability | ExperimentId::WEstimate | ExperimentId::WGreen);
        if needs_delta && self.m.is_none() && !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta = {} must be in (0, 1)", self.delta));
        }
        if self.lambda < 1.0 {
            return bad(format!("lambda = {} must be at least 1", self.lambda));
        }
        Ok(())
    }
}
