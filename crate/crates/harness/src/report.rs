use std::fs;
use std::path::{Path, PathBuf};

use hedonic_core::{Error, Result};
use serde::{Deserialize, Serialize};
use statrs::function::beta::inv_beta_reg;

use crate::config::ExperimentConfig;

/// Bumped whenever a CSV column changes.
pub const SCHEMA_VERSION: u32 = 1;

/// One CSV row. `trial` and `seed` together reproduce the row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub schema_version: u32,
    pub experiment: String,
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub success: bool,
    /// Experiment-specific number, e.g. an exact blocking probability.
    pub metric: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub experiment: String,
    pub trials: usize,
    pub successes: usize,
    pub success_fraction: f64,
    /// Two-sided 95% Clopper-Pearson interval for the success rate.
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_metric: f64,
    pub wall_time_ms: u128,
}

impl Aggregate {
    pub fn from_rows(experiment: &str, rows: &[TrialRecord], wall_time_ms: u128) -> Self {
        let trials = rows.len();
        let successes = rows.iter().filter(|r| r.success).count();
        let (ci_low, ci_high) = clopper_pearson(successes, trials, 0.05);
        Aggregate {
            experiment: experiment.to_string(),
            trials,
            successes,
            success_fraction: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_low,
            ci_high,
            mean_metric: if trials == 0 { 0.0 } else { rows.iter().map(|r| r.metric).sum::<f64>() / trials as f64 },
            wall_time_ms,
        }
    }
}

/// Exact binomial confidence interval at level `1 - alpha`.
pub fn clopper_pearson(k: usize, n: usize, alpha: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let low = if k == 0.0 { 0.0 } else { inv_beta_reg(k, n - k + 1.0, alpha / 2.0) };
    let high = if k == n { 1.0 } else { inv_beta_reg(k + 1.0, n - k, 1.0 - alpha / 2.0) };
    (low, high)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: Option<ExperimentConfig>,
    pub rows: Vec<TrialRecord>,
    pub aggregate: Aggregate,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.success)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Vec<TrialRecord>> {
        csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<std::result::Result<Vec<TrialRecord>, _>>()
            .map_err(|e| Error::Io(e.to_string()))
    }

    /// Writes the rows to `path` and the aggregate to `path` with a `.json`
    /// extension. Wall time is left out of the CSV so reruns are
    /// byte-identical.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(io)?;
        }
        fs::write(path, self.to_csv()?).map_err(io)?;
        let json_path = path.with_extension("json");
        let json = serde_json::json!({ "config": self.config, "aggregate": self.aggregate });
        fs::write(&json_path, serde_json::to_string_pretty(&json).expect("plain data")).map_err(io)?;
        Ok(json_path)
    }
}
