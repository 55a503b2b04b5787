use anyhow::Result;
use hedonic_core::core_model::{Coalition, LabeledSample};
use hedonic_core::distributions::CoalitionDistribution;
use hedonic_core::game_classes::{gen_anonymous, is_bottom_responsive, Game};
use hedonic_core::learners::{
    anonymous_grid, class_r_witnesses, half_size_family, learn_anonymous, pseudo_shatters, LearnedValuation,
    ShatterInstance,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentId};
use crate::experiments::{anon_check, run_experiment, trial_rng};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassRow {
    pub class: &'static str,
    pub property: &'static str,
    pub expected: bool,
    pub passed: bool,
    pub evidence: String,
}

impl ClassRow {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let claim = if self.expected { "yes" } else { "no" };
        format!("{verdict} {:<24} {:<16} {claim:<4} {}", self.class, self.property, self.evidence)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClassSummaryOptions {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ClassSummaryOptions {
    fn default() -> Self {
        ClassSummaryOptions { n: 10, trials: 50, seed: 1 }
    }
}

fn consistency_row(
    class: &'static str,
    exp: ExperimentId,
    tag: Option<&str>,
    opts: ClassSummaryOptions,
) -> Result<ClassRow> {
    let mut cfg = ExperimentConfig::new(exp, opts.n);
    cfg.class = tag.map(str::to_string);
    cfg.trials = opts.trials;
    cfg.seed = opts.seed;
    let report = run_experiment(&cfg)?;
    let a = &report.aggregate;
    Ok(ClassRow {
        class,
        property: "stabilizable",
        expected: true,
        passed: a.successes == a.trials,
        evidence: format!("consistent with the sample in {}/{} trials at n={}", a.successes, a.trials, opts.n),
    })
}

/// The half-size family is pseudo-shattered by size-decreasing games, and
/// those games are bottom responsive.
fn br_learnability_row() -> Result<ClassRow> {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [3, 5] {
        let family = half_size_family(n, 0)?;
        let inst = ShatterInstance::new(family.iter().map(|&s| (s, 0.0)).collect());
        let games = class_r_witnesses(n, 0, &inst)?;
        let shattered = pseudo_shatters(games.iter().map(|g| move |s| g.value(0, s).unwrap()), &inst)?;
        let all_br = games
            .iter()
            .map(|g| is_bottom_responsive::<f64, _>(&Game::SizeDecreasing { game: g.clone() }))
            .collect::<hedonic_core::Result<Vec<_>>>()?
            .into_iter()
            .all(|b| b);
        ok &= shattered && all_br;
        notes.push(format!("n={n}: {} coalitions shattered={shattered}, witnesses bottom responsive={all_br}", family.len()));
    }
    Ok(ClassRow {
        class: "bottom-responsive",
        property: "learnable",
        expected: false,
        passed: ok,
        evidence: notes.join("; "),
    })
}

/// Learned tables agree with random samples, and size-only valuations
/// cannot label two equal-size coalitions independently.
fn anonymous_learnability_row(opts: ClassSummaryOptions) -> Result<ClassRow> {
    let n = opts.n.min(12);
    let mut consistent = 0;
    for t in 0..opts.trials {
        let mut rng = trial_rng(opts.seed, t);
        let game: hedonic_core::Game = Game::Anonymous { table: gen_anonymous(&mut rng, n, false) };
        let dist = CoalitionDistribution::uniform(n)?;
        let sample = LabeledSample::observe(&game, dist.sample(&mut rng, 50));
        if LearnedValuation::Anonymous(learn_anonymous(&sample, n)?).consistent_with(&sample) {
            consistent += 1;
        }
    }
    let a = Coalition::from_players([0, 1, 2])?;
    let b = Coalition::from_players([0, 3, 4])?;
    let grid = anonymous_grid(5, 3);
    let equal = ShatterInstance::new(vec![(a, 1.0), (b, 1.0)]);
    let refuted = !pseudo_shatters(grid.iter().map(|row| move |s: Coalition| row[s.len() - 1] as f64), &equal)?;
    Ok(ClassRow {
        class: "anonymous",
        property: "learnable",
        expected: true,
        passed: consistent == opts.trials && refuted,
        evidence: format!(
            "consistent in {consistent}/{} trials at n={n}; equal-size pair never shattered over {} valuations={refuted}",
            opts.trials,
            grid.len()
        ),
    })
}

fn anonymous_stability_row() -> Result<ClassRow> {
    let c = anon_check()?;
    Ok(ClassRow {
        class: "anonymous",
        property: "stabilizable",
        expected: false,
        passed: c.holds(),
        evidence: format!(
            "I1 core empty={}, I2 partition unblocked={}, verdict {:?}",
            c.i1_core_empty, c.i2_pi_unblocked, c.src
        ),
    })
}

pub fn class_summary(opts: ClassSummaryOptions) -> Result<Vec<ClassRow>> {
    Ok(vec![
        consistency_row("enemy-aversion", ExperimentId::EaConsistency, None, opts)?,
        consistency_row("bottom-responsive", ExperimentId::BrConsistency, Some("size-decreasing"), opts)?,
        br_learnability_row()?,
        anonymous_learnability_row(opts)?,
        anonymous_stability_row()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_holds_on_a_small_run() {
        let rows = class_summary(ClassSummaryOptions { n: 6, trials: 5, seed: 4 }).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            assert!(r.passed, "{}", r.line());
        }
    }
}
