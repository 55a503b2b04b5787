use std::time::Instant;

use anyhow::{Context, Result};
use hedonic_core::core_model::{
    blocking_probability, blocks, consistent_with_sample, solve_core, Coalition, LabeledSample, PlayerSet, MAX_PLAYERS,
};
use hedonic_core::distributions::{prob_event_a, prob_event_b, CoalitionDistribution, DistributionSpec};
use hedonic_core::game_classes::{
    counterexample, gen_friend_graph, gen_pair_values, gen_pessimist, gen_size_decreasing, FriendsProfile, PairClass,
};
use hedonic_core::learners::{is_eps_estimate, learn_w_games};
use hedonic_core::scalar::floor_log2_recip;
use hedonic_core::stabilizers::{
    check_src, estimate_sample_size, exact_regime, exact_sample_size, friendly_cliques, green_players, greedy_cover,
    individually_rational, known_singletons, pair_by_estimate, pairing_sample_size, residual_max_holds,
    stabilize_w_exact_with_limit, stabilize_w_games, Regime, SrcVerdict, StabilizeOutcome, WStabilization,
};
use hedonic_core::game_classes::Game;
use hedonic_core::{Error, Exact, ExactGame, Game as FloatGame, Scalar};
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentId, PARTITION_GUARD};
use crate::report::{Aggregate, ExperimentReport, TrialRecord, SCHEMA_VERSION};

/// Independent stream `trial` of the master seed, so results do not depend
/// on scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// The decimal a user typed, as an exact rational (`0.3` is `3/10`).
pub fn exact_decimal(x: f64) -> Exact {
    Exact::parse_literal(&format!("{x}")).expect("finite decimal")
}

fn approx(x: &Exact) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

struct Outcome {
    m: usize,
    success: bool,
    metric: f64,
    detail: String,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let name = cfg.experiment.name();
    let start = Instant::now();
    let rows = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let o = run_trial(cfg, t).with_context(|| format!("experiment {name}, trial {t}, seed {}", cfg.seed))?;
            Ok(TrialRecord {
                schema_version: SCHEMA_VERSION,
                experiment: name.to_string(),
                trial: t,
                seed: cfg.seed,
                n: cfg.n,
                m: o.m,
                success: o.success,
                metric: o.metric,
                detail: o.detail,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let aggregate = Aggregate::from_rows(name, &rows, start.elapsed().as_millis());
    let report = ExperimentReport { config: Some(cfg.clone()), rows, aggregate };
    if let Some(path) = &cfg.output {
        report.write(path)?;
    }
    Ok(report)
}

fn run_trial(cfg: &ExperimentConfig, t: usize) -> Result<Outcome> {
    let mut rng = trial_rng(cfg.seed, t);
    match cfg.experiment {
        ExperimentId::WStability => w_stability(cfg, &mut rng),
        ExperimentId::WEstimate => w_estimate(cfg, &mut rng),
        ExperimentId::WGreen => w_green(cfg, &mut rng),
        ExperimentId::WExact => w_exact(cfg, &mut rng, t),
        ExperimentId::BrConsistency => br_consistency(cfg, &mut rng),
        ExperimentId::EaConsistency => ea_consistency(cfg, &mut rng),
        ExperimentId::AnonCounterexample => anon_counterexample(),
        ExperimentId::TailBounds => {
            let lambda = cfg.lambda.round() as u64;
            let dist_seed = rng.next_u64();
            let o = tail_bounds_check(cfg.n, lambda, dist_seed, &exact_decimal(cfg.eps), &mut rng)?;
            Ok(Outcome { m: 0, success: o.holds(), metric: o.min_ratio, detail: o.describe(dist_seed) })
        }
    }
}

fn partition_limit(cfg: &ExperimentConfig) -> usize {
    if cfg.unsafe_n {
        MAX_PLAYERS
    } else {
        PARTITION_GUARD
    }
}

fn w_game(rng: &mut ChaCha8Rng, n: usize) -> FloatGame {
    Game::WGame { values: gen_pair_values(rng, PairClass::WGame, n) }
}

fn w_stability(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = cfg.n;
    let (eps, lambda) = (exact_decimal(cfg.eps), exact_decimal(cfg.lambda));
    let dist = cfg.distribution.build(n)?;
    let game = w_game(rng, n);
    let m = cfg.m.unwrap_or_else(|| {
        if exact_regime(n, &eps, &lambda) {
            exact_sample_size(n, cfg.eps, cfg.delta, cfg.lambda)
        } else {
            pairing_sample_size(n, cfg.eps, cfg.delta)
        }
    });
    let sample = LabeledSample::observe(&game, dist.sample(rng, m));
    let solved = if exact_regime(n, &eps, &lambda) {
        stabilize_w_exact_with_limit(n, &sample, partition_limit(cfg)).map(|outcome| WStabilization {
            outcome,
            regime: Regime::Exact,
            estimate: None,
        })
    } else {
        stabilize_w_games(n, &sample, &eps, &lambda)
    };
    let out = match solved {
        Ok(out) => out,
        Err(Error::InsufficientSample(pair)) => {
            return Ok(Outcome { m, success: false, metric: 1.0, detail: format!("regime=exact; missing pair {pair}") })
        }
        Err(e) => return Err(e.into()),
    };
    let StabilizeOutcome::Partition(pi) = &out.outcome else {
        return Ok(Outcome { m, success: false, metric: 1.0, detail: "core reported empty".into() });
    };
    let p = blocking_probability(pi, &game, &dist)?;
    let regime = match &out.regime {
        Regime::Exact => "regime=exact".to_string(),
        Regime::Pairing { eps_prime } => {
            let vstar = out.estimate.as_ref().expect("pairing keeps its estimate");
            format!("regime=pairing; eps'={eps_prime}; green={}", green_players(pi, vstar, eps_prime).len())
        }
    };
    Ok(Outcome { m, success: p < eps, metric: approx(&p), detail: format!("{regime}; pi={pi}") })
}

fn w_estimate(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = cfg.n;
    let eps = exact_decimal(cfg.eps);
    let dist = cfg.distribution.build(n)?;
    let pv = gen_pair_values::<Exact, _>(rng, PairClass::WGame, n);
    let game: ExactGame = Game::WGame { values: pv.clone() };
    let m = cfg.m.unwrap_or_else(|| estimate_sample_size(n, cfg.eps, cfg.delta, cfg.lambda));
    let sample = LabeledSample::observe(&game, dist.sample(rng, m));
    let vstar = learn_w_games(n, &sample);
    let good = (0..n).filter(|&i| is_eps_estimate(&vstar, &pv, &eps, i)).count();
    Ok(Outcome {
        m,
        success: good == n,
        metric: good as f64 / n as f64,
        detail: format!("f={}; estimate holds for {good}/{n} players", floor_log2_recip(&eps)),
    })
}

fn w_green(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = cfg.n;
    let eps = exact_decimal(cfg.eps);
    let dist = cfg.distribution.build(n)?;
    let game = w_game(rng, n);
    let m = cfg.m.unwrap_or_else(|| estimate_sample_size(n, cfg.eps, cfg.delta, cfg.lambda));
    let sample = LabeledSample::observe(&game, dist.sample(rng, m));
    let vstar = learn_w_games(n, &sample);
    let pi = pair_by_estimate(n, &vstar);
    let green = green_players(&pi, &vstar, &eps);
    let f = floor_log2_recip(&eps);
    let count_ok = 2 * green.len() + f >= n + 2;
    let green_mask = green.iter().fold(0u64, |a, &g| a | 1 << g);
    let no_green = dist.exact_prob(|s| s.mask() & green_mask == 0)?;
    Ok(Outcome {
        m,
        success: count_ok && no_green < eps,
        metric: green.len() as f64,
        detail: format!("green={}; count bound {}; Pr[no green]={}", green.len(), if count_ok { "met" } else { "missed" }, approx(&no_green)),
    })
}

fn w_exact(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, t: usize) -> Result<Outcome> {
    let n = cfg.n;
    let game = w_game(rng, n);
    let mut coalitions: Vec<Coalition> = (0..n).flat_map(|i| (i + 1..n).map(move |j| Coalition::pair(i, j))).collect();
    let dist = cfg.distribution.build(n)?;
    coalitions.extend(dist.sample(rng, cfg.m.unwrap_or(0)));
    let m = coalitions.len();
    let sample = LabeledSample::observe(&game, coalitions);
    let StabilizeOutcome::Partition(pi) = stabilize_w_exact_with_limit(n, &sample, partition_limit(cfg))? else {
        return Ok(Outcome { m, success: false, metric: 1.0, detail: "core reported empty".into() });
    };
    let tested = [
        dist,
        CoalitionDistribution::uniform(n)?,
        CoalitionDistribution::bounded_random(n, 2, t as u64)?,
        CoalitionDistribution::bounded_random(n, 4, t as u64 + 1)?,
    ];
    let worst = tested.iter().map(|d| blocking_probability(&pi, &game, d)).collect::<hedonic_core::Result<Vec<_>>>()?;
    let worst = worst.into_iter().max().unwrap_or_else(Exact::zero);
    Ok(Outcome { m, success: worst.is_zero(), metric: approx(&worst), detail: format!("pi={pi}") })
}

fn uniform_draws(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, default_m: usize) -> Result<Vec<Coalition>> {
    let dist = cfg.distribution.build(cfg.n)?;
    Ok(dist.sample(rng, cfg.m.unwrap_or(default_m)))
}

fn br_consistency(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = cfg.n;
    let game: FloatGame = match cfg.class.as_deref().unwrap_or("size-decreasing") {
        "size-decreasing" => Game::SizeDecreasing { game: gen_size_decreasing(rng, n) },
        "bottom-responsive" => Game::BottomResponsive { game: gen_pessimist(rng, n) },
        other => anyhow::bail!("unknown bottom-responsive generator `{other}`"),
    };
    let sample = LabeledSample::observe(&game, uniform_draws(cfg, rng, 50)?);
    let singletons = known_singletons(n, |i| game.singleton(i));
    let kept = individually_rational(&sample, &singletons)?;
    let (pi, steps) = greedy_cover(n, &kept)?;
    let consistent = consistent_with_sample(&pi, &sample, &game);
    let greedy_ok = residual_max_holds(&kept, &steps);
    Ok(Outcome {
        m: sample.len(),
        success: consistent && greedy_ok,
        metric: pi.blocks().iter().filter(|b| b.len() > 1).count() as f64,
        detail: format!("kept={}; residual-max={greedy_ok}; pi={pi}", kept.len()),
    })
}

fn ea_consistency(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = cfg.n;
    let game: FloatGame = Game::Friends { graph: gen_friend_graph(rng, n, cfg.friend_prob), profile: FriendsProfile::Aversion };
    let sample = LabeledSample::observe(&game, uniform_draws(cfg, rng, 50)?);
    let kept = friendly_cliques(&sample);
    let (pi, steps) = greedy_cover(n, &kept)?;
    let consistent = consistent_with_sample(&pi, &sample, &game);
    let greedy_ok = residual_max_holds(&kept, &steps);
    Ok(Outcome {
        m: sample.len(),
        success: consistent && greedy_ok,
        metric: pi.blocks().iter().filter(|b| b.len() > 1).count() as f64,
        detail: format!("cliques={}; residual-max={greedy_ok}; pi={pi}", kept.len()),
    })
}

/// Results of the seven-agent anonymous counterexample.
#[derive(Clone, Debug, PartialEq)]
pub struct AnonCheck {
    pub i1_core_empty: bool,
    pub i2_pi_unblocked: bool,
    pub coalitions_checked: usize,
    pub src: SrcVerdict,
}

impl AnonCheck {
    pub fn holds(&self) -> bool {
        self.i1_core_empty && self.i2_pi_unblocked && matches!(self.src, SrcVerdict::Violated { .. })
    }
}

pub fn anon_check() -> Result<AnonCheck> {
    let i1: FloatGame = Game::Anonymous { table: counterexample::instance_i1() };
    let i2: FloatGame = Game::Anonymous { table: counterexample::instance_i2() };
    let pi = counterexample::stable_partition_i2();
    let all: Vec<Coalition> = PlayerSet::new(7)?.coalitions().collect();
    let i2_pi_unblocked = all.iter().all(|&s| !blocks(s, &pi, &i2));
    let support: Vec<Coalition> = all.iter().copied().filter(|&s| counterexample::in_support(s)).collect();
    Ok(AnonCheck {
        i1_core_empty: solve_core(&i1)?.is_empty(),
        i2_pi_unblocked,
        coalitions_checked: all.len(),
        src: check_src(&[i1, i2], &support)?,
    })
}

fn anon_counterexample() -> Result<Outcome> {
    let c = anon_check()?;
    Ok(Outcome {
        m: 0,
        success: c.holds(),
        metric: c.coalitions_checked as f64,
        detail: format!(
            "I1 core empty={}; I2 pi unblocked over {} coalitions={}; src={:?}",
            c.i1_core_empty, c.coalitions_checked, c.i2_pi_unblocked, c.src
        ),
    })
}

/// Tail-event bounds for one bounded distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct TailBoundsOutcome {
    pub sandwich: bool,
    pub a_checked: usize,
    pub a_failed: usize,
    pub b_checked: usize,
    pub b_failed: usize,
    /// Smallest `Pr / bound` over all checks.
    pub min_ratio: f64,
    /// First failing `(event, player, position)`.
    pub first_failure: Option<(char, usize, usize)>,
}

impl TailBoundsOutcome {
    pub fn holds(&self) -> bool {
        self.sandwich && self.a_failed == 0 && self.b_failed == 0
    }

    fn describe(&self, dist_seed: u64) -> String {
        format!(
            "dist seed={dist_seed}; sandwich={}; A failed {}/{}; B failed {}/{}; first failure={:?}",
            self.sandwich, self.a_failed, self.a_checked, self.b_failed, self.b_checked, self.first_failure
        )
    }
}

/// `Pr[A_j] >= eps/(2 lambda)` for `j <= f` and `Pr[B_j] >= eps/(4 lambda)`
/// for `j > f`, with `f = floor(log2(1/eps))`, over a random order of the
/// other players for every player.
pub fn tail_bounds_check(n: usize, lambda: u64, dist_seed: u64, eps: &Exact, rng: &mut ChaCha8Rng) -> Result<TailBoundsOutcome> {
    let dist = CoalitionDistribution::bounded_random(n, lambda, dist_seed)?;
    let lam = Exact::from_integer(lambda.into());
    let f = floor_log2_recip(eps);
    let bound_a = eps / (&lam * Exact::from_integer(2.into()));
    let bound_b = eps / (&lam * Exact::from_integer(4.into()));
    let mut out = TailBoundsOutcome {
        sandwich: dist.sandwich_holds(&lam)?,
        a_checked: 0,
        a_failed: 0,
        b_checked: 0,
        b_failed: 0,
        min_ratio: f64::INFINITY,
        first_failure: None,
    };
    for i in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&p| p != i).collect();
        order.shuffle(rng);
        for j in 1..n {
            let (kind, p, bound) = if j <= f {
                out.a_checked += 1;
                ('A', prob_event_a(&dist, i, &order, j)?, &bound_a)
            } else {
                out.b_checked += 1;
                ('B', prob_event_b(&dist, i, &order, j, eps)?, &bound_b)
            };
            out.min_ratio = out.min_ratio.min(approx(&(&p / bound)));
            if p < *bound {
                if kind == 'A' {
                    out.a_failed += 1;
                } else {
                    out.b_failed += 1;
                }
                out.first_failure.get_or_insert((kind, i, j));
            }
        }
    }
    Ok(out)
}

/// The distribution spec named on the command line: `uniform`,
/// `bounded:<lambda>:<seed>`, `restricted:<support>`, or a JSON object.
pub fn parse_distribution(text: &str) -> Result<DistributionSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    Ok(match parts.as_slice() {
        ["uniform"] => DistributionSpec::Uniform,
        ["bounded", lambda, seed] => DistributionSpec::Bounded { lambda: lambda.parse()?, seed: seed.parse()? },
        ["restricted", support] => DistributionSpec::Restricted { support: support.to_string() },
        _ => serde_json::from_str(text).with_context(|| format!("unrecognized distribution `{text}`"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_are_independent_of_order() {
        let mut cfg = ExperimentConfig::new(ExperimentId::WStability, 6);
        cfg.eps = 0.5;
        cfg.delta = 0.1;
        cfg.trials = 4;
        cfg.seed = 3;
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.rows, b.rows);
        let one = run_trial(&cfg, 2).unwrap();
        assert_eq!(one.detail, a.rows[2].detail);
    }

    #[test]
    fn decimal_inputs_stay_exact() {
        assert_eq!(exact_decimal(0.3), Exact::new(3.into(), 10.into()));
        assert_eq!(exact_decimal(2.0), Exact::from_integer(2.into()));
    }

    #[test]
    fn distribution_flags() {
        assert_eq!(parse_distribution("uniform").unwrap(), DistributionSpec::Uniform);
        assert_eq!(parse_distribution("bounded:2:9").unwrap(), DistributionSpec::Bounded { lambda: 2, seed: 9 });
        assert_eq!(
            parse_distribution(r#"{"kind":"restricted","support":"anon-i1-support"}"#).unwrap(),
            DistributionSpec::Restricted { support: "anon-i1-support".into() }
        );
        assert!(parse_distribution("bogus").is_err());
    }

    #[test]
    fn counterexample_reproduces() {
        let c = anon_check().unwrap();
        assert!(c.holds(), "{c:?}");
        assert_eq!(c.coalitions_checked, 127);
    }

    #[test]
    fn same_seed_gives_byte_identical_csv() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::new(ExperimentId::WStability, 10);
        cfg.eps = 0.3;
        cfg.delta = 0.1;
        cfg.seed = 42;
        let mut paths = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("run{k}.csv"));
            cfg.output = Some(path.clone());
            run_experiment(&cfg).unwrap();
            paths.push(path);
        }
        let a = std::fs::read(&paths[0]).unwrap();
        assert_eq!(a, std::fs::read(&paths[1]).unwrap());
        let rows = ExperimentReport::from_csv(std::str::from_utf8(&a).unwrap()).unwrap();
        assert_eq!((rows.len(), rows[0].experiment.as_str(), rows[0].seed, rows[0].schema_version), (1, "w-stability", 42, 1));
        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(paths[0].with_extension("json")).unwrap()).unwrap();
        assert_eq!(json["aggregate"]["trials"], 1);
        assert_eq!(json["config"]["seed"], 42);
    }

    #[test]
    fn aggregate_is_the_mean_of_the_rows() {
        let mut cfg = ExperimentConfig::new(ExperimentId::WEstimate, 8);
        cfg.eps = 0.25;
        cfg.delta = 0.1;
        cfg.trials = 30;
        cfg.seed = 5;
        let report = run_experiment(&cfg).unwrap();
        let wins = report.rows.iter().filter(|r| r.success).count();
        assert_eq!(report.aggregate.successes, wins);
        assert!((report.aggregate.success_fraction - wins as f64 / 30.0).abs() < 1e-12);
        assert_eq!(run_experiment(&cfg).unwrap().rows, report.rows);
    }

    #[test]
    fn tail_bounds_report_the_first_failure() {
        // near-uniform weights miss the B_j bound once j passes f + 1
        let o = tail_bounds_check(8, 1, 0, &exact_decimal(0.5), &mut trial_rng(0, 0)).unwrap();
        assert!(o.sandwich);
        assert_eq!(o.a_failed, 0);
        assert_eq!(o.first_failure.map(|(kind, _, j)| (kind, j)), Some(('B', 3)));
        let o = tail_bounds_check(8, 4, 0, &exact_decimal(0.5), &mut trial_rng(0, 0)).unwrap();
        assert!(o.holds(), "{o:?}");
    }

    #[test]
    fn guard_is_reported_with_context() {
        let mut cfg = ExperimentConfig::new(ExperimentId::WExact, 13);
        assert!(run_experiment(&cfg).unwrap_err().to_string().contains("--unsafe-n"));
        cfg.n = 4;
        cfg.trials = 2;
        assert!(run_experiment(&cfg).unwrap().all_passed());
    }
}
