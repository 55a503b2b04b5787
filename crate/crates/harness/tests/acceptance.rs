//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hedonic_core::core_model::{Coalition, LabeledSample, PlayerSet, Valuation};
use hedonic_core::distributions::CoalitionDistribution;
use hedonic_core::game_classes::{gen_anonymous, gen_pair_values, Game, PairClass};
use hedonic_core::hcn::{hcn_value, to_hcn, Conjunction, DecisionList, HedonicNet, Rule, Semantics};
use hedonic_core::learners::{
    anonymous_grid, class_r_witnesses, conjunctions, families, half_size_family, learn_anonymous, learn_hcn_kdl_net,
    learn_k_dl, learn_linear_net, learn_w_games, pseudo_shatters, LearnedValuation, ShatterInstance,
};
use hedonic_core::{Exact, ExactGame};
use hedonic_pac::experiments::{anon_check, exact_decimal, tail_bounds_check};
use hedonic_pac::{run_experiment, trial_rng, ExperimentConfig, ExperimentId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn run(id: &str, budget_secs: u64, check: impl FnOnce() -> anyhow::Result<Verdict>) -> bool {
    let start = Instant::now();
    let v = check().unwrap_or_else(|e| verdict(false, format!("error: {e:#}")));
    let took = start.elapsed();
    let in_time = took <= Duration::from_secs(budget_secs);
    let passed = v.passed && in_time;
    let timing = if in_time { String::new() } else { format!(" [over the {budget_secs} s budget]") };
    println!(
        "{} criterion {id}: {} ({:.2} s){timing}",
        if passed { "PASS" } else { "FAIL" },
        v.detail,
        took.as_secs_f64()
    );
    passed
}

fn consistency(exp: ExperimentId, class: Option<&str>) -> anyhow::Result<(usize, usize)> {
    let mut cfg = ExperimentConfig::new(exp, 8);
    cfg.class = class.map(str::to_string);
    cfg.m = Some(50);
    cfg.trials = 200;
    cfg.seed = 2;
    let a = run_experiment(&cfg)?.aggregate;
    Ok((a.successes, a.trials))
}

fn w_regime(exp: ExperimentId) -> anyhow::Result<hedonic_pac::Aggregate> {
    let mut cfg = ExperimentConfig::new(exp, 10);
    cfg.eps = 0.3;
    cfg.delta = 0.1;
    cfg.trials = 200;
    cfg.seed = 3;
    cfg.m = Some(hedonic_core::stabilizers::pairing_sample_size(10, 0.3, 0.1));
    Ok(run_experiment(&cfg)?.aggregate)
}

fn tail_bounds() -> anyhow::Result<Verdict> {
    let combos: Vec<(usize, u64)> = [8, 12, 16].iter().flat_map(|&n| [1, 2, 4].map(|l| (n, l))).collect();
    let epsilons = [exact_decimal(0.5), exact_decimal(0.25), exact_decimal(0.1)];
    let (mut ok, mut total, mut sandwich_bad, mut a_bad, mut b_bad) = (0, 0, 0, 0, 0);
    let mut failing = Vec::new();
    for d in 0..20 {
        let (n, lambda) = combos[d % combos.len()];
        let mut rng = trial_rng(5, d);
        let dist_seed: u64 = rng.gen();
        for eps in &epsilons {
            let o = tail_bounds_check(n, lambda, dist_seed, eps, &mut rng)?;
            total += 1;
            sandwich_bad += usize::from(!o.sandwich);
            a_bad += o.a_failed;
            b_bad += o.b_failed;
            if o.holds() {
                ok += 1;
            } else {
                failing.push(format!("n={n} lambda={lambda} eps={eps}"));
            }
        }
    }
    failing.dedup();
    Ok(verdict(
        ok == total,
        format!(
            "{ok}/{total} (distribution, eps) cases hold; sandwich failures {sandwich_bad}, A_j failures {a_bad}, B_j failures {b_bad}; first failing {:?}",
            failing.first()
        ),
    ))
}

fn hcn_equivalence() -> anyhow::Result<Verdict> {
    let n = 8;
    let players = PlayerSet::new(n)?;
    let mut notes = Vec::new();
    let mut all = true;
    for (name, class) in [
        ("additive", Some(PairClass::AdditivelySeparable)),
        ("fractional", Some(PairClass::Fractional)),
        ("anonymous", None),
        ("w", Some(PairClass::WGame)),
        ("b", Some(PairClass::BGame)),
    ] {
        let mut good = 0;
        for t in 0..50 {
            let mut rng = trial_rng(6, t);
            let game: ExactGame = match class {
                Some(PairClass::AdditivelySeparable) => {
                    Game::AdditivelySeparable { values: gen_pair_values(&mut rng, PairClass::AdditivelySeparable, n) }
                }
                Some(PairClass::Fractional) => Game::Fractional { values: gen_pair_values(&mut rng, PairClass::Fractional, n) },
                Some(PairClass::WGame) => Game::WGame { values: gen_pair_values(&mut rng, PairClass::WGame, n) },
                Some(PairClass::BGame) => Game::b_game(gen_pair_values(&mut rng, PairClass::BGame, n)),
                None => Game::Anonymous { table: gen_anonymous(&mut rng, n, false) },
            };
            let net = to_hcn(&game)?;
            let mut same = true;
            for i in 0..n {
                let coalitions: Vec<Coalition> = players.coalitions_with(i).collect();
                let native = coalitions.iter().map(|&s| game.eval(i, s)).collect::<hedonic_core::Result<Vec<_>>>()?;
                let encoded = coalitions.iter().map(|&s| hcn_value(&net, i, s)).collect::<hedonic_core::Result<Vec<_>>>()?;
                same &= native == encoded;
                // the ordering the B-game encoding is meant to preserve
                if name == "b" {
                    for a in 0..coalitions.len() {
                        for b in 0..coalitions.len() {
                            same &= (native[a] > native[b]) == (encoded[a] > encoded[b]);
                        }
                    }
                }
            }
            good += usize::from(same);
        }
        all &= good == 50;
        notes.push(format!("{name} {good}/50"));
    }
    Ok(verdict(all, notes.join(", ")))
}

fn draws(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Coalition> {
    CoalitionDistribution::uniform(n).expect("n in range").sample(rng, m)
}

/// First-match net whose rows are random 2-conjunction chains ending in
/// the empty conjunction.
fn random_2dl_net(rng: &mut ChaCha8Rng, n: usize) -> HedonicNet<Exact> {
    let pool = conjunctions(n, 2);
    let rows = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=6);
            let mut rules: Vec<Rule<Exact>> = (0..len)
                .map(|_| Rule::new(pool[rng.gen_range(1..pool.len())].to_formula(), Exact::from_integer(rng.gen_range(-3..=3).into())))
                .collect();
            rules.push(Rule::new(Conjunction::truth().to_formula(), Exact::from_integer(rng.gen_range(-3..=3).into())));
            rules
        })
        .collect();
    HedonicNet::with_semantics(rows, Semantics::FirstMatch)
}

fn random_2dl(rng: &mut ChaCha8Rng, n: usize) -> DecisionList {
    let pool = conjunctions(n, 2);
    let mut rules: Vec<(Conjunction, bool)> = (0..rng.gen_range(1..=8)).map(|_| (pool[rng.gen_range(1..pool.len())].clone(), rng.gen())).collect();
    rules.push((Conjunction::truth(), rng.gen()));
    DecisionList { rules }
}

/// Number of the 100 trials whose hypothesis agrees with the sample.
fn count_consistent(mut trial: impl FnMut(&mut ChaCha8Rng) -> anyhow::Result<bool>, salt: usize) -> anyhow::Result<usize> {
    let mut good = 0;
    for t in 0..100 {
        let mut rng = trial_rng(7, salt * 1000 + t);
        if trial(&mut rng)? {
            good += 1;
        }
    }
    Ok(good)
}

fn net_trial(
    rng: &mut ChaCha8Rng,
    make: impl Fn(&mut ChaCha8Rng) -> ExactGame,
    learn: impl Fn(&LabeledSample<Exact>) -> hedonic_core::Result<HedonicNet<Exact>>,
) -> anyhow::Result<bool> {
    let game = make(rng);
    let sample = LabeledSample::observe(&game, draws(rng, game.players(), 50));
    Ok(match learn(&sample) {
        Ok(net) => LearnedValuation::Net(net).consistent_with(&sample),
        Err(_) => false,
    })
}

fn learner_consistency() -> Vec<(&'static str, anyhow::Result<usize>)> {
    let n = 8;
    let pair = |c: PairClass| move |rng: &mut ChaCha8Rng| gen_pair_values::<Exact, _>(rng, c, n);
    vec![
        (
            "learn_hcn_linear on additive games",
            count_consistent(
                |rng| net_trial(rng, |r| Game::AdditivelySeparable { values: pair(PairClass::AdditivelySeparable)(r) }, |s| {
                    learn_linear_net(n, |i| families::additive(n, i), s)
                }),
                0,
            ),
        ),
        (
            "learn_hcn_linear on fractional games",
            count_consistent(
                |rng| net_trial(rng, |r| Game::Fractional { values: pair(PairClass::Fractional)(r) }, |s| {
                    learn_linear_net(n, |i| families::fractional(n, i), s)
                }),
                1,
            ),
        ),
        (
            "learn_hcn_linear on anonymous games",
            count_consistent(
                |rng| net_trial(rng, |r| Game::Anonymous { table: gen_anonymous(r, n, false) }, |s| {
                    learn_linear_net(n, |i| families::anonymous(n, i), s)
                }),
                2,
            ),
        ),
        (
            "learn_k_dl (k=2) on random 2-DL labels",
            count_consistent(
                |rng| {
                    let target = random_2dl(rng, n);
                    let labeled: Vec<(Coalition, bool)> = draws(rng, n, 50).into_iter().map(|s| (s, target.eval(s))).collect();
                    Ok(match learn_k_dl(2, n, &labeled) {
                        Ok(h) => h.is_k_dl(2) && labeled.iter().all(|(s, b)| h.eval(*s) == *b),
                        Err(_) => false,
                    })
                },
                3,
            ),
        ),
        (
            "learn_hcn_kdl (k=1) on W-games",
            count_consistent(
                |rng| net_trial(rng, |r| Game::WGame { values: pair(PairClass::WGame)(r) }, |s| learn_hcn_kdl_net(1, n, s)),
                4,
            ),
        ),
        (
            "learn_hcn_kdl (k=1) on B-games",
            count_consistent(|rng| net_trial(rng, |r| Game::b_game(pair(PairClass::BGame)(r)), |s| learn_hcn_kdl_net(1, n, s)), 5),
        ),
        (
            "learn_hcn_kdl (k=2) on random 2-DL nets",
            count_consistent(
                |rng| net_trial(rng, |r| Game::CoalitionNet { net: random_2dl_net(r, n) }, |s| learn_hcn_kdl_net(2, n, s)),
                6,
            ),
        ),
        (
            "learn_anonymous",
            count_consistent(
                |rng| {
                    let game: ExactGame = Game::Anonymous { table: gen_anonymous(rng, n, false) };
                    let sample = LabeledSample::observe(&game, draws(rng, n, 50));
                    Ok(LearnedValuation::Anonymous(learn_anonymous(&sample, n)?).consistent_with(&sample))
                },
                7,
            ),
        ),
        (
            "learn_w_games",
            count_consistent(
                |rng| {
                    let game: ExactGame = Game::WGame { values: pair(PairClass::WGame)(rng) };
                    let sample = LabeledSample::observe(&game, draws(rng, n, 50));
                    Ok(LearnedValuation::WPairs(learn_w_games(n, &sample)).consistent_with(&sample))
                },
                8,
            ),
        ),
    ]
}

fn shattering() -> anyhow::Result<Verdict> {
    let n = 5;
    let family = half_size_family(n, 0)?;
    let inst = ShatterInstance::new(family.iter().map(|&s| (s, 0.0)).collect());
    let games = class_r_witnesses(n, 0, &inst)?;
    let shattered = pseudo_shatters(games.iter().map(|g| move |s| g.value(0, s).unwrap()), &inst)?;

    // every pair of distinct equal-size coalitions through player 0, at
    // every pair of half-integer thresholds in the grid
    let grid = anonymous_grid(n, 3);
    let through: Vec<Coalition> = PlayerSet::new(n)?.coalitions_with(0).filter(|s| s.len() >= 2).collect();
    let thresholds = [0.5, 1.5, 2.5];
    let (mut checked, mut refuted) = (0, 0);
    for (a_idx, &a) in through.iter().enumerate() {
        for &b in through[a_idx + 1..].iter().filter(|b| b.len() == a.len()) {
            for &ra in &thresholds {
                for &rb in &thresholds {
                    let inst = ShatterInstance::new(vec![(a, ra), (b, rb)]);
                    checked += 1;
                    if !pseudo_shatters(grid.iter().map(|row| move |s: Coalition| row[s.len() - 1] as f64), &inst)? {
                        refuted += 1;
                    }
                }
            }
        }
    }
    Ok(verdict(
        shattered && refuted == checked,
        format!(
            "class-R witnesses ({} games) shatter all {} half-size coalitions: {shattered}; anonymous grid of {} valuations fails on {refuted}/{checked} equal-size instances",
            games.len(),
            family.len(),
            grid.len()
        ),
    ))
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    results.push(run("1 (anonymous counterexample)", 10, || {
        let c = anon_check()?;
        Ok(verdict(
            c.holds(),
            format!(
                "I1 core empty={}, pi unblocked in I2 over {} coalitions={}, sample resistant core {:?}",
                c.i1_core_empty, c.coalitions_checked, c.i2_pi_unblocked, c.src
            ),
        ))
    }));
    results.push(run("2 (consistency suites)", 30, || {
        let (br, br_t) = consistency(ExperimentId::BrConsistency, Some("size-decreasing"))?;
        let (ea, ea_t) = consistency(ExperimentId::EaConsistency, None)?;
        Ok(verdict(br == br_t && ea == ea_t, format!("bottom-responsive {br}/{br_t}, enemy aversion {ea}/{ea_t}")))
    }));
    results.push(run("3 (W-game stabilizer, pairing regime)", 120, || {
        let a = w_regime(ExperimentId::WStability)?;
        Ok(verdict(
            a.ci_high >= 0.9,
            format!(
                "blocking probability < eps in {}/{} trials, 95% CI [{:.4}, {:.4}], mean blocking probability {:.4}",
                a.successes, a.trials, a.ci_low, a.ci_high, a.mean_metric
            ),
        ))
    }));
    results.push(run("4 (eps-estimate from the pairing sample)", 60, || {
        let a = w_regime(ExperimentId::WEstimate)?;
        Ok(verdict(
            a.success_fraction >= 0.9,
            format!(
                "estimate holds for every player in {}/{} trials (need >= 0.9), 95% CI [{:.4}, {:.4}]",
                a.successes, a.trials, a.ci_low, a.ci_high
            ),
        ))
    }));
    results.push(run("5 (tail-event bounds, exact)", 120, tail_bounds));
    results.push(run("6 (coalition-net encodings)", 60, hcn_equivalence));
    results.push(run("7 (learner consistency)", 120, || {
        let mut all = true;
        let mut notes = Vec::new();
        for (name, r) in learner_consistency() {
            let good = r?;
            all &= good == 100;
            notes.push(format!("{name} {good}/100"));
        }
        Ok(verdict(all, notes.join("; ")))
    }));
    results.push(run("8 (shattering)", 30, shattering));
    results.push(run("9 (W-game exact regime)", 30, || {
        let mut cfg = ExperimentConfig::new(ExperimentId::WExact, 8);
        cfg.trials = 50;
        cfg.m = Some(20);
        cfg.seed = 9;
        let a = run_experiment(&cfg)?.aggregate;
        Ok(verdict(
            a.successes == a.trials,
            format!("zero blocking probability under uniform and bounded distributions in {}/{} trials", a.successes, a.trials),
        ))
    }));
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
