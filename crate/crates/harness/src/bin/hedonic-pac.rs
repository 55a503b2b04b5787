use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hedonic_core::core_model::{blocking_probability, find_blocking, Partition};
use hedonic_core::distributions::{CoalitionDistribution, DistributionSpec};
use hedonic_core::game_classes::{
    gen_anonymous, gen_friend_graph, gen_pair_values, gen_pessimist, gen_size_decreasing, FriendsProfile, PairClass,
};
use hedonic_core::hcn::parse_formula;
use hedonic_core::learners::{families, learn_anonymous, learn_hcn_kdl_net, learn_linear_net, learn_w_games};
use hedonic_core::stabilizers::{check_src, stabilize_bottom_responsive, stabilize_enemy_aversion, stabilize_w_games};
use hedonic_core::stabilizers::StabilizeOutcome;
use hedonic_core::{Game, Sample, Scalar};
use hedonic_pac::experiments::parse_distribution;
use hedonic_pac::{run_experiment, class_summary, trial_rng, ExperimentConfig, ExperimentId, ClassSummaryOptions};
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "hedonic-pac", version, about = "Learn and stabilize hedonic games from samples")]
struct Cli {
    /// Lift the default player-count guards of the experiments.
    #[arg(long, global = true)]
    unsafe_n: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenClass {
    As,
    Fractional,
    W,
    B,
    Fa,
    Ea,
    Anonymous,
    SizeDecreasing,
    BottomResponsive,
}

#[derive(Clone, Copy, ValueEnum)]
enum LearnClass {
    As,
    Fractional,
    Anonymous,
    W,
    B,
    HcnLinear,
    HcnKdl,
}

#[derive(Clone, Copy, ValueEnum)]
enum StabilizeClass {
    BottomResponsive,
    EnemyAversion,
    W,
}

#[derive(Subcommand)]
enum Command {
    /// Random instance as JSON, optionally with a labeled sample drawn from it.
    Gen {
        #[arg(long, value_enum)]
        class: GenClass,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        friend_prob: f64,
        /// Instance file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Draw this many coalitions and write them as JSONL to `--sample-out`.
        #[arg(long, requires = "sample_out")]
        sample: Option<usize>,
        #[arg(long)]
        sample_out: Option<PathBuf>,
        #[arg(long, default_value = "uniform")]
        dist: String,
    },
    /// Fit a hypothesis consistent with a JSONL sample.
    Learn {
        #[arg(long, value_enum)]
        class: LearnClass,
        #[arg(long)]
        sample: PathBuf,
        /// Player count; the highest id in the sample plus one when absent.
        #[arg(long)]
        n: Option<usize>,
        /// Conjunction width for `b` (default 1) and `hcn-kdl` (default 2).
        #[arg(long)]
        k: Option<usize>,
        /// One formula per line, used as every player's rule set (`hcn-linear`).
        #[arg(long)]
        formulas: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition that no sampled coalition blocks.
    Stabilize {
        #[arg(long, value_enum)]
        class: StabilizeClass,
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// JSON array of singleton values (`null` for unknown).
        #[arg(long)]
        singletons: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether a partition is core stable for an instance, with its exact
    /// blocking probability under a distribution.
    Verify {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, default_value = "uniform")]
        dist: String,
    },
    /// Sample resistant core check over a family of instances.
    SrcCheck {
        #[arg(long, num_args = 1.., required = true)]
        instances: Vec<PathBuf>,
        /// Distribution whose support is the sample: a spec string, a JSON
        /// file, or a builtin support name.
        #[arg(long)]
        support: String,
    },
    /// Seeded trials of one experiment; CSV rows and a JSON aggregate.
    Experiment {
        /// JSON config file; flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        id: Option<ExperimentId>,
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The learnability and stabilizability summary; exit 0 iff every row passes.
    ClassSummary {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}

fn read_sample(path: &Path) -> Result<Sample> {
    Ok(Sample::from_jsonl(&read(path)?)?)
}

fn read_game(path: &Path) -> Result<Game> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing instance {}", path.display()))
}

fn distribution(text: &str, n: usize) -> Result<CoalitionDistribution> {
    let spec = if Path::new(text).is_file() {
        serde_json::from_str::<DistributionSpec>(&read(Path::new(text))?)?
    } else if text.contains(':') || text == "uniform" || text.starts_with('{') {
        parse_distribution(text)?
    } else {
        DistributionSpec::Restricted { support: text.to_string() }
    };
    Ok(spec.build(n)?)
}

fn generate(class: GenClass, n: usize, seed: u64, friend_prob: f64) -> Game {
    let mut rng = trial_rng(seed, 0);
    match class {
        GenClass::As => Game::AdditivelySeparable { values: gen_pair_values(&mut rng, PairClass::AdditivelySeparable, n) },
        GenClass::Fractional => Game::Fractional { values: gen_pair_values(&mut rng, PairClass::Fractional, n) },
        GenClass::W => Game::WGame { values: gen_pair_values(&mut rng, PairClass::WGame, n) },
        GenClass::B => Game::b_game(gen_pair_values(&mut rng, PairClass::BGame, n)),
        GenClass::Fa => Game::Friends { graph: gen_friend_graph(&mut rng, n, friend_prob), profile: FriendsProfile::Appreciation },
        GenClass::Ea => Game::Friends { graph: gen_friend_graph(&mut rng, n, friend_prob), profile: FriendsProfile::Aversion },
        GenClass::Anonymous => Game::Anonymous { table: gen_anonymous(&mut rng, n, false) },
        GenClass::SizeDecreasing => Game::SizeDecreasing { game: gen_size_decreasing(&mut rng, n) },
        GenClass::BottomResponsive => Game::BottomResponsive { game: gen_pessimist(&mut rng, n) },
    }
}

#[derive(Serialize)]
struct Verification {
    stable: bool,
    blocking_coalition: Option<Vec<usize>>,
    blocking_probability: String,
    blocking_probability_f64: f64,
}

fn learn(class: LearnClass, sample: &Sample, n: usize, k: Option<usize>, formulas: Option<&Path>) -> Result<String> {
    Ok(match class {
        LearnClass::As => learn_linear_net(n, |i| families::additive(n, i), sample)?.to_dsl(),
        LearnClass::Fractional => learn_linear_net(n, |i| families::fractional(n, i), sample)?.to_dsl(),
        LearnClass::HcnLinear => {
            let Some(path) = formulas else { bail!("hcn-linear needs --formulas") };
            let phis = read(path)?
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| parse_formula(l).map_err(|e| anyhow::anyhow!("{e}")))
                .collect::<Result<Vec<_>>>()?;
            learn_linear_net(n, |_| phis.clone(), sample)?.to_dsl()
        }
        LearnClass::B => learn_hcn_kdl_net(k.unwrap_or(1), n, sample)?.to_dsl(),
        LearnClass::HcnKdl => learn_hcn_kdl_net(k.unwrap_or(2), n, sample)?.to_dsl(),
        LearnClass::Anonymous => serde_json::to_string_pretty(&learn_anonymous(sample, n)?)?,
        LearnClass::W => serde_json::to_string_pretty(&learn_w_games(n, sample))?,
    })
}

fn stabilize(
    class: StabilizeClass,
    sample: &Sample,
    n: usize,
    (eps, lambda): (f64, f64),
    singletons: Option<&Path>,
) -> Result<StabilizeOutcome> {
    Ok(match class {
        StabilizeClass::EnemyAversion => StabilizeOutcome::Partition(stabilize_enemy_aversion(n, sample)?),
        StabilizeClass::BottomResponsive => {
            let singles: Vec<Option<f64>> = match singletons {
                Some(p) => serde_json::from_str(&read(p)?)?,
                // fall back to singleton coalitions seen in the sample
                None => (0..n)
                    .map(|i| sample.iter().find(|e| e.coalition.len() == 1 && e.coalition.contains(i)).and_then(|e| e.value(i).copied()))
                    .collect(),
            };
            StabilizeOutcome::Partition(stabilize_bottom_responsive(n, sample, &singles)?)
        }
        StabilizeClass::W => stabilize_w_games(n, sample, &eps, &lambda)?.outcome,
    })
}

fn experiment_config(
    cli_unsafe: bool,
    config: Option<&Path>,
    id: Option<ExperimentId>,
    n: Option<usize>,
) -> Result<ExperimentConfig> {
    let mut cfg = match config {
        Some(p) => serde_json::from_str::<ExperimentConfig>(&read(p)?).with_context(|| format!("parsing {}", p.display()))?,
        None => {
            let (Some(id), Some(n)) = (id, n) else { bail!("experiment needs --config or both --id and --n") };
            ExperimentConfig::new(id, n)
        }
    };
    if let Some(id) = id {
        cfg.experiment = id;
    }
    if let Some(n) = n {
        cfg.n = n;
    }
    cfg.unsafe_n |= cli_unsafe;
    Ok(cfg)
}

fn configure_threads() -> Result<()> {
    if let Ok(text) = std::env::var("HEDONIC_PAC_THREADS") {
        let threads: usize = text.trim().parse().with_context(|| format!("HEDONIC_PAC_THREADS={text}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Gen { class, n, seed, friend_prob, out, sample, sample_out, dist } => {
            let game = generate(class, n, seed, friend_prob);
            emit_json(out.as_deref(), &game)?;
            if let (Some(m), Some(path)) = (sample, sample_out) {
                let mut rng = trial_rng(seed, 1);
                let coalitions = distribution(&dist, n)?.sample(&mut rng, m);
                fs::write(&path, Sample::observe(&game, coalitions).to_jsonl())?;
            }
        }
        Command::Learn { class, sample, n, k, formulas, out } => {
            let sample = read_sample(&sample)?;
            let n = n.unwrap_or_else(|| sample.span());
            emit(out.as_deref(), &learn(class, &sample, n, k, formulas.as_deref())?)?;
        }
        Command::Stabilize { class, sample, n, eps, delta: _, lambda, singletons, out } => {
            let sample = read_sample(&sample)?;
            let n = n.unwrap_or_else(|| sample.span());
            emit_json(out.as_deref(), &stabilize(class, &sample, n, (eps, lambda), singletons.as_deref())?)?;
        }
        Command::Verify { game, partition, dist } => {
            let game = read_game(&game)?;
            let text = read(&partition)?;
            // either a bare partition or the output of `stabilize`
            let pi: Partition = match serde_json::from_str::<StabilizeOutcome>(&text) {
                Ok(StabilizeOutcome::Partition(pi)) => pi,
                Ok(StabilizeOutcome::CoreEmpty) => bail!("{} reports an empty core", partition.display()),
                Err(_) => serde_json::from_str(&text).with_context(|| format!("parsing {}", partition.display()))?,
            };
            let dist = distribution(&dist, pi.players())?;
            let blocking = find_blocking(&pi, &game)?;
            let p = blocking_probability(&pi, &game, &dist)?;
            emit_json(
                None,
                &Verification {
                    stable: blocking.is_none(),
                    blocking_coalition: blocking.map(|c| c.members().collect()),
                    blocking_probability_f64: p.to_f64().unwrap_or(f64::NAN),
                    blocking_probability: p.literal(),
                },
            )?;
            return Ok(blocking.is_none());
        }
        Command::SrcCheck { instances, support } => {
            let games = instances.iter().map(|p| read_game(p)).collect::<Result<Vec<_>>>()?;
            let Some(first) = games.first() else { bail!("no instances") };
            let n = hedonic_core::core_model::Valuation::players(first);
            let sample = distribution(&support, n)?.support()?;
            println!("{:?}", check_src(&games, &sample)?);
        }
        Command::Experiment { config, id, class, n, eps, delta, lambda, m, trials, seed, dist, out } => {
            let mut cfg = experiment_config(cli.unsafe_n, config.as_deref(), id, n)?;
            cfg.class = class.or(cfg.class);
            cfg.eps = eps.unwrap_or(cfg.eps);
            cfg.delta = delta.unwrap_or(cfg.delta);
            cfg.lambda = lambda.unwrap_or(cfg.lambda);
            cfg.m = m.or(cfg.m);
            cfg.trials = trials.unwrap_or(cfg.trials);
            cfg.seed = seed.unwrap_or(cfg.seed);
            if let Some(d) = dist {
                cfg.distribution = parse_distribution(&d)?;
            }
            cfg.output = out.or(cfg.output);
            let report = run_experiment(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&report.aggregate)?);
        }
        Command::ClassSummary { n, trials, seed, json } => {
            let rows = class_summary(ClassSummaryOptions { n, trials, seed })?;
            for r in &rows {
                println!("{}", r.line());
            }
            if let Some(p) = json {
                fs::write(&p, serde_json::to_string_pretty(&rows)?)?;
            }
            return Ok(rows.iter().all(|r| r.passed));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Result<bool> {
        run(Cli::try_parse_from(std::iter::once("hedonic-pac").chain(args.iter().copied()))?)
    }

    fn path(dir: &tempfile::TempDir, name: &str) -> String {
        dir.path().join(name).to_string_lossy().into_owned()
    }

    #[test]
    fn gen_stabilize_verify_pipeline() {
        let dir = tempfile::tempdir().unwrap();
        let (game, sample, pi) = (path(&dir, "game.json"), path(&dir, "sample.jsonl"), path(&dir, "pi.json"));
        assert!(call(&["gen", "--class", "ea", "--n", "7", "--seed", "3", "--sample", "40", "--out", &game, "--sample-out", &sample]).unwrap());
        assert!(call(&["stabilize", "--class", "enemy-aversion", "--n", "7", "--sample", &sample, "--out", &pi]).unwrap());
        let outcome: StabilizeOutcome = serde_json::from_str(&fs::read_to_string(&pi).unwrap()).unwrap();
        let partition = outcome.partition().unwrap().clone();
        let g = read_game(Path::new(&game)).unwrap();
        let stable = find_blocking(&partition, &g).unwrap().is_none();
        assert_eq!(call(&["verify", "--game", &game, "--partition", &pi]).unwrap(), stable);
        // the stabilizer's output is consistent with the sample it saw
        let s = read_sample(Path::new(&sample)).unwrap();
        assert!(hedonic_core::core_model::consistent_with_sample(&partition, &s, &g));
    }

    #[test]
    fn learn_writes_a_net() {
        let dir = tempfile::tempdir().unwrap();
        let (sample, out) = (path(&dir, "s.jsonl"), path(&dir, "net.txt"));
        fs::write(&sample, "{\"coalition\":[0,1],\"values\":{\"0\":2,\"1\":-1}}\n{\"coalition\":[0],\"values\":{\"0\":0}}\n").unwrap();
        assert!(call(&["learn", "--class", "as", "--sample", &sample, "--out", &out]).unwrap());
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.starts_with("players 2;"), "{text}");
        assert!(text.contains("x1 -> 2"), "{text}");
        assert!(call(&["learn", "--class", "hcn-linear", "--sample", &sample]).is_err());
    }

    #[test]
    fn guard_errors_name_the_override() {
        let err = call(&["experiment", "--id", "w-exact", "--n", "13"]).unwrap_err();
        assert!(format!("{err:#}").contains("--unsafe-n"));
        let err = call(&["experiment", "--id", "w-green", "--n", "17", "--eps", "0.25", "--delta", "0.1"]).unwrap_err();
        assert!(format!("{err:#}").contains("guard of 16"));
        assert!(call(&["experiment", "--id", "w-green", "--n", "17", "--eps", "0.25", "--delta", "0.1", "--unsafe-n"]).is_ok());
    }

    #[test]
    fn class_summary_passes_on_a_small_run() {
        assert!(call(&["class-summary", "--n", "6", "--trials", "5"]).unwrap());
    }

    #[test]
    fn src_check_reads_instance_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut files = Vec::new();
        for (k, table) in [
            hedonic_core::game_classes::counterexample::instance_i1::<f64>(),
            hedonic_core::game_classes::counterexample::instance_i2::<f64>(),
        ]
        .into_iter()
        .enumerate()
        {
            let p = path(&dir, &format!("i{k}.json"));
            fs::write(&p, serde_json::to_string(&Game::Anonymous { table }).unwrap()).unwrap();
            files.push(p);
        }
        assert!(call(&["src-check", "--instances", &files[0], &files[1], "--support", "anon-i1-support"]).unwrap());
    }

    #[test]
    fn distribution_arguments() {
        assert_eq!(distribution("uniform", 3).unwrap().players(), 3);
        assert!(distribution("bounded:2:1", 4).unwrap().verify_bounded(&hedonic_core::Exact::from_integer(2.into())).unwrap());
        assert!(distribution("anon-i1-support", 7).is_ok());
        assert!(distribution("nonsense", 7).is_err());
    }
}
