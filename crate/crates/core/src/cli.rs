//! The `sortsim` command line.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 dataset validation
//! failure, 3 I/O error. Progress goes to stderr; results go to stdout as
//! JSON or to files under `--out`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::baselines::{run_policy, PolicyKind};
use crate::bench::{self, BenchSpec, Strategy};
use crate::config::EnvConfig;
use crate::demo::{
    self, CampaignSpec, SeedRange, DEFAULT_BENCH_SEEDS, DEFAULT_DEMO_SEEDS, DEFAULT_MIN_IMPROVEMENT,
};
use crate::error::{Error, Result};
use crate::planners::{
    brute_force, ga_optimize, rollout, ActionSequence, GaParams, GenerationStats, BRUTE_FORCE_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sortsim",
    version,
    about = "Waste-sorting plant simulator, planners and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Shared {
    /// TOML file overriding environment defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (wall time only; outputs are identical for any value).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct GaOverrides {
    #[arg(long = "pop")]
    population: Option<usize>,
    #[arg(long = "gens")]
    generations: Option<usize>,
    #[arg(long = "cx")]
    crossover_rate: Option<f64>,
    #[arg(long = "mut")]
    mutation_rate: Option<f64>,
    #[arg(long = "ga-seed")]
    ga_seed: Option<u64>,
}

impl GaOverrides {
    fn resolve(&self) -> Result<GaParams> {
        let d = GaParams::default();
        let params = GaParams {
            population: self.population.unwrap_or(d.population),
            generations: self.generations.unwrap_or(d.generations),
            crossover_rate: self.crossover_rate.unwrap_or(d.crossover_rate),
            mutation_rate: self.mutation_rate.unwrap_or(d.mutation_rate),
            tournament_size: d.tournament_size,
            ga_seed: self.ga_seed.unwrap_or(d.ga_seed),
        };
        params.validate()?;
        Ok(params)
    }
}

fn parse_range(s: &str) -> std::result::Result<SeedRange, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one episode under a policy or a fixed action string.
    Simulate {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Steps to run (default: episode_len).
        #[arg(long)]
        len: Option<usize>,
        /// random, random:N, rule, zeros or ones.
        #[arg(long, default_value = "rule")]
        policy: PolicyKind,
        /// Replay this 0/1 string instead of running a policy.
        #[arg(long, conflicts_with = "policy")]
        actions: Option<ActionSequence>,
        /// Directory for trajectory.jsonl and run.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search over all 2^len action strings for one seed.
    Brute {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        len: usize,
    },
    /// Genetic-algorithm search for one seed.
    Ga {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        len: Option<usize>,
        #[command(flatten)]
        ga: GaOverrides,
        /// Directory for ga_result.json and ga_generations.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a filtered demonstration dataset.
    #[command(name = "demo-gen")]
    DemoGen {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_parser = parse_range, default_value_t = DEFAULT_DEMO_SEEDS)]
        seeds: SeedRange,
        #[command(flatten)]
        ga: GaOverrides,
        #[arg(long, default_value_t = DEFAULT_MIN_IMPROVEMENT)]
        min_improvement: f64,
        /// Reserved seed ranges (default: the benchmark range).
        #[arg(long, value_parser = parse_range)]
        exclude: Vec<SeedRange>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a demonstration dataset, including bit-exact replay.
    Validate {
        dir: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compare strategies over a seed range.
    Bench {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_parser = parse_range, default_value_t = DEFAULT_BENCH_SEEDS)]
        seeds: SeedRange,
        #[arg(long, default_value_t = 100)]
        len: usize,
        /// Comma-separated list of R, RB, BF, GA.
        #[arg(long, default_value = "R,RB,GA")]
        strategies: String,
        #[command(flatten)]
        ga: GaOverrides,
        #[arg(long, default_value_t = 0)]
        policy_seed: u64,
        /// Extra scores as CSV with header strategy_name,seed,reward.
        #[arg(long)]
        external: Vec<PathBuf>,
        /// Reserved seed ranges (default: the demonstration range).
        #[arg(long, value_parser = parse_range)]
        exclude: Vec<SeedRange>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print every parameter default.
    Defaults,
}

/// Parse `args` (program name first) and run. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sortsim: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_from_env() -> i32 {
    run(std::env::args_os())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Usage(_) | Error::Contract(_) => EXIT_USAGE,
        Error::Io { .. } | Error::Serde(_) => EXIT_IO,
    }
}

fn load_config(path: Option<&Path>) -> Result<EnvConfig> {
    match path {
        Some(p) => EnvConfig::load(p),
        None => Ok(EnvConfig::default()),
    }
}

fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Usage("--workers must be at least 1".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    pool.install(f)
}

fn check_len(len: usize, config: &EnvConfig) -> Result<usize> {
    if len == 0 || len > config.episode_len {
        return Err(Error::Usage(format!(
            "--len must lie in 1..={}, got {len}",
            config.episode_len
        )));
    }
    Ok(len)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{text}").map_err(|e| Error::io("<stdout>", e))
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Simulate {
            shared,
            seed,
            len,
            policy,
            actions,
            out,
        } => simulate(shared, seed, len, policy, actions, out),
        Command::Brute { shared, seed, len } => {
            let config = load_config(shared.config.as_deref())?;
            let cap = BRUTE_FORCE_CAP.min(config.episode_len);
            if len == 0 || len > cap {
                return Err(Error::Usage(format!(
                    "--len must lie in 1..={cap} for brute force, got {len}"
                )));
            }
            eprintln!(
                "brute force: seed {seed}, {} sequences of length {len}",
                1u64 << len
            );
            let result = with_workers(shared.workers, || brute_force(&config, seed, len))?;
            #[derive(Serialize)]
            struct Out {
                seed: u64,
                len: usize,
                best: ActionSequence,
                best_reward: f64,
                evaluations: u64,
            }
            print_json(&Out {
                seed,
                len,
                best: result.best,
                best_reward: result.best_reward,
                evaluations: result.evaluations,
            })?;
            Ok(EXIT_OK)
        }
        Command::Ga {
            shared,
            seed,
            len,
            ga,
            out,
        } => run_ga(shared, seed, len, ga, out),
        Command::DemoGen {
            shared,
            seeds,
            ga,
            min_improvement,
            exclude,
            out,
        } => {
            let config = load_config(shared.config.as_deref())?;
            if min_improvement.is_nan() || min_improvement < 0.0 {
                return Err(Error::Usage(format!(
                    "--min-improvement must be >= 0, got {min_improvement}"
                )));
            }
            let spec = CampaignSpec {
                seeds,
                ga_params: ga.resolve()?,
                min_improvement,
                exclude: if exclude.is_empty() {
                    vec![DEFAULT_BENCH_SEEDS]
                } else {
                    exclude
                },
            };
            eprintln!("demo-gen: seeds {seeds} -> {}", out.display());
            let manifest =
                with_workers(shared.workers, || demo::run_campaign(&config, &spec, &out))?;
            eprintln!(
                "demo-gen: {} accepted, {} rejected",
                manifest.accepted, manifest.rejected
            );
            #[derive(Serialize)]
            struct Out<'a> {
                out: &'a Path,
                accepted: usize,
                rejected: usize,
            }
            print_json(&Out {
                out: &out,
                accepted: manifest.accepted,
                rejected: manifest.rejected,
            })?;
            Ok(EXIT_OK)
        }
        Command::Validate { dir, workers } => {
            let report = with_workers(workers, || demo::validate_dataset(&dir))?;
            for v in &report.violations {
                eprintln!("{v}");
            }
            #[derive(Serialize)]
            struct Out {
                passed: bool,
                trajectories_checked: usize,
                violations: Vec<String>,
            }
            print_json(&Out {
                passed: report.passed(),
                trajectories_checked: report.trajectories_checked,
                violations: report.violations.iter().map(|v| v.to_string()).collect(),
            })?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_INVALID
            })
        }
        Command::Bench {
            shared,
            seeds,
            len,
            strategies,
            ga,
            policy_seed,
            external,
            exclude,
            out,
        } => {
            let config = load_config(shared.config.as_deref())?;
            let spec = BenchSpec {
                strategies: Strategy::parse_list(&strategies)?,
                seeds: seeds.iter().collect(),
                horizon: len,
                ga_params: ga.resolve()?,
                bf_cap: BRUTE_FORCE_CAP,
                policy_seed,
                exclude: if exclude.is_empty() {
                    vec![DEFAULT_DEMO_SEEDS]
                } else {
                    exclude
                },
            };
            spec.validate(&config)?;
            let external = external
                .iter()
                .map(bench::read_external_scores)
                .collect::<Result<Vec<_>>>()?;
            eprintln!(
                "bench: {} strategies x {} seeds, horizon {len}",
                spec.strategies.len(),
                spec.seeds.len()
            );
            let mut run = with_workers(shared.workers, || bench::run_bench(&config, &spec))?;
            bench::merge_external(&mut run.result, external.into_iter().flatten().collect())?;
            if let Some(dir) = &out {
                for p in bench::emit_outputs(&run, &config, &spec, dir)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            print_json(&run.result.summary)?;
            Ok(EXIT_OK)
        }
        Command::Defaults => {
            let ga = GaParams::default();
            let mut text = EnvConfig::defaults_table();
            text.push_str(&format!(
                "\n{:<22}{:<28}{}\n",
                "ga.population", ga.population, "candidates per generation"
            ));
            for (k, v, m) in [
                (
                    "ga.generations",
                    ga.generations.to_string(),
                    "bred generations",
                ),
                (
                    "ga.crossover_rate",
                    ga.crossover_rate.to_string(),
                    "single-point crossover probability",
                ),
                (
                    "ga.mutation_rate",
                    ga.mutation_rate.to_string(),
                    "per-bit flip probability",
                ),
                (
                    "ga.tournament_size",
                    ga.tournament_size.to_string(),
                    "tournament entrants",
                ),
                ("ga.ga_seed", ga.ga_seed.to_string(), "base GA seed"),
                (
                    "min_improvement",
                    DEFAULT_MIN_IMPROVEMENT.to_string(),
                    "demo filter margin over rule-based",
                ),
                (
                    "demo_seeds",
                    DEFAULT_DEMO_SEEDS.to_string(),
                    "demo-gen seed range",
                ),
                (
                    "bench_seeds",
                    DEFAULT_BENCH_SEEDS.to_string(),
                    "bench seed range",
                ),
                (
                    "brute_force_cap",
                    BRUTE_FORCE_CAP.to_string(),
                    "largest brute-force horizon",
                ),
            ] {
                text.push_str(&format!("{k:<22}{v:<28}{m}\n"));
            }
            print!("{text}");
            Ok(EXIT_OK)
        }
    }
}

fn simulate(
    shared: Shared,
    seed: u64,
    len: Option<usize>,
    policy: PolicyKind,
    actions: Option<ActionSequence>,
    out: Option<PathBuf>,
) -> Result<i32> {
    let config = load_config(shared.config.as_deref())?;
    let (label, actions, transitions, cumulative_reward) = match actions {
        Some(seq) => {
            if let Some(n) = len {
                if n != seq.len() {
                    return Err(Error::Usage(format!(
                        "--len {n} disagrees with {} actions",
                        seq.len()
                    )));
                }
            }
            check_len(seq.len(), &config)?;
            let r = rollout(&config, seed, seq.as_slice())?;
            (
                "replay".to_string(),
                seq,
                r.transitions,
                r.cumulative_reward,
            )
        }
        None => {
            let n = check_len(len.unwrap_or(config.episode_len), &config)?;
            let r = run_policy(&config, seed, n, policy)?;
            (
                policy.to_string(),
                r.actions,
                r.transitions,
                r.cumulative_reward,
            )
        }
    };
    eprintln!(
        "simulate: seed {seed}, {} steps, reward {cumulative_reward}",
        actions.len()
    );

    #[derive(Serialize)]
    struct Summary<'a> {
        seed: u64,
        policy: &'a str,
        steps: usize,
        actions: &'a ActionSequence,
        cumulative_reward: f64,
    }
    let summary = Summary {
        seed,
        policy: &label,
        steps: actions.len(),
        actions: &actions,
        cumulative_reward,
    };
    if let Some(dir) = out {
        write_file(
            &dir.join("trajectory.jsonl"),
            &demo::encode_trajectory(&transitions),
        )?;
        #[derive(Serialize)]
        struct RunEcho<'a> {
            config: &'a EnvConfig,
            #[serde(flatten)]
            summary: &'a Summary<'a>,
        }
        let echo = serde_json::to_string_pretty(&RunEcho {
            config: &config,
            summary: &summary,
        })? + "\n";
        write_file(&dir.join("run.json"), &echo)?;
    }
    print_json(&summary)?;
    Ok(EXIT_OK)
}

fn run_ga(
    shared: Shared,
    seed: u64,
    len: Option<usize>,
    ga: GaOverrides,
    out: Option<PathBuf>,
) -> Result<i32> {
    let config = load_config(shared.config.as_deref())?;
    let n = check_len(len.unwrap_or(config.episode_len), &config)?;
    let params = ga.resolve()?;
    eprintln!(
        "ga: seed {seed}, len {n}, population {}, generations {}",
        params.population, params.generations
    );
    let result = with_workers(shared.workers, || ga_optimize(&config, seed, n, &params))?;

    #[derive(Serialize)]
    struct Out<'a> {
        seed: u64,
        len: usize,
        ga_params: &'a GaParams,
        best: &'a ActionSequence,
        best_reward: f64,
        evaluations: u64,
        curve: Vec<&'a GenerationStats>,
    }
    let report = Out {
        seed,
        len: n,
        ga_params: &params,
        best: &result.best_sequence,
        best_reward: result.best_reward,
        evaluations: result.evaluations,
        curve: result.curve().collect(),
    };
    if let Some(dir) = out {
        write_file(
            &dir.join("ga_result.json"),
            &(serde_json::to_string_pretty(&report)? + "\n"),
        )?;
        let mut csv = String::from("generation,max,mean,min,best_so_far\n");
        for (g, s) in result.curve().enumerate() {
            csv.push_str(&format!(
                "{g},{},{},{},{}\n",
                s.max, s.mean, s.min, s.best_so_far
            ));
        }
        write_file(&dir.join("ga_generations.csv"), &csv)?;
    }
    print_json(&report)?;
    Ok(EXIT_OK)
}
