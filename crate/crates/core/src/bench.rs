//! Multi-seed strategy comparison.
//!
//! Output files (comma-separated, one header line):
//!
//! | file                 | header                                            |
//! |----------------------|---------------------------------------------------|
//! | `per_seed.csv`       | `strategy,seed,reward`                            |
//! | `summary.csv`        | `strategy,n,mean,std,median,min,max`              |
//! | `reward_curve.csv`   | `deviation,reward`                                |
//! | `reward_trace.csv`   | `step,dev_a,dev_b,dev_c,dev_d,reward,cumulative`  |
//! | `ga_generations.csv` | `seed,generation,max,mean,min,best_so_far`        |
//!
//! plus `run.json` echoing the resolved config and bench spec. `std` is the
//! population standard deviation.

use std::cmp::Ordering;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{run_policy, PolicyKind};
use crate::config::EnvConfig;
use crate::demo::{ga_seed_for, SeedRange};
use crate::env::{deviation_reward, obs_index, EnvState};
use crate::error::{Error, Result};
use crate::planners::{brute_force, ga_optimize, GaParams, GaResult, BRUTE_FORCE_CAP};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "R")]
    Random,
    #[serde(rename = "RB")]
    RuleBased,
    #[serde(rename = "BF")]
    BruteForce,
    #[serde(rename = "GA")]
    Ga,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Random,
        Strategy::RuleBased,
        Strategy::BruteForce,
        Strategy::Ga,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Strategy::Random => "R",
            Strategy::RuleBased => "RB",
            Strategy::BruteForce => "BF",
            Strategy::Ga => "GA",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Strategy>> {
        s.split(',').map(|p| p.trim().parse()).collect()
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "random" => Ok(Strategy::Random),
            "rb" | "rule" | "rule-based" => Ok(Strategy::RuleBased),
            "bf" | "brute" | "brute-force" => Ok(Strategy::BruteForce),
            "ga" => Ok(Strategy::Ga),
            _ => Err(Error::Usage(format!(
                "unknown strategy `{s}` (expected R, RB, BF or GA)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub strategies: Vec<Strategy>,
    pub seeds: Vec<u64>,
    pub horizon: usize,
    pub ga_params: GaParams,
    pub bf_cap: usize,
    /// Base seed for the random policy; each environment derives its own.
    pub policy_seed: u64,
    /// Seeds reserved elsewhere (demonstration campaigns).
    pub exclude: Vec<SeedRange>,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            strategies: vec![Strategy::Random, Strategy::RuleBased, Strategy::Ga],
            seeds: crate::demo::DEFAULT_BENCH_SEEDS.iter().collect(),
            horizon: 100,
            ga_params: GaParams::default(),
            bf_cap: BRUTE_FORCE_CAP,
            policy_seed: 0,
            exclude: vec![crate::demo::DEFAULT_DEMO_SEEDS],
        }
    }
}

impl BenchSpec {
    pub fn validate(&self, config: &EnvConfig) -> Result<()> {
        if self.strategies.is_empty() || self.seeds.is_empty() {
            return Err(Error::Usage(
                "bench needs at least one strategy and one seed".into(),
            ));
        }
        if self.horizon > config.episode_len {
            return Err(Error::Usage(format!(
                "horizon {} exceeds episode_len {}",
                self.horizon, config.episode_len
            )));
        }
        let cap = self.bf_cap.min(BRUTE_FORCE_CAP);
        if self.strategies.contains(&Strategy::BruteForce) && self.horizon > cap {
            return Err(Error::Usage(format!(
                "brute force needs horizon <= {cap}, got {}",
                self.horizon
            )));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Usage("bench seeds must be unique".into()));
        }
        for seed in &self.seeds {
            if let Some(x) = self.exclude.iter().find(|x| x.contains(*seed)) {
                return Err(Error::Usage(format!(
                    "bench seed {seed} lies in excluded range {x}"
                )));
            }
        }
        self.ga_params.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedReward {
    pub strategy: String,
    pub seed: u64,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: String,
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub per_seed: Vec<SeedReward>,
    pub summary: Vec<StrategySummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRun {
    pub result: BenchResult,
    /// GA runs by seed, for the generation table.
    pub ga_runs: Vec<(u64, GaResult)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub reward: f64,
    pub ga: Option<GaResult>,
}

/// Cumulative reward of one strategy on one seed over `spec.horizon` steps.
///
/// Random and rule-based run closed loop; brute force and GA plan against
/// the frozen seed and report the reward of their best sequence.
pub fn evaluate_strategy(
    strategy: Strategy,
    config: &EnvConfig,
    seed: u64,
    spec: &BenchSpec,
) -> Result<Evaluation> {
    let n = spec.horizon;
    let eval = match strategy {
        Strategy::Random => {
            let policy = PolicyKind::Random {
                policy_seed: derive_seed(spec.policy_seed, seed),
            };
            Evaluation {
                reward: run_policy(config, seed, n, policy)?.cumulative_reward,
                ga: None,
            }
        }
        Strategy::RuleBased => Evaluation {
            reward: run_policy(config, seed, n, PolicyKind::RuleBased)?.cumulative_reward,
            ga: None,
        },
        Strategy::BruteForce => {
            if n > spec.bf_cap {
                return Err(Error::contract(format!(
                    "brute force horizon {n} above cap {}",
                    spec.bf_cap
                )));
            }
            Evaluation {
                reward: brute_force(config, seed, n)?.best_reward,
                ga: None,
            }
        }
        Strategy::Ga => {
            let params = GaParams {
                ga_seed: ga_seed_for(&spec.ga_params, seed),
                ..spec.ga_params.clone()
            };
            let ga = ga_optimize(config, seed, n, &params)?;
            Evaluation {
                reward: ga.best_reward,
                ga: Some(ga),
            }
        }
    };
    Ok(eval)
}

/// Evaluate every `(strategy, seed)` cell. Results are ordered by strategy
/// then seed, independent of thread count.
pub fn run_bench(config: &EnvConfig, spec: &BenchSpec) -> Result<BenchRun> {
    config.validate()?;
    spec.validate(config)?;
    let cells: Vec<(Strategy, u64)> = spec
        .strategies
        .iter()
        .flat_map(|&s| spec.seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    let evals: Vec<Evaluation> = cells
        .par_iter()
        .map(|&(s, seed)| evaluate_strategy(s, config, seed, spec))
        .collect::<Result<_>>()?;

    let mut per_seed = Vec::with_capacity(cells.len());
    let mut ga_runs = Vec::new();
    for ((strategy, seed), eval) in cells.into_iter().zip(evals) {
        per_seed.push(SeedReward {
            strategy: strategy.label().to_string(),
            seed,
            reward: eval.reward,
        });
        if let Some(ga) = eval.ga {
            ga_runs.push((seed, ga));
        }
    }
    let summary = summarize(&per_seed)?;
    Ok(BenchRun {
        result: BenchResult { per_seed, summary },
        ga_runs,
    })
}

fn strategy_rank(name: &str) -> (usize, &str) {
    let known = Strategy::ALL.iter().position(|s| s.label() == name);
    (known.unwrap_or(Strategy::ALL.len()), name)
}

/// Per-strategy statistics. Values are sorted before reduction so the
/// result does not depend on record order.
pub fn summarize(records: &[SeedReward]) -> Result<Vec<StrategySummary>> {
    let mut names: Vec<&str> = records.iter().map(|r| r.strategy.as_str()).collect();
    names.sort_by(|a, b| strategy_rank(a).cmp(&strategy_rank(b)));
    names.dedup();
    if names.is_empty() {
        return Err(Error::Usage("nothing to summarize".into()));
    }
    names
        .into_iter()
        .map(|name| {
            let mut v: Vec<f64> = records
                .iter()
                .filter(|r| r.strategy == name)
                .map(|r| r.reward)
                .collect();
            if v.iter().any(|x| x.is_nan()) {
                return Err(Error::Usage(format!("NaN reward for strategy {name}")));
            }
            v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            let n = v.len();
            let mean = v.iter().sum::<f64>() / n as f64;
            let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
            let median = if n % 2 == 1 {
                v[n / 2]
            } else {
                (v[n / 2 - 1] + v[n / 2]) / 2.0
            };
            Ok(StrategySummary {
                strategy: name.to_string(),
                n,
                mean,
                std: var.sqrt(),
                median,
                min: v[0],
                max: v[n - 1],
            })
        })
        .collect()
}

#[derive(Debug, Deserialize)]
struct ExternalRow {
    strategy_name: String,
    seed: u64,
    reward: f64,
}

/// Read a `strategy_name,seed,reward` file of scores produced elsewhere
/// (e.g. trained RL agents) for merging into the summary.
pub fn read_external_scores(path: impl AsRef<Path>) -> Result<Vec<SeedReward>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["strategy_name", "seed", "reward"] {
        return Err(Error::Usage(format!(
            "{}: expected header strategy_name,seed,reward",
            path.display()
        )));
    }
    reader
        .deserialize::<ExternalRow>()
        .map(|row| {
            let row = row.map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
            Ok(SeedReward {
                strategy: row.strategy_name,
                seed: row.seed,
                reward: row.reward,
            })
        })
        .collect()
}

/// Merge external scores into a result and recompute the summary.
pub fn merge_external(result: &mut BenchResult, external: Vec<SeedReward>) -> Result<()> {
    result.per_seed.extend(external);
    result.summary = summarize(&result.per_seed)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub deviation: f64,
    pub reward: f64,
}

/// Deviation reward sampled on a grid from -0.20 to +0.20 in steps of 0.01.
pub fn reward_curve(config: &EnvConfig) -> Vec<CurveSample> {
    (-20..=20)
        .map(|k| {
            let deviation = k as f64 / 100.0;
            CurveSample {
                deviation,
                reward: deviation_reward(deviation, config.penalty_factor),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub dev_a: f64,
    pub dev_b: f64,
    pub dev_c: f64,
    pub dev_d: f64,
    pub reward: f64,
    pub cumulative: f64,
}

/// Per-step purity deviations and reward under the rule-based policy.
pub fn reward_trace(config: &EnvConfig, seed: u64, steps: usize) -> Result<Vec<TraceRow>> {
    let (mut state, _) = EnvState::reset(config, seed);
    let mut cumulative = 0.0;
    let mut rows = Vec::with_capacity(steps);
    for step in 0..steps.min(config.episode_len) {
        let action = PolicyKind::RuleBased.act(&state);
        let r = state.step(action)?;
        cumulative += r.reward;
        let d = |m: usize| r.observation[obs_index::DEVIATION + m];
        rows.push(TraceRow {
            step,
            dev_a: d(0),
            dev_b: d(1),
            dev_c: d(2),
            dev_d: d(3),
            reward: r.reward,
            cumulative,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct GenerationRow {
    seed: u64,
    generation: usize,
    max: f64,
    mean: f64,
    min: f64,
    best_so_far: f64,
}

pub const PER_SEED_FILE: &str = "per_seed.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const REWARD_CURVE_FILE: &str = "reward_curve.csv";
pub const REWARD_TRACE_FILE: &str = "reward_trace.csv";
pub const GA_GENERATIONS_FILE: &str = "ga_generations.csv";
pub const RUN_FILE: &str = "run.json";

const TRACE_STEPS: usize = 10;

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::Serde(format!("{}: {e}", path.display())))?;
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Write every bench output file into `out_dir` and return their paths.
pub fn emit_outputs(
    run: &BenchRun,
    config: &EnvConfig,
    spec: &BenchSpec,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let path = |name: &str| out_dir.join(name);

    write_csv(
        &path(PER_SEED_FILE),
        &["strategy", "seed", "reward"],
        &run.result.per_seed,
    )?;
    write_csv(
        &path(SUMMARY_FILE),
        &["strategy", "n", "mean", "std", "median", "min", "max"],
        &run.result.summary,
    )?;
    write_csv(
        &path(REWARD_CURVE_FILE),
        &["deviation", "reward"],
        &reward_curve(config),
    )?;
    let trace_seed = spec.seeds.first().copied().unwrap_or(0);
    write_csv(
        &path(REWARD_TRACE_FILE),
        &[
            "step",
            "dev_a",
            "dev_b",
            "dev_c",
            "dev_d",
            "reward",
            "cumulative",
        ],
        &reward_trace(config, trace_seed, TRACE_STEPS)?,
    )?;
    let generations: Vec<GenerationRow> = run
        .ga_runs
        .iter()
        .flat_map(|(seed, ga)| {
            ga.curve()
                .enumerate()
                .map(move |(generation, g)| GenerationRow {
                    seed: *seed,
                    generation,
                    max: g.max,
                    mean: g.mean,
                    min: g.min,
                    best_so_far: g.best_so_far,
                })
        })
        .collect();
    write_csv(
        &path(GA_GENERATIONS_FILE),
        &["seed", "generation", "max", "mean", "min", "best_so_far"],
        &generations,
    )?;

    #[derive(Serialize)]
    struct RunEcho<'a> {
        config: &'a EnvConfig,
        spec: &'a BenchSpec,
    }
    let echo = serde_json::to_string_pretty(&RunEcho { config, spec })? + "\n";
    fs::write(path(RUN_FILE), echo).map_err(|e| Error::io(path(RUN_FILE), e))?;

    Ok([
        PER_SEED_FILE,
        SUMMARY_FILE,
        REWARD_CURVE_FILE,
        REWARD_TRACE_FILE,
        GA_GENERATIONS_FILE,
        RUN_FILE,
    ]
    .iter()
    .map(|n| path(n))
    .collect())
}
