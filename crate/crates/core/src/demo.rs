//! Demonstration campaigns.
//!
//! A campaign runs the GA on every seed of a range, keeps the trajectories
//! that beat the rule-based policy by the required margin and writes them
//! to a dataset directory:
//!
//! ```text
//! <dir>/manifest.json        resolved config, GA params, filter, index, digests
//! <dir>/traj_<seed>.jsonl    one transition per line, in step order
//! ```
//!
//! Each trajectory line is a JSON object with the fields, in order,
//! `obs` (33 numbers), `action` (0 or 1), `reward`, `next_obs` (33 numbers)
//! and `truncated`. Numbers are written as shortest round-trip decimals.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{run_policy, PolicyKind};
use crate::config::EnvConfig;
use crate::env::{Transition, OBS_DIM};
use crate::error::{Error, Result};
use crate::planners::{ga_optimize, rollout, ActionSequence, GaParams};
use crate::rng::derive_seed;

pub const MANIFEST_FILE: &str = "manifest.json";
/// `sha256sum`-style seal over the manifest bytes.
pub const MANIFEST_DIGEST_FILE: &str = "manifest.sha256";
pub const FORMAT: &str = "sortsim-demos/1";
pub const DEFAULT_MIN_IMPROVEMENT: f64 = 0.15;

/// Seeds reserved for demonstration campaigns by default.
pub const DEFAULT_DEMO_SEEDS: SeedRange = SeedRange {
    start: 1000,
    end: 1240,
};
/// Seeds reserved for benchmarking by default.
pub const DEFAULT_BENCH_SEEDS: SeedRange = SeedRange { start: 0, end: 100 };

pub fn trajectory_file_name(seed: u64) -> String {
    format!("traj_{seed}.jsonl")
}

/// Half-open seed interval `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawSeedRange")]
pub struct SeedRange {
    pub start: u64,
    pub end: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeedRange {
    start: u64,
    end: u64,
}

impl TryFrom<RawSeedRange> for SeedRange {
    type Error = Error;

    fn try_from(raw: RawSeedRange) -> Result<Self> {
        SeedRange::new(raw.start, raw.end)
    }
}

impl SeedRange {
    pub fn new(start: u64, end: u64) -> Result<Self> {
        if end < start {
            return Err(Error::Usage(format!(
                "seed range {start}..{end} is reversed"
            )));
        }
        Ok(SeedRange { start, end })
    }

    pub fn len(&self) -> u64 {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn contains(&self, seed: u64) -> bool {
        (self.start..self.end).contains(&seed)
    }

    pub fn overlaps(&self, other: &SeedRange) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn iter(&self) -> std::ops::Range<u64> {
        self.start..self.end
    }
}

impl fmt::Display for SeedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl FromStr for SeedRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("expected a seed range `start..end`, got `{s}`"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        SeedRange::new(start, end)
    }
}

/// `ga_reward` beats `rb_reward` by at least `min_improvement` of the
/// baseline's magnitude. For a positive baseline this is `ga >= 1.15 * rb`.
pub fn passes_filter(ga_reward: f64, rb_reward: f64, min_improvement: f64) -> bool {
    ga_reward >= rb_reward + min_improvement * rb_reward.abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoTrajectory {
    pub env_seed: u64,
    pub ga_seed: u64,
    pub actions: ActionSequence,
    pub transitions: Vec<Transition>,
    pub cumulative_reward: f64,
    pub baseline_reward: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rejection {
    pub env_seed: u64,
    pub ga_reward: f64,
    pub baseline_reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DemoOutcome {
    Accepted(DemoTrajectory),
    Rejected(Rejection),
}

/// Seed for the GA run on `env_seed`.
pub fn ga_seed_for(params: &GaParams, env_seed: u64) -> u64 {
    derive_seed(params.ga_seed, env_seed)
}

/// GA and rule-based runs on one seed, filtered.
pub fn generate_demo(
    config: &EnvConfig,
    env_seed: u64,
    params: &GaParams,
    min_improvement: f64,
) -> Result<DemoOutcome> {
    let n = config.episode_len;
    let baseline = run_policy(config, env_seed, n, PolicyKind::RuleBased)?.cumulative_reward;
    let ga_params = GaParams {
        ga_seed: ga_seed_for(params, env_seed),
        ..params.clone()
    };
    let ga = ga_optimize(config, env_seed, n, &ga_params)?;
    if !passes_filter(ga.best_reward, baseline, min_improvement) {
        return Ok(DemoOutcome::Rejected(Rejection {
            env_seed,
            ga_reward: ga.best_reward,
            baseline_reward: baseline,
        }));
    }
    let replay = rollout(config, env_seed, ga.best_sequence.as_slice())?;
    debug_assert_eq!(replay.cumulative_reward, ga.best_reward);
    Ok(DemoOutcome::Accepted(DemoTrajectory {
        env_seed,
        ga_seed: ga_params.ga_seed,
        actions: ga.best_sequence,
        transitions: replay.transitions,
        cumulative_reward: replay.cumulative_reward,
        baseline_reward: baseline,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexEntry {
    pub env_seed: u64,
    pub ga_seed: u64,
    pub file: String,
    pub actions: ActionSequence,
    pub transitions: usize,
    pub ga_reward: f64,
    pub baseline_reward: f64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub format: String,
    pub config: EnvConfig,
    pub ga_params: GaParams,
    pub min_improvement: f64,
    pub seeds: SeedRange,
    pub excluded_seeds: Vec<SeedRange>,
    pub accepted: usize,
    pub rejected: usize,
    pub trajectories: Vec<IndexEntry>,
    pub rejections: Vec<Rejection>,
}

impl DatasetManifest {
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest always serializes");
        s.push('\n');
        s
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let path = dir.as_ref().join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSpec {
    pub seeds: SeedRange,
    pub ga_params: GaParams,
    pub min_improvement: f64,
    /// Seeds the campaign must not touch (benchmark seeds).
    pub exclude: Vec<SeedRange>,
}

impl Default for CampaignSpec {
    fn default() -> Self {
        CampaignSpec {
            seeds: DEFAULT_DEMO_SEEDS,
            ga_params: GaParams::default(),
            min_improvement: DEFAULT_MIN_IMPROVEMENT,
            exclude: vec![DEFAULT_BENCH_SEEDS],
        }
    }
}

pub fn encode_trajectory(transitions: &[Transition]) -> String {
    let mut out = String::new();
    for t in transitions {
        out.push_str(&serde_json::to_string(t).expect("transitions always serialize"));
        out.push('\n');
    }
    out
}

pub fn decode_trajectory(text: &str) -> Result<Vec<Transition>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| Error::Serde(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Generate, filter and export demonstrations for every seed in the range.
pub fn run_campaign(
    config: &EnvConfig,
    spec: &CampaignSpec,
    out_dir: impl AsRef<Path>,
) -> Result<DatasetManifest> {
    let out_dir = out_dir.as_ref();
    config.validate()?;
    spec.ga_params.validate()?;
    if let Some(clash) = spec.exclude.iter().find(|x| x.overlaps(&spec.seeds)) {
        return Err(Error::Usage(format!(
            "campaign seeds {} overlap excluded seeds {clash}",
            spec.seeds
        )));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    clear_dataset_files(out_dir)?;

    let outcomes: Vec<DemoOutcome> = spec
        .seeds
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|seed| generate_demo(config, seed, &spec.ga_params, spec.min_improvement))
        .collect::<Result<_>>()?;

    let mut trajectories = Vec::new();
    let mut rejections = Vec::new();
    for outcome in outcomes {
        match outcome {
            DemoOutcome::Accepted(demo) => {
                let file = trajectory_file_name(demo.env_seed);
                let body = encode_trajectory(&demo.transitions);
                let path = out_dir.join(&file);
                fs::write(&path, &body).map_err(|e| Error::io(&path, e))?;
                trajectories.push(IndexEntry {
                    env_seed: demo.env_seed,
                    ga_seed: demo.ga_seed,
                    file,
                    actions: demo.actions,
                    transitions: demo.transitions.len(),
                    ga_reward: demo.cumulative_reward,
                    baseline_reward: demo.baseline_reward,
                    sha256: sha256_hex(body.as_bytes()),
                });
            }
            DemoOutcome::Rejected(r) => rejections.push(r),
        }
    }
    let manifest = DatasetManifest {
        format: FORMAT.to_string(),
        config: config.clone(),
        ga_params: spec.ga_params.clone(),
        min_improvement: spec.min_improvement,
        seeds: spec.seeds,
        excluded_seeds: spec.exclude.clone(),
        accepted: trajectories.len(),
        rejected: rejections.len(),
        trajectories,
        rejections,
    };
    let path = out_dir.join(MANIFEST_FILE);
    let text = manifest.to_canonical_string();
    fs::write(&path, &text).map_err(|e| Error::io(&path, e))?;
    let seal = out_dir.join(MANIFEST_DIGEST_FILE);
    fs::write(&seal, manifest_seal(text.as_bytes())).map_err(|e| Error::io(&seal, e))?;
    Ok(manifest)
}

fn manifest_seal(manifest_bytes: &[u8]) -> String {
    format!("{}  {MANIFEST_FILE}\n", sha256_hex(manifest_bytes))
}

fn is_dataset_file(name: &str) -> bool {
    name == MANIFEST_FILE
        || name == MANIFEST_DIGEST_FILE
        || (name.starts_with("traj_") && name.ends_with(".jsonl"))
}

fn clear_dataset_files(dir: &Path) -> Result<()> {
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if entry.file_name().to_str().is_some_and(is_dataset_file) {
            fs::remove_file(entry.path()).map_err(|e| Error::io(entry.path(), e))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    ManifestMissing,
    Schema,
    CanonicalForm,
    ManifestIndex,
    SeedOverlap,
    Digest,
    TransitionCount,
    Truncation,
    ActionMismatch,
    RewardSum,
    Filter,
    ReplayMismatch,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::ManifestMissing => "manifest-missing",
            Rule::Schema => "schema",
            Rule::CanonicalForm => "canonical-form",
            Rule::ManifestIndex => "manifest-index",
            Rule::SeedOverlap => "seed-overlap",
            Rule::Digest => "digest",
            Rule::TransitionCount => "transition-count",
            Rule::Truncation => "truncation",
            Rule::ActionMismatch => "action-mismatch",
            Rule::RewardSum => "reward-sum",
            Rule::Filter => "filter",
            Rule::ReplayMismatch => "replay-mismatch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub file: String,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.file, self.rule, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub trajectories_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// Re-check a dataset directory from scratch, including a bit-exact replay
/// of every trajectory from `(config, seed, actions)`.
pub fn validate_dataset(dir: impl AsRef<Path>) -> Result<ValidationReport> {
    let dir = dir.as_ref();
    let mut report = ValidationReport::default();
    let mut violation = |file: &str, rule: Rule, detail: String| {
        report.violations.push(Violation {
            file: file.to_string(),
            rule,
            detail,
        })
    };

    let manifest_path = dir.join(MANIFEST_FILE);
    let text = match fs::read(&manifest_path) {
        Ok(bytes) => bytes,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            violation(
                MANIFEST_FILE,
                Rule::ManifestMissing,
                "no manifest in directory".into(),
            );
            return Ok(report);
        }
        Err(e) => return Err(Error::io(manifest_path, e)),
    };
    let manifest: DatasetManifest = match std::str::from_utf8(&text)
        .map_err(|e| e.to_string())
        .and_then(|s| serde_json::from_str(s).map_err(|e| e.to_string()))
    {
        Ok(m) => m,
        Err(e) => {
            violation(MANIFEST_FILE, Rule::Schema, e);
            return Ok(report);
        }
    };
    let seal_path = dir.join(MANIFEST_DIGEST_FILE);
    match fs::read(&seal_path) {
        Ok(seal) if seal == manifest_seal(&text).as_bytes() => {}
        Ok(_) => violation(
            MANIFEST_DIGEST_FILE,
            Rule::Digest,
            "manifest digest does not match".into(),
        ),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => violation(
            MANIFEST_DIGEST_FILE,
            Rule::Digest,
            "manifest digest file missing".into(),
        ),
        Err(e) => return Err(Error::io(seal_path, e)),
    }
    if manifest.to_canonical_string().as_bytes() != text.as_slice() {
        violation(
            MANIFEST_FILE,
            Rule::CanonicalForm,
            "manifest bytes differ from canonical encoding".into(),
        );
    }
    if manifest.format != FORMAT {
        violation(
            MANIFEST_FILE,
            Rule::Schema,
            format!("unknown format `{}`", manifest.format),
        );
    }
    if let Err(e) = manifest.config.validate() {
        violation(MANIFEST_FILE, Rule::Schema, e.to_string());
        return Ok(report);
    }
    if let Err(e) = manifest.ga_params.validate() {
        violation(MANIFEST_FILE, Rule::Schema, e.to_string());
    }

    // index bookkeeping
    if manifest.accepted != manifest.trajectories.len()
        || manifest.rejected != manifest.rejections.len()
    {
        violation(
            MANIFEST_FILE,
            Rule::ManifestIndex,
            format!(
                "counts {}/{} disagree with index lengths {}/{}",
                manifest.accepted,
                manifest.rejected,
                manifest.trajectories.len(),
                manifest.rejections.len()
            ),
        );
    }
    let mut seen = BTreeSet::new();
    let all_seeds = manifest
        .trajectories
        .iter()
        .map(|e| e.env_seed)
        .chain(manifest.rejections.iter().map(|r| r.env_seed));
    for seed in all_seeds {
        if !seen.insert(seed) {
            violation(
                MANIFEST_FILE,
                Rule::ManifestIndex,
                format!("seed {seed} appears twice"),
            );
        }
        if !manifest.seeds.contains(seed) {
            violation(
                MANIFEST_FILE,
                Rule::ManifestIndex,
                format!("seed {seed} outside {}", manifest.seeds),
            );
        }
    }
    if seen.len() as u64 != manifest.seeds.len() {
        violation(
            MANIFEST_FILE,
            Rule::ManifestIndex,
            format!("{} seeds recorded for range {}", seen.len(), manifest.seeds),
        );
    }
    for x in &manifest.excluded_seeds {
        if x.overlaps(&manifest.seeds) {
            violation(
                MANIFEST_FILE,
                Rule::SeedOverlap,
                format!("seeds overlap excluded range {x}"),
            );
        }
    }
    let indexed: BTreeSet<&str> = manifest
        .trajectories
        .iter()
        .map(|e| e.file.as_str())
        .collect();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if let Some(name) = entry.file_name().to_str() {
            if name != MANIFEST_FILE
                && name != MANIFEST_DIGEST_FILE
                && is_dataset_file(name)
                && !indexed.contains(name)
            {
                violation(
                    name,
                    Rule::ManifestIndex,
                    "data file not listed in manifest".into(),
                );
            }
        }
    }
    for r in &manifest.rejections {
        if passes_filter(r.ga_reward, r.baseline_reward, manifest.min_improvement) {
            violation(
                MANIFEST_FILE,
                Rule::Filter,
                format!(
                    "seed {} recorded as rejected but passes the filter",
                    r.env_seed
                ),
            );
        }
    }

    let per_file: Vec<Vec<Violation>> = manifest
        .trajectories
        .par_iter()
        .map(|entry| check_entry(dir, &manifest, entry))
        .collect::<Result<_>>()?;
    for v in per_file.into_iter().flatten() {
        report.violations.push(v);
    }
    let baseline_checks: Vec<Option<Violation>> = manifest
        .rejections
        .par_iter()
        .map(|r| {
            let rb = run_policy(
                &manifest.config,
                r.env_seed,
                manifest.config.episode_len,
                PolicyKind::RuleBased,
            )?;
            Ok(
                (rb.cumulative_reward.to_bits() != r.baseline_reward.to_bits()).then(|| {
                    Violation {
                        file: MANIFEST_FILE.to_string(),
                        rule: Rule::ReplayMismatch,
                        detail: format!(
                            "seed {}: baseline reward {} does not replay (got {})",
                            r.env_seed, r.baseline_reward, rb.cumulative_reward
                        ),
                    }
                }),
            )
        })
        .collect::<Result<_>>()?;
    report
        .violations
        .extend(baseline_checks.into_iter().flatten());
    report.trajectories_checked = manifest.trajectories.len();
    Ok(report)
}

fn check_entry(
    dir: &Path,
    manifest: &DatasetManifest,
    entry: &IndexEntry,
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let file = entry.file.as_str();
    let mut v = |rule: Rule, detail: String| {
        out.push(Violation {
            file: file.to_string(),
            rule,
            detail,
        })
    };
    let config = &manifest.config;

    if file != trajectory_file_name(entry.env_seed) {
        v(
            Rule::ManifestIndex,
            format!("file name does not match seed {}", entry.env_seed),
        );
    }
    if entry.ga_seed != ga_seed_for(&manifest.ga_params, entry.env_seed) {
        v(
            Rule::Schema,
            "ga_seed is not derived from the campaign GA seed".into(),
        );
    }
    if !passes_filter(
        entry.ga_reward,
        entry.baseline_reward,
        manifest.min_improvement,
    ) {
        v(
            Rule::Filter,
            format!(
                "GA reward {} does not beat baseline {} by {}",
                entry.ga_reward, entry.baseline_reward, manifest.min_improvement
            ),
        );
    }
    if entry.actions.len() != config.episode_len || entry.transitions != config.episode_len {
        v(
            Rule::TransitionCount,
            format!(
                "index lists {} actions / {} transitions, episode_len is {}",
                entry.actions.len(),
                entry.transitions,
                config.episode_len
            ),
        );
    }

    // replay the recorded actions regardless of what is on disk
    let replay = match rollout(config, entry.env_seed, entry.actions.as_slice()) {
        Ok(r) => Some(r),
        Err(e) => {
            v(Rule::ReplayMismatch, format!("actions do not replay: {e}"));
            None
        }
    };
    if let Some(replay) = &replay {
        if replay.cumulative_reward.to_bits() != entry.ga_reward.to_bits() {
            v(
                Rule::ReplayMismatch,
                format!(
                    "index reward {} but replay gives {}",
                    entry.ga_reward, replay.cumulative_reward
                ),
            );
        }
    }
    let rb = run_policy(
        config,
        entry.env_seed,
        config.episode_len,
        PolicyKind::RuleBased,
    )?;
    if rb.cumulative_reward.to_bits() != entry.baseline_reward.to_bits() {
        v(
            Rule::ReplayMismatch,
            format!(
                "baseline reward {} does not replay (got {})",
                entry.baseline_reward, rb.cumulative_reward
            ),
        );
    }

    let path = dir.join(file);
    let bytes = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            v(
                Rule::ManifestIndex,
                "listed in manifest but missing on disk".into(),
            );
            return Ok(out);
        }
        Err(e) => return Err(Error::io(path, e)),
    };
    if sha256_hex(&bytes) != entry.sha256 {
        v(Rule::Digest, "sha256 does not match manifest".into());
    }
    let transitions = match std::str::from_utf8(&bytes)
        .map_err(|e| Error::Serde(e.to_string()))
        .and_then(decode_trajectory)
    {
        Ok(t) => t,
        Err(e) => {
            v(Rule::Schema, e.to_string());
            return Ok(out);
        }
    };
    if transitions.len() != entry.transitions || transitions.len() != config.episode_len {
        v(
            Rule::TransitionCount,
            format!(
                "{} transitions on disk, expected {}",
                transitions.len(),
                config.episode_len
            ),
        );
    }
    let last = transitions.len().saturating_sub(1);
    let mut sum = 0.0;
    for (i, t) in transitions.iter().enumerate() {
        sum += t.reward;
        if !(t.obs.is_finite() && t.next_obs.is_finite() && t.reward.is_finite()) {
            v(Rule::Schema, format!("line {}: non-finite value", i + 1));
        }
        debug_assert_eq!(t.obs.as_slice().len(), OBS_DIM);
        if t.truncated != (i == last && last + 1 == config.episode_len) {
            v(
                Rule::Truncation,
                format!("line {}: truncated = {}", i + 1, t.truncated),
            );
        }
        if entry.actions.as_slice().get(i) != Some(&t.action) {
            v(
                Rule::ActionMismatch,
                format!("line {}: action differs from manifest", i + 1),
            );
        }
        if let Some(expected) = replay.as_ref().and_then(|r| r.transitions.get(i)) {
            if expected != t || expected.reward.to_bits() != t.reward.to_bits() {
                v(
                    Rule::ReplayMismatch,
                    format!("line {}: transition differs from replay", i + 1),
                );
            }
        }
    }
    if sum.to_bits() != entry.ga_reward.to_bits() {
        v(
            Rule::RewardSum,
            format!(
                "rewards on disk sum to {sum}, index says {}",
                entry.ga_reward
            ),
        );
    }
    Ok(out)
}
