//! Offline planners over binary action sequences.
//!
//! Both planners score candidates with [`rollout`], which replays a whole
//! sequence against the input stream frozen by the environment seed. That
//! look-ahead is what makes planned rewards an upper bound rather than a
//! controller.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::EnvConfig;
use crate::env::{Action, EnvState, Transition};
use crate::error::{Error, Result};

/// Largest horizon `brute_force` accepts (2^20 sequences).
pub const BRUTE_FORCE_CAP: usize = 20;

/// Subtrees explored independently by `brute_force`.
const SPLIT_BITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ActionSequence(pub Vec<Action>);

impl ActionSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Action] {
        &self.0
    }

    /// Sequence whose bits are the binary digits of `index`, most
    /// significant first.
    pub fn from_index(index: u64, n: usize) -> Self {
        ActionSequence(
            (0..n)
                .map(|i| {
                    if (index >> (n - 1 - i)) & 1 == 1 {
                        Action::BoostBD
                    } else {
                        Action::BoostAC
                    }
                })
                .collect(),
        )
    }
}

impl From<Vec<Action>> for ActionSequence {
    fn from(v: Vec<Action>) -> Self {
        ActionSequence(v)
    }
}

impl fmt::Display for ActionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for ActionSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.bytes()
            .map(|b| match b {
                b'0' => Ok(Action::BoostAC),
                b'1' => Ok(Action::BoostBD),
                _ => Err(Error::Serde(format!(
                    "action string may only contain 0 and 1: `{s}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ActionSequence)
    }
}

impl Serialize for ActionSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ActionSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rollout {
    pub cumulative_reward: f64,
    pub transitions: Vec<Transition>,
}

/// Reset with `(config, seed)` and apply `actions` in order.
pub fn rollout(config: &EnvConfig, seed: u64, actions: &[Action]) -> Result<Rollout> {
    let (mut state, mut obs) = EnvState::reset(config, seed);
    let mut total = 0.0;
    let mut transitions = Vec::with_capacity(actions.len());
    for &action in actions {
        let step = state.step(action)?;
        total += step.reward;
        transitions.push(Transition {
            obs,
            action,
            reward: step.reward,
            next_obs: step.observation,
            truncated: step.truncated,
        });
        obs = step.observation;
    }
    Ok(Rollout {
        cumulative_reward: total,
        transitions,
    })
}

/// Cumulative reward of `actions`; same value as [`rollout`] without
/// materializing transitions.
pub fn rollout_reward(config: &EnvConfig, seed: u64, actions: &[Action]) -> Result<f64> {
    let (mut state, _) = EnvState::reset(config, seed);
    let mut total = 0.0;
    for &action in actions {
        total += state.step_reward(action)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceResult {
    pub best: ActionSequence,
    pub best_reward: f64,
    pub evaluations: u64,
}

/// Exhaustive search over all `2^n` sequences. Ties resolve to the
/// lexicographically smallest sequence.
///
/// Shared prefixes are simulated once: the search walks the binary tree
/// depth first, cloning the state at each branch, and sums rewards in the
/// same order as [`rollout_reward`], so the reported reward is identical to
/// a replay of the returned sequence.
pub fn brute_force(config: &EnvConfig, seed: u64, n: usize) -> Result<BruteForceResult> {
    if n > BRUTE_FORCE_CAP {
        return Err(Error::contract(format!(
            "brute force horizon {n} exceeds the cap of {BRUTE_FORCE_CAP}"
        )));
    }
    if n > config.episode_len {
        return Err(Error::contract(format!(
            "horizon {n} exceeds episode_len {}",
            config.episode_len
        )));
    }
    let split = n.min(SPLIT_BITS);
    let subtrees: Vec<Option<(f64, Vec<Action>)>> = (0..1u64 << split)
        .into_par_iter()
        .map(|prefix_index| {
            let prefix = ActionSequence::from_index(prefix_index, split).0;
            let (mut state, _) = EnvState::reset(config, seed);
            let mut acc = 0.0;
            for &a in &prefix {
                acc += state.step_reward(a)?;
            }
            let mut path = prefix;
            let mut best = None;
            search(state, n - split, acc, &mut path, &mut best)?;
            Ok(best)
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(f64, Vec<Action>)> = None;
    for candidate in subtrees.into_iter().flatten() {
        if best.as_ref().is_none_or(|(r, _)| candidate.0 > *r) {
            best = Some(candidate);
        }
    }
    let (best_reward, best) = best.expect("at least one sequence is evaluated");
    Ok(BruteForceResult {
        best: ActionSequence(best),
        best_reward,
        evaluations: 1u64 << n,
    })
}

fn search(
    state: EnvState,
    remaining: usize,
    acc: f64,
    path: &mut Vec<Action>,
    best: &mut Option<(f64, Vec<Action>)>,
) -> Result<()> {
    if remaining == 0 {
        if best.as_ref().is_none_or(|(r, _)| acc > *r) {
            *best = Some((acc, path.clone()));
        }
        return Ok(());
    }
    let mut zero = state.clone();
    let r = zero.step_reward(Action::BoostAC)?;
    path.push(Action::BoostAC);
    search(zero, remaining - 1, acc + r, path, best)?;
    path.pop();

    let mut one = state;
    let r = one.step_reward(Action::BoostBD)?;
    path.push(Action::BoostBD);
    search(one, remaining - 1, acc + r, path, best)?;
    path.pop();
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Independent flip probability per bit.
    pub mutation_rate: f64,
    pub tournament_size: usize,
    pub ga_seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population: 100,
            generations: 25,
            crossover_rate: 0.7,
            mutation_rate: 0.1,
            tournament_size: 2,
            ga_seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::Usage(format!(
                "GA population must be >= 2, got {}",
                self.population
            )));
        }
        for (name, v) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Usage(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.tournament_size == 0 {
            return Err(Error::Usage("tournament_size must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub max: f64,
    pub mean: f64,
    pub min: f64,
    /// Archived best over every candidate evaluated so far.
    pub best_so_far: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    pub best_sequence: ActionSequence,
    pub best_reward: f64,
    /// Statistics of the random initial population.
    pub initial: GenerationStats,
    /// One entry per bred generation.
    pub per_generation: Vec<GenerationStats>,
    pub evaluations: u64,
}

impl GaResult {
    /// Initial population followed by every bred generation.
    pub fn curve(&self) -> impl Iterator<Item = &GenerationStats> {
        std::iter::once(&self.initial).chain(&self.per_generation)
    }
}

/// Single-point crossover: the children swap tails after `cut`.
pub fn crossover(a: &[Action], b: &[Action], cut: usize) -> Result<(Vec<Action>, Vec<Action>)> {
    if a.len() != b.len() {
        return Err(Error::contract(format!(
            "crossover parents differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if cut == 0 || cut >= a.len() {
        return Err(Error::contract(format!(
            "crossover cut {cut} outside [1, {}]",
            a.len().saturating_sub(1)
        )));
    }
    let mut x = a[..cut].to_vec();
    x.extend_from_slice(&b[cut..]);
    let mut y = b[..cut].to_vec();
    y.extend_from_slice(&a[cut..]);
    Ok((x, y))
}

/// Flip each bit independently with probability `rate`.
pub fn mutate<R: Rng + ?Sized>(seq: &mut [Action], rate: f64, rng: &mut R) {
    for a in seq.iter_mut() {
        if rng.gen::<f64>() < rate {
            *a = a.flipped();
        }
    }
}

/// Draw `size` indices uniformly with replacement and return the fittest;
/// on equal fitness the earlier draw wins.
pub fn tournament_select<R: Rng + ?Sized>(
    fitnesses: &[f64],
    size: usize,
    rng: &mut R,
) -> Result<usize> {
    if fitnesses.is_empty() {
        return Err(Error::contract("tournament over an empty population"));
    }
    let mut winner = rng.gen_range(0..fitnesses.len());
    for _ in 1..size {
        let challenger = rng.gen_range(0..fitnesses.len());
        if fitnesses[challenger] > fitnesses[winner] {
            winner = challenger;
        }
    }
    Ok(winner)
}

/// GA over length-`n` sequences scored by the frozen-seed rollout.
pub fn ga_optimize(config: &EnvConfig, seed: u64, n: usize, params: &GaParams) -> Result<GaResult> {
    if n > config.episode_len {
        return Err(Error::contract(format!(
            "horizon {n} exceeds episode_len {}",
            config.episode_len
        )));
    }
    evolve(n, params, |seq| rollout_reward(config, seed, seq))
}

/// The GA loop with an arbitrary fitness function.
///
/// All random choices for a generation are drawn on the calling thread
/// from one ChaCha stream seeded by `ga_seed` before any fitness call, and
/// results are gathered by candidate index, so the outcome does not depend
/// on how many worker threads evaluate fitness.
pub fn evolve<F>(n: usize, params: &GaParams, fitness: F) -> Result<GaResult>
where
    F: Fn(&[Action]) -> Result<f64> + Sync,
{
    params.validate()?;
    if n == 0 {
        return Err(Error::contract("GA horizon must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.ga_seed);
    let mut population: Vec<Vec<Action>> = (0..params.population)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen::<bool>() {
                        Action::BoostBD
                    } else {
                        Action::BoostAC
                    }
                })
                .collect()
        })
        .collect();

    let evaluate =
        |pop: &[Vec<Action>]| -> Result<Vec<f64>> { pop.par_iter().map(|s| fitness(s)).collect() };

    let mut fitnesses = evaluate(&population)?;
    let mut evaluations = population.len() as u64;
    let mut best: Option<(f64, usize)> = None;
    archive(&mut best, &fitnesses);
    let mut best_sequence = population[best.expect("population is non-empty").1].clone();
    let initial = stats(&fitnesses, best.unwrap().0);

    let mut per_generation = Vec::with_capacity(params.generations);
    for _ in 0..params.generations {
        let mut children = Vec::with_capacity(params.population + 1);
        while children.len() < params.population {
            let pa = tournament_select(&fitnesses, params.tournament_size, &mut rng)?;
            let pb = tournament_select(&fitnesses, params.tournament_size, &mut rng)?;
            let (mut ca, mut cb) = if rng.gen::<f64>() < params.crossover_rate && n >= 2 {
                let cut = rng.gen_range(1..n);
                crossover(&population[pa], &population[pb], cut)?
            } else {
                (population[pa].clone(), population[pb].clone())
            };
            mutate(&mut ca, params.mutation_rate, &mut rng);
            mutate(&mut cb, params.mutation_rate, &mut rng);
            children.push(ca);
            children.push(cb);
        }
        // odd population: the last child is dropped
        children.truncate(params.population);
        population = children;
        fitnesses = evaluate(&population)?;
        evaluations += population.len() as u64;

        let previous = best.unwrap().0;
        let mut generation_best = None;
        archive(&mut generation_best, &fitnesses);
        let (gen_max, gen_idx) = generation_best.unwrap();
        if gen_max > previous {
            best = Some((gen_max, gen_idx));
            best_sequence = population[gen_idx].clone();
        }
        per_generation.push(stats(&fitnesses, best.unwrap().0));
    }

    Ok(GaResult {
        best_sequence: ActionSequence(best_sequence),
        best_reward: best.unwrap().0,
        initial,
        per_generation,
        evaluations,
    })
}

/// Keep the first index holding the strict maximum.
fn archive(best: &mut Option<(f64, usize)>, fitnesses: &[f64]) {
    for (i, &f) in fitnesses.iter().enumerate() {
        if best.is_none_or(|(b, _)| f > b) {
            *best = Some((f, i));
        }
    }
}

fn stats(fitnesses: &[f64], best_so_far: f64) -> GenerationStats {
    let max = fitnesses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = fitnesses.iter().sum::<f64>() / fitnesses.len() as f64;
    GenerationStats {
        max,
        mean,
        min,
        best_so_far,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::rule_based_policy;

    fn bits(s: &str) -> Vec<Action> {
        s.parse::<ActionSequence>().unwrap().0
    }

    #[test]
    fn sequence_string_roundtrip() {
        let s: ActionSequence = "0110".parse().unwrap();
        assert_eq!(s.to_string(), "0110");
        assert!("012".parse::<ActionSequence>().is_err());
        assert_eq!(ActionSequence::from_index(0b101, 3).to_string(), "101");
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"0110\"");
    }

    #[test]
    fn empty_rollout() {
        let r = rollout(&EnvConfig::default(), 3, &[]).unwrap();
        assert_eq!(r.cumulative_reward, 0.0);
        assert!(r.transitions.is_empty());
    }

    #[test]
    fn rollout_is_pure_and_sums_transitions() {
        let config = EnvConfig::default();
        let seq = bits("0101100111010001");
        let a = rollout(&config, 12, &seq).unwrap();
        let b = rollout(&config, 12, &seq).unwrap();
        assert_eq!(a, b);
        let mut sum = 0.0;
        for t in &a.transitions {
            sum += t.reward;
        }
        assert_eq!(sum, a.cumulative_reward);
        assert_eq!(
            rollout_reward(&config, 12, &seq).unwrap(),
            a.cumulative_reward
        );
        for w in a.transitions.windows(2) {
            assert_eq!(w[0].next_obs, w[1].obs);
        }
    }

    #[test]
    fn rollout_past_episode_end_fails() {
        let config = EnvConfig {
            episode_len: 3,
            ..EnvConfig::default()
        };
        assert!(rollout(&config, 1, &bits("0000")).is_err());
    }

    /// Enumerate every sequence with independent full replays.
    fn enumerate(config: &EnvConfig, seed: u64, n: usize) -> (f64, ActionSequence) {
        let mut best = (f64::NEG_INFINITY, ActionSequence::default());
        for i in 0..1u64 << n {
            let seq = ActionSequence::from_index(i, n);
            let r = rollout(config, seed, seq.as_slice())
                .unwrap()
                .cumulative_reward;
            if r > best.0 {
                best = (r, seq);
            }
        }
        best
    }

    #[test]
    fn brute_force_matches_enumeration() {
        let config = EnvConfig::default();
        for (seed, n) in [(1, 1), (2, 4), (3, 7), (4, 9)] {
            let bf = brute_force(&config, seed, n).unwrap();
            let (r, seq) = enumerate(&config, seed, n);
            assert_eq!(bf.best_reward, r, "seed {seed}");
            assert_eq!(bf.best, seq);
            assert_eq!(bf.evaluations, 1 << n);
            assert_eq!(
                rollout_reward(&config, seed, bf.best.as_slice()).unwrap(),
                bf.best_reward
            );
        }
    }

    #[test]
    fn brute_force_tie_prefers_zeros() {
        // no jitter, no input variation and no contamination: both modes
        // give pure containers, so every sequence scores the same
        let config = EnvConfig {
            contamination_coeff: 0.0,
            ..EnvConfig::default()
        };
        let bf = brute_force(&config, 9, 3).unwrap();
        let all: Vec<f64> = (0..8)
            .map(|i| {
                rollout_reward(&config, 9, ActionSequence::from_index(i, 3).as_slice()).unwrap()
            })
            .collect();
        assert!(all.iter().all(|&r| r == all[0]));
        assert_eq!(bf.best.to_string(), "000");
    }

    #[test]
    fn brute_force_cap() {
        let err = brute_force(&EnvConfig::default(), 0, 21).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn brute_force_dominates_rule_based_sequence() {
        let config = EnvConfig::default();
        let n = 10;
        let (mut s, _) = EnvState::reset(&config, 31);
        let mut seq = Vec::new();
        for _ in 0..n {
            let a = rule_based_policy(&s.head_batch());
            seq.push(a);
            s.step(a).unwrap();
        }
        let rb = rollout_reward(&config, 31, &seq).unwrap();
        assert!(brute_force(&config, 31, n).unwrap().best_reward >= rb);
    }

    #[test]
    fn crossover_examples() {
        let (a, b) = crossover(&bits("000000"), &bits("111111"), 3).unwrap();
        assert_eq!(ActionSequence(a).to_string(), "000111");
        assert_eq!(ActionSequence(b).to_string(), "111000");
        let p = bits("010011");
        let (a, b) = crossover(&p, &p, 2).unwrap();
        assert_eq!((a.as_slice(), b.as_slice()), (p.as_slice(), p.as_slice()));
        assert!(crossover(&p, &p, 0).is_err());
        assert!(crossover(&p, &p, 6).is_err());
        assert!(crossover(&p, &bits("01"), 1).is_err());
    }

    #[test]
    fn mutate_extremes_and_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let orig = bits("0110100111");
        let mut s = orig.clone();
        mutate(&mut s, 0.0, &mut rng);
        assert_eq!(s, orig);
        mutate(&mut s, 1.0, &mut rng);
        assert!(s.iter().zip(&orig).all(|(a, b)| *a == b.flipped()));

        let base = vec![Action::BoostAC; 100];
        let mut flips = 0usize;
        for _ in 0..10_000 {
            let mut s = base.clone();
            mutate(&mut s, 0.1, &mut rng);
            flips += s.iter().filter(|&&a| a == Action::BoostBD).count();
        }
        let mean = flips as f64 / 10_000.0;
        assert!((9.4..=10.6).contains(&mean), "{mean}");
    }

    /// Replays a fixed list of draws for `gen_range`.
    struct Scripted(Vec<u32>);

    impl rand::RngCore for Scripted {
        fn next_u32(&mut self) -> u32 {
            self.0.remove(0)
        }
        fn next_u64(&mut self) -> u64 {
            (self.next_u32() as u64) << 32
        }
        fn fill_bytes(&mut self, _: &mut [u8]) {
            unimplemented!()
        }
        fn try_fill_bytes(&mut self, _: &mut [u8]) -> std::result::Result<(), rand::Error> {
            unimplemented!()
        }
    }

    #[test]
    fn tournament_rules() {
        // gen_range(0..2) over usize maps the top bit of a 64-bit draw
        let first = 0u32;
        let second = 1u32 << 31;
        let mut rng = Scripted(vec![first, second]);
        assert_eq!(tournament_select(&[3.2, 1.1], 2, &mut rng).unwrap(), 0);
        let mut rng = Scripted(vec![second, first]);
        assert_eq!(tournament_select(&[3.2, 1.1], 2, &mut rng).unwrap(), 0);
        let mut rng = Scripted(vec![second, first]);
        assert_eq!(tournament_select(&[2.0, 2.0], 2, &mut rng).unwrap(), 1);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert_eq!(tournament_select(&[7.0], 2, &mut rng).unwrap(), 0);
        }
        assert!(tournament_select(&[], 2, &mut rng).is_err());
    }

    #[test]
    fn zero_generations_returns_best_initial() {
        let config = EnvConfig::default();
        let params = GaParams {
            generations: 0,
            population: 10,
            ..GaParams::default()
        };
        let r = ga_optimize(&config, 4, 8, &params).unwrap();
        assert!(r.per_generation.is_empty());
        assert_eq!(r.best_reward, r.initial.max);
        assert_eq!(r.evaluations, 10);
        assert_eq!(
            rollout_reward(&config, 4, r.best_sequence.as_slice()).unwrap(),
            r.best_reward
        );
    }

    #[test]
    fn ga_never_beats_brute_force() {
        let config = EnvConfig::default();
        let params = GaParams {
            population: 20,
            generations: 5,
            ..GaParams::default()
        };
        for seed in 0..4 {
            let ga = ga_optimize(&config, seed, 8, &params).unwrap();
            let bf = brute_force(&config, seed, 8).unwrap();
            assert!(ga.best_reward <= bf.best_reward);
        }
    }

    #[test]
    fn archive_monotone_and_replayable() {
        let config = EnvConfig::default();
        let params = GaParams {
            population: 21,
            generations: 6,
            ga_seed: 3,
            ..GaParams::default()
        };
        let r = ga_optimize(&config, 2, 30, &params).unwrap();
        assert_eq!(r.per_generation.len(), 6);
        assert_eq!(r.evaluations, 21 * 7);
        let curve: Vec<f64> = r.curve().map(|g| g.best_so_far).collect();
        assert!(curve.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(*curve.last().unwrap(), r.best_reward);
        for g in r.curve() {
            assert!(g.min <= g.mean && g.mean <= g.max && g.max <= g.best_so_far);
        }
        assert_eq!(
            rollout_reward(&config, 2, r.best_sequence.as_slice()).unwrap(),
            r.best_reward
        );
    }

    #[test]
    fn no_variation_only_duplicates() {
        let params = GaParams {
            population: 12,
            generations: 1,
            crossover_rate: 0.0,
            mutation_rate: 0.0,
            ga_seed: 8,
            ..GaParams::default()
        };
        // fitness = index of the sequence among the initial population
        let initial = std::sync::Mutex::new(Vec::<Vec<Action>>::new());
        let r = evolve(10, &params, |s| {
            let mut seen = initial.lock().unwrap();
            if seen.len() < 12 {
                seen.push(s.to_vec());
            }
            Ok(s.iter().filter(|a| **a == Action::BoostBD).count() as f64)
        })
        .unwrap();
        // every child of generation 1 is a copy of some parent: its score
        // must be one of the initial scores
        let seen = initial.lock().unwrap();
        let scores: Vec<f64> = seen
            .iter()
            .map(|s| s.iter().filter(|a| **a == Action::BoostBD).count() as f64)
            .collect();
        assert!(scores.contains(&r.per_generation[0].max));
        assert!(scores.contains(&r.per_generation[0].min));
    }

    #[test]
    fn memoized_fitness_changes_nothing() {
        use std::collections::HashMap;
        use std::sync::Mutex;

        let config = EnvConfig::default();
        let params = GaParams {
            population: 16,
            generations: 4,
            ga_seed: 11,
            ..GaParams::default()
        };
        let plain = ga_optimize(&config, 6, 12, &params).unwrap();
        let cache: Mutex<HashMap<Vec<Action>, f64>> = Mutex::new(HashMap::new());
        let memo = evolve(12, &params, |s| {
            if let Some(&r) = cache.lock().unwrap().get(s) {
                return Ok(r);
            }
            let r = rollout_reward(&config, 6, s)?;
            cache.lock().unwrap().insert(s.to_vec(), r);
            Ok(r)
        })
        .unwrap();
        assert_eq!(plain, memo);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let config = EnvConfig::default();
        let params = GaParams {
            population: 30,
            generations: 4,
            ga_seed: 2,
            ..GaParams::default()
        };
        let run = |workers| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap()
                .install(|| {
                    (
                        ga_optimize(&config, 5, 40, &params).unwrap(),
                        brute_force(&config, 5, 9).unwrap(),
                    )
                })
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn invalid_params_rejected() {
        let config = EnvConfig::default();
        for p in [
            GaParams {
                population: 1,
                ..GaParams::default()
            },
            GaParams {
                crossover_rate: 1.5,
                ..GaParams::default()
            },
            GaParams {
                mutation_rate: -0.1,
                ..GaParams::default()
            },
        ] {
            assert!(ga_optimize(&config, 0, 5, &p).is_err());
        }
        assert!(ga_optimize(&config, 0, 0, &GaParams::default()).is_err());
    }
}
