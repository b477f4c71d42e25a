//! Reference policies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::EnvConfig;
use crate::env::{Action, EnvState, MaterialBatch, Transition};
use crate::error::{Error, Result};
use crate::planners::ActionSequence;
use crate::rng::{noise_draw, Stream};

/// Uniform random mode; a pure function of `(policy_seed, t)`.
pub fn random_policy(policy_seed: u64, t: usize) -> Action {
    if noise_draw(policy_seed, Stream::Policy, t as i64, 0) < 0.5 {
        Action::BoostAC
    } else {
        Action::BoostBD
    }
}

/// Boost A and C when they outweigh B and D in the batch about to be
/// sorted; ties go to A and C.
pub fn rule_based_policy(head: &MaterialBatch) -> Action {
    let [a, b, c, d] = head.quantities;
    if a + c >= b + d {
        Action::BoostAC
    } else {
        Action::BoostBD
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Random {
        policy_seed: u64,
    },
    RuleBased,
    /// Same mode every step.
    Constant(Action),
}

impl PolicyKind {
    pub fn act(&self, state: &EnvState) -> Action {
        match *self {
            PolicyKind::Random { policy_seed } => random_policy(policy_seed, state.t()),
            PolicyKind::RuleBased => rule_based_policy(&state.head_batch()),
            PolicyKind::Constant(a) => a,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyRun {
    pub cumulative_reward: f64,
    pub actions: ActionSequence,
    pub transitions: Vec<Transition>,
}

/// Run `policy` closed-loop for `n` steps from a fresh reset.
pub fn run_policy(
    config: &EnvConfig,
    seed: u64,
    n: usize,
    policy: PolicyKind,
) -> Result<PolicyRun> {
    let (mut state, mut obs) = EnvState::reset(config, seed);
    let mut total = 0.0;
    let mut actions = Vec::with_capacity(n);
    let mut transitions = Vec::with_capacity(n);
    for _ in 0..n {
        let action = policy.act(&state);
        let step = state.step(action)?;
        total += step.reward;
        actions.push(action);
        transitions.push(Transition {
            obs,
            action,
            reward: step.reward,
            next_obs: step.observation,
            truncated: step.truncated,
        });
        obs = step.observation;
    }
    Ok(PolicyRun {
        cumulative_reward: total,
        actions: ActionSequence(actions),
        transitions,
    })
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::Random { policy_seed } => write!(f, "random:{policy_seed}"),
            PolicyKind::RuleBased => write!(f, "rule"),
            PolicyKind::Constant(a) => write!(f, "const:{a}"),
        }
    }
}

/// Parses `random`, `random:<seed>`, `rule`, `zeros`, `ones`.
impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(PolicyKind::Random { policy_seed: 0 }),
            "rule" | "rule-based" => Ok(PolicyKind::RuleBased),
            "zeros" => Ok(PolicyKind::Constant(Action::BoostAC)),
            "ones" => Ok(PolicyKind::Constant(Action::BoostBD)),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(|policy_seed| PolicyKind::Random { policy_seed })
                    .map_err(|_| Error::Usage(format!("bad policy seed in `{s}`"))),
                None => Err(Error::Usage(format!(
                    "unknown policy `{s}` (expected random, random:<seed>, rule, zeros, ones)"
                ))),
            },
        }
    }
}
