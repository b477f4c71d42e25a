//! Exhaustive search over every action string for a frozen seed, compared
//! with the rule-based baseline on the same seed.
//!
//!     cargo run --release --example brute_force_search -- [seed] [len]

use std::time::Instant;

use sortsim::baselines::{run_policy, PolicyKind};
use sortsim::planners::{brute_force, rollout};
use sortsim::EnvConfig;

fn main() -> sortsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let len = args.next().and_then(|s| s.parse().ok()).unwrap_or(15);
    let config = EnvConfig::default();

    let start = Instant::now();
    let best = brute_force(&config, seed, len)?;
    let elapsed = start.elapsed();
    let baseline = run_policy(&config, seed, len, PolicyKind::RuleBased)?;

    println!(
        "seed {seed}, {} sequences of length {len} in {elapsed:.2?}",
        best.evaluations
    );
    println!("best       {}  reward {:+.4}", best.best, best.best_reward);
    println!(
        "rule-based {}  reward {:+.4}",
        baseline.actions, baseline.cumulative_reward
    );

    // the winning string replays to exactly the same reward
    let replay = rollout(&config, seed, best.best.as_slice())?;
    assert_eq!(replay.cumulative_reward, best.best_reward);
    Ok(())
}
