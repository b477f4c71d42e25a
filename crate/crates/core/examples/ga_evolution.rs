//! Genetic-algorithm search on one seed, printing the per-generation
//! statistics that make up the learning curve.
//!
//!     cargo run --release --example ga_evolution -- [seed] [len]

use sortsim::baselines::{run_policy, PolicyKind};
use sortsim::planners::{ga_optimize, GaParams};
use sortsim::EnvConfig;

fn main() -> sortsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let len = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);
    let config = EnvConfig::default();
    let params = GaParams {
        ga_seed: 17,
        ..GaParams::default()
    };

    let result = ga_optimize(&config, seed, len, &params)?;
    println!("gen      max     mean      min  best so far");
    for (g, s) in result.curve().enumerate() {
        println!(
            "{g:>3} {:>8.3} {:>8.3} {:>8.3} {:>12.3}",
            s.max, s.mean, s.min, s.best_so_far
        );
    }
    let baseline = run_policy(&config, seed, len, PolicyKind::RuleBased)?.cumulative_reward;
    println!("\n{} fitness evaluations", result.evaluations);
    println!("best sequence {}", result.best_sequence);
    println!("GA {:+.3} vs rule-based {baseline:+.3}", result.best_reward);
    Ok(())
}
