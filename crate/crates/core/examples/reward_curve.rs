//! The asymmetric purity reward: gains above the threshold count once,
//! shortfalls count five times.
//!
//!     cargo run --example reward_curve

use sortsim::bench::{reward_curve, reward_trace};
use sortsim::EnvConfig;

fn main() -> sortsim::Result<()> {
    let config = EnvConfig::default();
    println!("deviation  reward");
    for s in reward_curve(&config).iter().step_by(4) {
        let bar = "#".repeat((s.reward.abs() * 40.0).round() as usize);
        let side = if s.reward < 0.0 { "-" } else { "+" };
        println!("{:>+9.2}  {:>+6.2} {side}{bar}", s.deviation, s.reward);
    }

    println!("\nrule-based policy, seed 0, first 10 steps");
    println!("step   dev A   dev B   dev C   dev D  reward  cumulative");
    for r in reward_trace(&config, 0, 10)? {
        println!(
            "{:>4} {:>+7.3} {:>+7.3} {:>+7.3} {:>+7.3} {:>+7.3} {:>+11.3}",
            r.step, r.dev_a, r.dev_b, r.dev_c, r.dev_d, r.reward, r.cumulative
        );
    }
    Ok(())
}
