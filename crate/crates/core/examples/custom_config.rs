//! Build a plant from a TOML override and compare it with the default one.
//! Keys left out keep their defaults; unknown keys are rejected by name.
//!
//!     cargo run --example custom_config

use sortsim::baselines::{run_policy, PolicyKind};
use sortsim::EnvConfig;

const BUSY_PLANT: &str = r#"
# heavier, dirtier input and slower presses
batch_min = 60.0
batch_max = 140.0
contamination_coeff = 0.4
press_duration = 5
"#;

fn main() -> sortsim::Result<()> {
    let busy = EnvConfig::from_toml_str(BUSY_PLANT)?;
    let default = EnvConfig::default();

    for (name, config) in [("default", &default), ("busy", &busy)] {
        let rewards: Vec<f64> = (0..20)
            .map(|seed| Ok(run_policy(config, seed, 100, PolicyKind::RuleBased)?.cumulative_reward))
            .collect::<sortsim::Result<_>>()?;
        let mean = rewards.iter().sum::<f64>() / rewards.len() as f64;
        println!("{name:<8} rule-based mean reward over 20 seeds: {mean:+.3}");
    }

    match EnvConfig::from_toml_str("press_duraton = 5\n") {
        Ok(_) => println!("typo accepted?"),
        Err(e) => println!("typo rejected: {e}"),
    }
    print!("\nresolved busy config:\n{}", busy.to_toml_string());
    Ok(())
}
