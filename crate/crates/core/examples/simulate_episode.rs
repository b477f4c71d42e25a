//! Run one episode under the rule-based policy and watch the plant.
//!
//!     cargo run --example simulate_episode -- [seed]

use sortsim::baselines::PolicyKind;
use sortsim::env::obs_index;
use sortsim::{EnvConfig, EnvState};

fn main() -> sortsim::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let config = EnvConfig::default();
    let (mut state, _) = EnvState::reset(&config, seed);
    let policy = PolicyKind::RuleBased;

    println!("step action  reward    purity A    B     C     D   presses");
    let mut total = 0.0;
    while !state.is_truncated() {
        let action = policy.act(&state);
        let step = state.step(action)?;
        total += step.reward;
        let o = step.observation;
        if state.t() % 10 == 0 || !step.info.press_events.is_empty() {
            let purity: Vec<String> = (0..4)
                .map(|m| format!("{:.3}", o[obs_index::PURITY + m]))
                .collect();
            let pressed: Vec<String> = step
                .info
                .press_events
                .iter()
                .map(|e| format!("{}->{}", "ABCDE".as_bytes()[e.container] as char, e.press))
                .collect();
            println!(
                "{:>4} {:>6} {:>7.3}   {}   {}",
                state.t(),
                action,
                step.reward,
                purity.join(" "),
                pressed.join(" ")
            );
        }
    }

    println!("\ncumulative reward {total:.3} over {} steps", state.t());
    println!("{} bales pressed:", state.bales().len());
    for bale in state.bales() {
        println!(
            "  t={:>3} {} {:>6.1} units, purity {:.3}",
            bale.pressed_at,
            "ABCDE".as_bytes()[bale.material] as char,
            bale.size,
            bale.purity
        );
    }
    println!("mass balance error {:.1e}", state.conservation_error());
    Ok(())
}
