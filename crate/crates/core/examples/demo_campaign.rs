//! Generate a small demonstration dataset, validate it, then show that a
//! single flipped byte is caught.
//!
//!     cargo run --release --example demo_campaign -- [out_dir]

use std::fs;
use std::path::PathBuf;

use sortsim::demo::{run_campaign, validate_dataset, CampaignSpec, SeedRange};
use sortsim::EnvConfig;

fn main() -> sortsim::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("sortsim-demos"));
    let config = EnvConfig::default();
    let spec = CampaignSpec {
        seeds: SeedRange::new(1000, 1020)?,
        ..CampaignSpec::default()
    };

    let manifest = run_campaign(&config, &spec, &out)?;
    println!(
        "{}: {} accepted, {} rejected",
        out.display(),
        manifest.accepted,
        manifest.rejected
    );
    for e in manifest.trajectories.iter().take(5) {
        println!(
            "  {:<16} GA {:+8.3}  rule-based {:+8.3}",
            e.file, e.ga_reward, e.baseline_reward
        );
    }

    let report = validate_dataset(&out)?;
    println!(
        "validation: {} trajectories replayed, passed = {}",
        report.trajectories_checked,
        report.passed()
    );

    let victim = out.join(&manifest.trajectories[0].file);
    let original = fs::read(&victim).expect("trajectory exists");
    let mut bytes = original.clone();
    bytes[40] ^= 0x04;
    fs::write(&victim, &bytes).expect("writable");
    let report = validate_dataset(&out)?;
    println!("after flipping one byte: passed = {}", report.passed());
    for v in &report.violations {
        println!("  {v}");
    }
    fs::write(&victim, original).expect("writable");
    Ok(())
}
