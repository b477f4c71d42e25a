//! Compare random, rule-based, exhaustive and GA strategies across seeds
//! and write the CSV tables used for plotting.
//!
//!     cargo run --release --example benchmark_strategies -- [out_dir]

use std::path::PathBuf;

use sortsim::bench::{emit_outputs, run_bench, BenchSpec, Strategy};
use sortsim::EnvConfig;

fn main() -> sortsim::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("sortsim-bench"));
    let config = EnvConfig::default();
    let spec = BenchSpec {
        strategies: Strategy::ALL.to_vec(),
        seeds: (0..30).collect(),
        horizon: 15,
        ..BenchSpec::default()
    };

    let run = run_bench(&config, &spec)?;
    println!("horizon {}, {} seeds", spec.horizon, spec.seeds.len());
    println!("strategy     mean     std   median      min      max");
    for s in &run.result.summary {
        println!(
            "{:<8} {:>8.3} {:>7.3} {:>8.3} {:>8.3} {:>8.3}",
            s.strategy, s.mean, s.std, s.median, s.min, s.max
        );
    }
    for path in emit_outputs(&run, &config, &spec, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
