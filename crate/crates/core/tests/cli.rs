use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sortsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sortsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn brute_prints_best_string_and_reward() {
    let out = sortsim(&["brute", "--seed", "7", "--len", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let best = v["best"].as_str().unwrap();
    assert_eq!(best.len(), 12);
    assert!(best.chars().all(|c| c == '0' || c == '1'));
    assert!(v["best_reward"].is_f64());
    assert_eq!(v["evaluations"], 4096);
}

#[test]
fn unknown_config_key_is_named_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("plant.toml");
    fs::write(&cfg, "press_duraton = 4\n").unwrap();
    let out = sortsim(&["simulate", "--config", p(&cfg), "--len", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("press_duraton"));
}

#[test]
fn bad_flags_exit_one_and_missing_files_exit_three() {
    assert_eq!(
        sortsim(&["bench", "--strategies", "R,XYZ", "--seeds", "0..2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        sortsim(&["bench", "--seeds", "5..2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        sortsim(&["ga", "--workers", "0", "--len", "4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        sortsim(&["simulate", "--config", "/no/such/file.toml"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(sortsim(&["--version"]).status.code(), Some(0));
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("demos");
    let cfg = dir.path().join("short.toml");
    fs::write(&cfg, "episode_len = 20\n").unwrap();
    let gen = sortsim(&[
        "demo-gen",
        "--config",
        p(&cfg),
        "--seeds",
        "1000..1006",
        "--pop",
        "20",
        "--gens",
        "4",
        "--out",
        p(&data),
    ]);
    assert_eq!(
        gen.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&gen.stderr)
    );
    assert_eq!(sortsim(&["validate", p(&data)]).status.code(), Some(0));

    let manifest = data.join("manifest.json");
    let mut bytes = fs::read(&manifest).unwrap();
    let i = bytes.len() / 2;
    bytes[i] ^= 0x01;
    fs::write(&manifest, bytes).unwrap();
    assert_eq!(sortsim(&["validate", p(&data)]).status.code(), Some(2));
}

#[test]
fn demo_gen_refuses_bench_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = sortsim(&["demo-gen", "--seeds", "90..110", "--out", p(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_writes_trajectory_and_run_echo() {
    let dir = tempfile::tempdir().unwrap();
    let out = sortsim(&[
        "simulate",
        "--seed",
        "5",
        "--len",
        "8",
        "--policy",
        "random:3",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let traj = fs::read_to_string(dir.path().join("trajectory.jsonl")).unwrap();
    assert_eq!(traj.lines().count(), 8);
    let run: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(run["seed"], 5);
    assert_eq!(run["config"]["belt_delay"], 2);

    let replay = sortsim(&[
        "simulate",
        "--seed",
        "5",
        "--actions",
        run["actions"].as_str().unwrap(),
    ]);
    let replayed: serde_json::Value = serde_json::from_slice(&replay.stdout).unwrap();
    assert_eq!(replayed["cumulative_reward"], run["cumulative_reward"]);
}

#[test]
fn bench_merges_external_scores() {
    let dir = tempfile::tempdir().unwrap();
    let ext = dir.path().join("rl.csv");
    fs::write(&ext, "strategy_name,seed,reward\nPPO,0,1.0\nPPO,1,3.0\n").unwrap();
    let out_dir = dir.path().join("bench");
    let out = sortsim(&[
        "bench",
        "--seeds",
        "0..2",
        "--len",
        "10",
        "--strategies",
        "R,RB,BF",
        "--external",
        p(&ext),
        "--out",
        p(&out_dir),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    let names: Vec<&str> = summary
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(names, ["R", "RB", "BF", "PPO"]);
    assert!(summary.contains("PPO,2,2.0,1.0,2.0,1.0,3.0"));
}

#[test]
fn defaults_lists_every_key() {
    let out = sortsim(&["defaults"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for key in [
        "purity_thresholds",
        "penalty_factor",
        "belt_delay",
        "press_duration",
        "ga.population",
        "min_improvement",
    ] {
        assert!(text.contains(key), "{key}");
    }
}
