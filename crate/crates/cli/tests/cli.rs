use std::fs;
use std::process::{Command, Output};

fn swtomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swtomo")).args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

#[test]
fn eyd_example_passes() {
    let out = swtomo(&["eyd", "--d", "2", "--alpha", "0.6,0.4", "--n", "16", "--reps", "100000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = lines(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["experiment"], "eyd");
    assert_eq!(rows[0]["pass"], true);
    assert_eq!(rows[0]["bound"], 0.125);
    assert!(rows[0]["tag"].as_str().unwrap().contains("d/n"));
}

#[test]
fn coupling_dominates_every_draw() {
    let out = swtomo(&[
        "coupling-verify", "--d", "3", "--alpha", "0.5,0.3,0.2", "--beta", "0.7,0.2,0.1", "--n", "6", "--reps", "20000",
        "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = lines(&out);
    assert_eq!(rows[0]["experiment"], "sw_coupling_dominance");
    assert_eq!(rows[0]["empirical_mean"], 1.0);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn same_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small tomography run\nalpha = 0.7,0.3\nn = 8\nouter = 200\ninner = 1000\nseed = 11\n").unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let json = dir.path().join(format!("r{i}.jsonl"));
        let csv = dir.path().join(format!("r{i}.csv"));
        let out = swtomo(&[
            "tomography",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            json.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push((fs::read(&json).unwrap(), fs::read(&csv).unwrap()));
    }
    assert!(!outputs[0].0.is_empty());
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert!(csv.starts_with("experiment,tag,check,empirical_mean"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn output_file_is_appended() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.jsonl");
    for _ in 0..2 {
        let out = swtomo(&["dyck-bijection", "--n", "4", "--seed", "1", "--out", json.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read_to_string(&json).unwrap().lines().count(), 8);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "alpha=0.6,0.4\nn=8\nreps=2000\nseed=3\n").unwrap();
    let out = swtomo(&["eyd", "--config", cfg.to_str().unwrap(), "--n", "32"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["params"]["n"], 32);
    assert_eq!(lines(&out)[0]["n_reps"], 2000);
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "alpha=0.6,0.4\nn=8\nseed=3\ncolour=blue\n").unwrap();
    let out = swtomo(&["eyd", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    // Missing seed, invalid α, dimension mismatch, unknown flag, too few reps,
    // beta not majorizing alpha, bad config path.
    let cases: [&[&str]; 7] = [
        &["eyd", "--alpha", "0.6,0.4", "--n", "16"],
        &["eyd", "--alpha", "0.6,0.5", "--n", "16", "--seed", "1"],
        &["eyd", "--d", "3", "--alpha", "0.6,0.4", "--n", "16", "--seed", "1"],
        &["eyd", "--alpha", "0.6,0.4", "--n", "16", "--seed", "1", "--bogus", "2"],
        &["eyd", "--alpha", "0.6,0.4", "--n", "16", "--seed", "1", "--reps", "10"],
        &["coupling-verify", "--alpha", "0.8,0.2", "--beta", "0.6,0.4", "--n", "4", "--seed", "1"],
        &["eyd", "--config", "/nonexistent/run.cfg"],
    ];
    for args in cases {
        let out = swtomo(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn tightened_bounds_exit_two() {
    let out = swtomo(&["verify-all", "--seed", "7", "--criteria", "4", "--bound-factor", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let rows = lines(&out);
    assert!(rows.iter().any(|r| r["pass"] == false));
    assert!(rows.iter().all(|r| r["params"]["criterion"] == 4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[FAIL] criterion  4"));
}

#[test]
fn verify_all_subset_passes() {
    let out = swtomo(&["verify-all", "--seed", "7", "--criteria", "1,3,14"]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[PASS] criterion  1"));
    assert!(err.contains("[N/A ] criterion 14"));
    assert!(err.contains("2 passed, 0 failed, 1 not applicable"));
}
