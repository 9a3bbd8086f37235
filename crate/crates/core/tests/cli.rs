use std::process::{Command, Output};

fn twomode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twomode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn evolve_default_csv() {
    let out = twomode(&["evolve"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,E_N,discord,nu_minus"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200);
    assert!(rows[0].starts_with("0.00000000000e+00,4.18581766283e+00,"));
    assert!(rows[199].starts_with("2.00000000000e+01,"));
    for row in rows {
        assert_eq!(row.split(',').count(), 4);
    }
}

#[test]
fn sweep_default_shape() {
    let out = twomode(&["sweep", "--points", "7", "--temp-points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t,T,E_N,discord");
    assert_eq!(rows.len(), 1 + 7 * 3);
    // temperature-major ordering
    assert!(rows[1].starts_with("0.00000000000e+00,0.00000000000e+00,"));
    assert!(rows[8].starts_with("0.00000000000e+00,2.00000000000e+00,"));
}

#[test]
fn esd_reports_death_time_or_none() {
    let hot = twomode(&["esd", "--temperature", "1"]);
    assert_eq!(hot.status.code(), Some(0));
    let line = stdout(&hot);
    let t: f64 = line.trim().strip_prefix("t_esd=").unwrap().parse().unwrap();
    assert!((t - 2.971973280930704).abs() < 2e-6, "{t}");

    let cold = twomode(&["esd", "--temperature", "0"]);
    assert_eq!(stdout(&cold), "t_esd=none\n");
}

#[test]
fn json_output_carries_metadata() {
    let out = twomode(&[
        "sweep",
        "--format",
        "json",
        "--points",
        "3",
        "--temp-points",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 6);
    assert_eq!(doc["metadata"]["lambda"], 0.1);
    let row = &doc["rows"][0];
    for key in ["t", "T", "E_N", "discord"] {
        assert!(row.get(key).is_some(), "missing {key}");
    }

    let evolve = twomode(&["evolve", "--format", "json", "--points", "4"]);
    let doc: serde_json::Value = serde_json::from_slice(&evolve.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "squeezing = 0.3\npoints = 5\ntemperature = 1.0\n").unwrap();
    let out = twomode(&["evolve", "--config", cfg.to_str().unwrap(), "--points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 3);
    // r = 0.3 with n = 1 is separable from the start
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[1], "0.00000000000e+00");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let to_file = twomode(&[
        "evolve",
        "--points",
        "10",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let direct = twomode(&["evolve", "--points", "10"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["evolve", "--lambda", "-0.1"][..],
        &["evolve", "--n1", "-1"],
        &["sweep", "--points", "0"],
        &["esd", "--t-max", "0"],
        &["evolve", "--bogus"],
        &["frobnicate"],
        &["evolve", "--measured-mode", "3"],
    ] {
        let out = twomode(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bad_config_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "sqeezing = 1.0\n").unwrap();
    let out = twomode(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sqeezing"));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = twomode(&[
        "evolve",
        "--points",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = twomode(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sweep"));
}

#[test]
fn mode_choice_changes_discord_for_asymmetric_state() {
    let m1 = twomode(&[
        "evolve",
        "--points",
        "1",
        "--n1",
        "3",
        "--n2",
        "0",
        "--measured-mode",
        "1",
    ]);
    let m2 = twomode(&[
        "evolve",
        "--points",
        "1",
        "--n1",
        "3",
        "--n2",
        "0",
        "--measured-mode",
        "mode2",
    ]);
    assert_eq!(m1.status.code(), Some(0));
    assert_ne!(m1.stdout, m2.stdout);
}
