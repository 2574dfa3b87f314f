//! End-to-end tests of the binary: file layout, CSV schemas, reports,
//! determinism, and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

static DIR_COUNTER: AtomicU32 = AtomicU32::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "stirap-ssi-test-{}-{tag}-{}",
        std::process::id(),
        DIR_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stirap-ssi"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

/// Parse one CSV column (by header name) as floats; empty cells are skipped.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header
        .iter()
        .position(|&h| h == name)
        .unwrap_or_else(|| panic!("missing column {name}"));
    lines
        .filter_map(|line| {
            let cell = line.split(',').nth(idx).unwrap();
            (!cell.is_empty()).then(|| cell.parse().unwrap())
        })
        .collect()
}

#[test]
fn fig2_preset_writes_both_runs() {
    let out = scratch_dir("fig2");
    let output = run_cli(&[
        "--preset",
        "fig2",
        "--steps",
        "2000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");

    for name in [
        "trajectory_0.csv",
        "trajectory_60.csv",
        "darkstate_0.csv",
        "darkstate_60.csv",
        "summary.txt",
    ] {
        assert!(out.join(name).exists(), "missing {name}");
    }

    let traj = read(&out.join("trajectory_0.csv"));
    assert!(traj.starts_with("s,E,S_A,S_AB,S_An,S_ABn,Ic_AB,dark_overlap,pop_1,pop_6\n"));

    // the inequality holds along both curves, and the resonant run ends
    // disentangled with the population moved to the target state
    for name in ["trajectory_0.csv", "trajectory_60.csv"] {
        let text = read(&out.join(name));
        let min_e = column(&text, "E").into_iter().fold(f64::INFINITY, f64::min);
        assert!(min_e >= -1e-9, "{name}: min E = {min_e}");
    }
    let final_e = *column(&traj, "E").last().unwrap();
    assert!(final_e <= 1e-3, "final E = {final_e}");
    let final_pop = *column(&traj, "pop_6").last().unwrap();
    assert!(final_pop >= 0.99);

    let summary = read(&out.join("summary.txt"));
    assert!(summary.contains("delta_tau = 0"));
    assert!(summary.contains("delta_tau = 60"));
    assert!(summary.contains("min_E"));
}

#[test]
fn fig3_preset_tracks_the_dark_state_coefficients() {
    let out = scratch_dir("fig3");
    let output = run_cli(&[
        "--preset",
        "fig3",
        "--steps",
        "1500",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    assert!(!out.join("trajectory_60.csv").exists());

    let text = read(&out.join("darkstate_0.csv"));
    assert!(text.starts_with("s,alpha_over_P,beta_over_P,gamma_over_P,delta_over_P\n"));
    let first: Vec<f64> = [
        column(&text, "alpha_over_P")[0],
        column(&text, "beta_over_P")[0],
        column(&text, "gamma_over_P")[0],
        column(&text, "delta_over_P")[0],
    ]
    .to_vec();
    let last: Vec<f64> = [
        *column(&text, "alpha_over_P").last().unwrap(),
        *column(&text, "beta_over_P").last().unwrap(),
        *column(&text, "gamma_over_P").last().unwrap(),
        *column(&text, "delta_over_P").last().unwrap(),
    ]
    .to_vec();
    for (got, want) in first.iter().zip([1.0, 0.0, 0.0, 0.0]) {
        assert!((got - want).abs() < 1e-3, "first row {first:?}");
    }
    for (got, want) in last.iter().zip([0.0, 1.0, 0.0, 0.0]) {
        assert!((got - want).abs() < 1e-3, "last row {last:?}");
    }
}

#[test]
fn ghz_preset_reports_the_counterexample() {
    let out = scratch_dir("ghz");
    let output = run_cli(&["--preset", "ghz", "--out", out.to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");

    let report = read(&out.join("ghz_report.txt"));
    for line in [
        "S_ABC=1.0000",
        "S_A=1.0000",
        "S_AB=1.0000",
        "S_BC=1.0000",
        "E=0.0000",
    ] {
        assert!(report.contains(line), "report missing `{line}`:\n{report}");
    }
    let residual_line = report
        .lines()
        .find(|l| l.starts_with("log_identity_residual="))
        .unwrap();
    let residual: f64 = residual_line.split('=').nth(1).unwrap().parse().unwrap();
    assert!(residual <= 1e-9);
}

#[test]
fn identical_configs_produce_identical_bytes() {
    let config_text = "preset = fig2\nsteps = 1200\ndelta_tau_list = 0, 60\n";
    let mut contents: Vec<Vec<(String, String)>> = Vec::new();
    for _ in 0..2 {
        let out = scratch_dir("det");
        let config_path = out.join("run.conf");
        fs::write(&config_path, config_text).unwrap();
        let output = run_cli(&[
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "{output:?}");
        let mut files: Vec<(String, String)> = [
            "trajectory_0.csv",
            "trajectory_60.csv",
            "darkstate_0.csv",
            "summary.txt",
        ]
        .iter()
        .map(|name| (name.to_string(), read(&out.join(name))))
        .collect();
        files.sort();
        contents.push(files);
    }
    assert_eq!(contents[0], contents[1], "outputs differ between runs");
}

#[test]
fn config_file_overrides_and_flag_precedence() {
    let out = scratch_dir("override");
    let config_path = out.join("run.conf");
    fs::write(&config_path, "preset = fig2\nsteps = 1000\n").unwrap();
    // the flag sweep wins over the preset's 0,60 default
    let output = run_cli(&[
        "--config",
        config_path.to_str().unwrap(),
        "--delta-tau",
        "30",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    assert!(out.join("trajectory_30.csv").exists());
    assert!(!out.join("trajectory_0.csv").exists());
}

#[test]
fn bad_configs_exit_nonzero_with_line_numbers() {
    let out = scratch_dir("bad");
    let config_path = out.join("bad.conf");

    fs::write(&config_path, "preset = fig2\nphoton_count = 3\n").unwrap();
    let output = run_cli(&["--config", config_path.to_str().unwrap()]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
    assert!(stderr.contains("photon_count"), "stderr: {stderr}");

    fs::write(&config_path, "n = 1\n").unwrap();
    let output = run_cli(&["--config", config_path.to_str().unwrap()]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("n >= 2"), "stderr: {stderr}");
}

#[test]
fn unstable_integration_exits_nonzero() {
    let out = scratch_dir("unstable");
    let config_path = out.join("run.conf");
    // 100 steps across a 500-tau window at detuning 60 is far past the
    // stability limit; the run must abort, not write garbage
    fs::write(
        &config_path,
        "delta_tau_list = 60\ns_end = 497\nsteps = 100\n",
    )
    .unwrap();
    let output = run_cli(&[
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("norm drift"), "stderr: {stderr}");
    assert!(!out.join("summary.txt").exists());
}

#[test]
fn unwritable_output_directory_fails() {
    let out = scratch_dir("unwritable");
    let blocker = out.join("blocked");
    fs::write(&blocker, "not a directory").unwrap();
    let output = run_cli(&[
        "--preset",
        "ghz",
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert!(!output.status.success());
}
