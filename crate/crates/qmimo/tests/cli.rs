//! End-to-end tests of the `qmimo` binary: flag parsing, exit codes,
//! CSV output, presets, and environment-variable worker control.

use std::path::Path;
use std::process::{Command, Output};

use qmimo::harness::parse_csv_points;

fn qmimo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmimo"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn documented_sweep_invocation_works() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let result = qmimo(&[
        "--mod", "qpsk", "--bits", "2", "--quantizer", "lloyd", "--antennas", "100",
        "--users", "10", "--snr", "-10:5:15", "--seed", "42",
        "--max-bits", "600000",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let points = parse_csv_points(&read(&out)).unwrap();
    assert_eq!(points.len(), 6);
    assert!(points.iter().all(|p| p.bits_sent > 0));
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("Eb/N0"), "stdout should carry the summary table:\n{stdout}");
    assert!(dir.path().join("plot_run.py").exists());
}

#[test]
fn same_seed_produces_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let result = qmimo(&[
            "--mod", "16qam", "--bits", "3", "--quantizer", "uniform", "--antennas", "32",
            "--users", "4", "--snr", "-6,-2", "--seed", "7", "--min-errors", "150",
            "--max-bits", "400000", "--out", out.to_str().unwrap(),
        ]);
        assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
        read(&out)
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn worker_env_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: Option<&str>| {
        let out = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qmimo"));
        cmd.args([
            "--mod", "qpsk", "--bits", "1", "--quantizer", "lloyd", "--antennas", "16",
            "--users", "2", "--snr", "0", "--seed", "3", "--min-errors", "100",
            "--max-bits", "300000", "--out", out.to_str().unwrap(),
        ]);
        if let Some(w) = workers {
            cmd.env("QMIMO_WORKERS", w);
        }
        let result = cmd.output().unwrap();
        assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
        read(&out)
    };
    let reference = run("w_default.csv", None);
    assert_eq!(reference, run("w1.csv", Some("1")));
    assert_eq!(reference, run("w3.csv", Some("3")));
}

#[test]
fn finite_bits_without_quantizer_is_a_usage_error() {
    let result = qmimo(&[
        "--mod", "qpsk", "--bits", "1", "--quantizer", "none", "--antennas", "100",
        "--users", "10", "--snr", "0", "--out", "/tmp/unused.csv",
    ]);
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("quantizer"), "stderr: {stderr}");
}

#[test]
fn malformed_snr_grid_is_a_usage_error() {
    let result = qmimo(&[
        "--mod", "qpsk", "--bits", "2", "--quantizer", "lloyd", "--antennas", "16",
        "--users", "2", "--snr", "10:1:0", "--out", "/tmp/unused.csv",
    ]);
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn unwritable_output_path_is_an_io_error() {
    let result = qmimo(&[
        "--mod", "qpsk", "--bits", "2", "--quantizer", "lloyd", "--antennas", "8",
        "--users", "2", "--snr", "0", "--min-errors", "1", "--max-bits", "10000",
        "--out", "/nonexistent-dir/run.csv",
    ]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let result = qmimo(&["--help"]);
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("--quantizer"));
    assert!(stdout.contains("--preset"));
}

#[test]
fn degradation_preset_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let result = qmimo(&["--preset", "degradation", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let csv = read(&dir.path().join("degradation.csv"));
    assert_eq!(csv.lines().count(), 25, "header plus 24 rows:\n{csv}");
    assert!(dir.path().join("plot_degradation.py").exists());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("unreachable"), "coarse cells sit above the target:\n{stdout}");
}

#[test]
fn table2_preset_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let result = qmimo(&["--preset", "table2", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let csv = read(&dir.path().join("table2.csv"));
    assert_eq!(csv.lines().count(), 13, "header plus 12 rows:\n{csv}");
    assert!(dir.path().join("plot_table2.py").exists());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("0 observed"), "deep floors are reported as unobserved:\n{stdout}");
}
