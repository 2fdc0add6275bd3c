//! End-to-end tests of the `spinmap` binary: exit codes, file outputs,
//! header stability, override precedence, and manifest reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use spinmap_cli::sweeps::{MEASURE_HEADER, SWEEP_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinmap"))
}

/// A config small enough that any subcommand finishes in well under a second.
const TINY: &str = "\
synth_per_class = 40
synth_features = 5
balance_total = 24
features = 2,3
n_features = 3
a_list = 0.5,1.0,3.5
sigma_list = 0,0.3
noise_realizations = 2
shots = 100
measure_samples = 4
seed = 9
";

fn write_config(dir: &Path, extra: &str) -> PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, format!("{TINY}{extra}")).unwrap();
    path
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(args: &[&str]) -> i32 {
    bin().args(args).output().expect("binary runs").status.code().expect("has exit code")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

/// Drop the trailing wall-clock cell from every line of a sweep CSV.
fn strip_wall(csv: &str) -> String {
    csv.lines()
        .map(|line| line.rsplit_once(',').expect("has cells").0)
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn features_run_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    run_ok(&[
        "features",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);

    let csv = read(&out_dir.join("features.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER, "header must be stable");
    assert_eq!(lines.len(), 3, "one row per feature count");
    assert!(lines[1].starts_with("2,"));
    assert!(lines[2].starts_with("3,"));
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 14);
        assert!(cells[12].is_empty(), "auc disabled by default: {line}");
        let wall: f64 = cells[13].parse().unwrap();
        assert!(wall >= 0.0);
    }
    assert!(out_dir.join("manifest_features.cfg").is_file());
}

#[test]
fn config_problems_exit_1_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("never");
    let out_dir_s = out_dir.to_str().unwrap().to_string();

    // Unknown key in the file.
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    assert_eq!(
        exit_code(&["features", "--config", bad.to_str().unwrap(), "--out-dir", &out_dir_s]),
        1
    );

    // Valid file, impossible lattice/feature combination.
    let cfg = write_config(dir.path(), "lattice = square_ladder\n");
    assert_eq!(
        exit_code(&["features", "--config", cfg.to_str().unwrap(), "--out-dir", &out_dir_s]),
        1,
        "features 2,3 are invalid on a square ladder"
    );

    // Config file missing entirely.
    assert_eq!(
        exit_code(&["features", "--config", "/no/such/file.cfg", "--out-dir", &out_dir_s]),
        1
    );

    // CSV input that does not exist.
    let cfg = write_config(
        dir.path(),
        "data = csv\ncsv_path = /missing.csv\nlabel_column = y\npositive_label = 1\n",
    );
    assert_eq!(
        exit_code(&["features", "--config", cfg.to_str().unwrap(), "--out-dir", &out_dir_s]),
        1
    );

    // Malformed --set pair.
    let cfg = write_config(dir.path(), "");
    assert_eq!(
        exit_code(&[
            "features",
            "--config",
            cfg.to_str().unwrap(),
            "--out-dir",
            &out_dir_s,
            "--set",
            "seedless",
        ]),
        1
    );

    assert!(!out_dir.exists(), "config errors must precede any output");
}

#[test]
fn usage_problems_exit_1_help_exits_0() {
    assert_eq!(exit_code(&[]), 1, "missing subcommand");
    assert_eq!(exit_code(&["features"]), 1, "--config is mandatory");
    assert_eq!(exit_code(&["frobnicate"]), 1, "unknown subcommand");
    assert_eq!(exit_code(&["features", "--what"]), 1, "unknown flag");
    assert_eq!(exit_code(&["--help"]), 0);
    assert_eq!(exit_code(&["--version"]), 0);
}

#[test]
fn unwritable_out_dir_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    // out_dir nested under a regular file cannot be created.
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "a file, not a directory").unwrap();
    let out_dir = blocker.join("sub");
    assert_eq!(
        exit_code(&[
            "features",
            "--config",
            cfg.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]),
        2
    );
}

#[test]
fn manifest_reruns_reproduce_csv_except_wall_times() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let first = dir.path().join("first");
    run_ok(&[
        "features",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        first.to_str().unwrap(),
    ]);

    let second = dir.path().join("second");
    run_ok(&[
        "features",
        "--config",
        first.join("manifest_features.cfg").to_str().unwrap(),
        "--out-dir",
        second.to_str().unwrap(),
    ]);

    let a = read(&first.join("features.csv"));
    let b = read(&second.join("features.csv"));
    assert_eq!(strip_wall(&a), strip_wall(&b), "all columns except wall_ms are bit-identical");

    // The manifests differ only in the out_dir line.
    let ma = read(&first.join("manifest_features.cfg"));
    let mb = read(&second.join("manifest_features.cfg"));
    let diff: Vec<(&str, &str)> = ma
        .lines()
        .zip(mb.lines())
        .filter(|(x, y)| x != y)
        .collect();
    assert_eq!(diff.len(), 1);
    assert!(diff[0].0.starts_with("out_dir"));
}

#[test]
fn zero_sigma_noise_row_equals_feature_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    let out_s = out_dir.to_str().unwrap().to_string();
    run_ok(&["features", "--config", cfg.to_str().unwrap(), "--out-dir", &out_s]);
    run_ok(&["noise", "--config", cfg.to_str().unwrap(), "--out-dir", &out_s]);

    let features = read(&out_dir.join("features.csv"));
    let noise = read(&out_dir.join("noise.csv"));
    // Feature row n = 3 and the sigma = 0 noise row run the same pipeline:
    // everything between sweep_value and wall_ms matches bit for bit.
    let feature_row = features.lines().find(|l| l.starts_with("3,")).unwrap();
    let zero_row = noise.lines().find(|l| l.starts_with("0,")).unwrap();
    let middle = |row: &str| {
        let cells: Vec<&str> = row.split(',').collect();
        cells[1..13].join(",")
    };
    assert_eq!(middle(feature_row), middle(zero_row));
}

#[test]
fn scaling_reports_departure_scale() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    let out = run_ok(&[
        "scaling",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);

    let csv = read(&out_dir.join("scaling.csv"));
    assert_eq!(csv.lines().count(), 4, "header plus one row per scale");
    let a0 = read(&out_dir.join("scaling_a0.txt"));
    let a0 = a0.trim();
    if a0 != "none" {
        let value: f64 = a0.parse().expect("a0 is a number or `none`");
        assert!([0.5, 1.0, 3.5].contains(&value), "a0 comes from the swept grid");
    }
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("a0"), "a0 reported on stdout:\n{stdout}");
}

#[test]
fn measure_rows_match_sample_count_with_exact_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    run_ok(&[
        "measure",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);

    let csv = read(&out_dir.join("measure.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], MEASURE_HEADER);
    assert_eq!(lines.len(), 5, "one row per measured sample");
    for (i, line) in lines[1..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[0], i.to_string());
        // Ground states are basis states: estimates are exact, so the
        // deviation column is exactly zero.
        assert_eq!(cells[5], "0", "row {i}: {line}");
        assert_eq!(cells[1], cells[2], "correlation estimate vs exact");
        assert_eq!(cells[3], cells[4], "parity estimate vs exact");
    }
}

#[test]
fn qsvc_subcommand_fills_auc() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    run_ok(&[
        "qsvc",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);

    let csv = read(&out_dir.join("qsvc.csv"));
    for line in csv.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let auc: f64 = cells[12].parse().expect("auc cell filled");
        assert!((0.0..=1.0).contains(&auc), "{line}");
    }
    // The manifest records the forced classifier so reruns reproduce it.
    let manifest = read(&out_dir.join("manifest_qsvc.cfg"));
    assert!(manifest.lines().any(|l| l == "qsvc = true"), "{manifest}");
}

#[test]
fn override_precedence_is_file_then_set_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "seed = 1\n");
    let out_dir = dir.path().join("out");
    run_ok(&[
        "features",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--set",
        "seed=2",
        "--seed",
        "3",
        "--set",
        "a=1.5",
    ]);
    let manifest = read(&out_dir.join("manifest_features.cfg"));
    assert!(manifest.lines().any(|l| l == "seed = 3"), "named flag wins:\n{manifest}");
    assert!(manifest.lines().any(|l| l == "a = 1.5"), "--set applies:\n{manifest}");
}

#[test]
fn svg_output_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "svg = true\n");
    let out_dir = dir.path().join("out");
    run_ok(&[
        "features",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    let svg = read(&out_dir.join("features.svg"));
    assert!(svg.starts_with("<svg"));

    let out_dir2 = dir.path().join("out2");
    let cfg2 = write_config(dir.path(), "");
    run_ok(&[
        "features",
        "--config",
        cfg2.to_str().unwrap(),
        "--out-dir",
        out_dir2.to_str().unwrap(),
    ]);
    assert!(!out_dir2.join("features.svg").exists());
}

#[test]
fn csv_data_source_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    // A linearly separated two-class table with three feature columns.
    let mut table = String::from("f0,f1,f2,outcome\n");
    for i in 0..30 {
        let x = i as f64 * 0.1;
        table.push_str(&format!("{x},{},{},no\n", x + 0.3, 0.5 - x));
        table.push_str(&format!("{},{},{},yes\n", x + 3.0, x + 3.3, 3.5 - x));
    }
    let data = dir.path().join("data.csv");
    std::fs::write(&data, table).unwrap();

    let cfg = write_config(
        dir.path(),
        &format!(
            "data = csv\ncsv_path = {}\nlabel_column = outcome\npositive_label = yes\n\
             balance_total = 20\nfeatures = 2\nn_features = 2\n",
            data.display()
        ),
    );
    let out_dir = dir.path().join("out");
    run_ok(&[
        "features",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    let csv = read(&out_dir.join("features.csv"));
    assert_eq!(csv.lines().count(), 2, "single feature count, single row");
}
