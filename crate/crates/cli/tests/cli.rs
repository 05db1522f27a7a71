//! End-to-end checks of the command-line interface and the bundled configs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shiftlab"))
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(dir: &Path, file: &str) -> serde_json::Value {
    let body = fs::read_to_string(dir.join(file)).expect("report exists");
    serde_json::from_str(&body).expect("valid JSON")
}

#[test]
fn compare_scaled_pair_is_orthogonal() {
    let out = tempfile::tempdir().unwrap();
    let status = run(&[
        "compare",
        "--config",
        bundled("scaled-2-3.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{status:?}");
    let report = json_of(out.path(), "compare.json");
    assert_eq!(report["summary"], "Orthogonal");
    assert_eq!(report["bundled_example"], "scaled-2-3");
    assert!(report["verdicts"].as_array().unwrap().len() >= 5);
    assert!(report["witness"]["n_star"].is_number());
    assert_eq!(report["kakutani"]["verdict"], "Orthogonal");
}

#[test]
fn compare_sparse_swap_not_orthogonal_not_similar() {
    let out = tempfile::tempdir().unwrap();
    let status = run(&[
        "compare",
        "--config",
        bundled("sparse-swap.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let report = json_of(out.path(), "compare.json");
    assert_eq!(report["summary"], "NotOrthogonal");
    let verdicts = report["verdicts"].as_array().unwrap();
    let similarity = verdicts
        .iter()
        .find(|v| v["rule"].as_str().unwrap().contains("similarity") || v["status"] == "Refuted")
        .unwrap();
    assert_eq!(similarity["status"], "Refuted");
    assert!(report["periodic_witness"]["exact"].as_bool().unwrap());
}

#[test]
fn compare_telescope_gaussian_route() {
    let out = tempfile::tempdir().unwrap();
    let status = run(&[
        "compare",
        "--config",
        bundled("telescope-drift.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let report = json_of(out.path(), "compare.json");
    assert_eq!(report["summary"], "NotOrthogonal");
    assert!(report["periodic_witness"].is_null());
    let gaussian = report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["rule"] == "gaussian-equivalence")
        .unwrap();
    assert_eq!(gaussian["status"], "Established");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let out1 = tempfile::tempdir().unwrap();
    let out2 = tempfile::tempdir().unwrap();
    for out in [&out1, &out2] {
        let status = run(&[
            "compare",
            "--config",
            bundled("prefix-cycle.json").to_str().unwrap(),
            "--out",
            out.path().to_str().unwrap(),
        ]);
        assert!(status.status.success());
    }
    let a = fs::read(out1.path().join("compare.json")).unwrap();
    let b = fs::read(out2.path().join("compare.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn classify_exit_codes_and_overrides() {
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("one.json");
    fs::write(
        &cfg,
        r#"{"spec": {"kind": "constant", "value": 1, "field": "real"}, "horizon": 1000}"#,
    )
    .unwrap();
    let status = run(&[
        "classify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
        "--horizon",
        "500",
    ]);
    // refuted everywhere is still a decision
    assert!(status.status.success());
    let report = json_of(out.path(), "classify.json");
    assert_eq!(report["horizon"], 500);
    let verdicts = report["verdicts"].as_array().unwrap();
    let hyper = verdicts.iter().find(|v| v["property"] == "hypercyclic").unwrap();
    assert_eq!(hyper["status"], "Refuted");
}

#[test]
fn malformed_config_exits_one() {
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("bad.json");
    fs::write(&cfg, "{ not json").unwrap();
    let status = run(&[
        "classify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(1));

    // valid JSON violating the schema invariants also exits 1
    let cfg2 = out.path().join("bad2.json");
    fs::write(
        &cfg2,
        r#"{"spec": {"kind": "constant", "value": 2, "field": "real"}, "horizon": 0}"#,
    )
    .unwrap();
    let status = run(&[
        "classify",
        "--config",
        cfg2.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn empty_curve_toggles_exit_two() {
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"pair": [{"kind": "constant", "value": 2, "field": "real"},
                     {"kind": "constant", "value": 3, "field": "real"}]}"#,
    )
    .unwrap();
    let status = run(&[
        "curves",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(2));
    assert!(!out.path().join("theta.csv").exists());
}

#[test]
fn curves_uniform_theta_table() {
    let out = tempfile::tempdir().unwrap();
    let status = run(&[
        "curves",
        "--config",
        bundled("curves-uniform.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let theta = fs::read_to_string(out.path().join("theta.csv")).unwrap();
    let mut lines = theta.lines();
    assert_eq!(lines.next(), Some("lambda,theta"));
    let row4 = theta.lines().find(|l| l.starts_with("4,")).expect("lambda = 4 row");
    let val: f64 = row4.split(',').nth(1).unwrap().parse().unwrap();
    assert!((val - 0.5).abs() < 1e-9);
    // the per-marginal overlap stream grows monotonically in the deficit
    let hel = fs::read_to_string(out.path().join("hellinger_per_n.csv")).unwrap();
    let mut prev = -1.0f64;
    for line in hel.lines().skip(1).take(200) {
        let d: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(d >= prev);
        prev = d;
    }
}

#[test]
fn sample_csv_shape_and_determinism() {
    let out = tempfile::tempdir().unwrap();
    let status = run(&[
        "sample",
        "--config",
        bundled("sample-gaussian.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
        "--seed",
        "99",
    ]);
    assert!(status.status.success());
    let body = fs::read_to_string(out.path().join("samples.csv")).unwrap();
    let mut lines = body.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("n0,n1,"));
    assert_eq!(lines.count(), 200);

    // same seed reproduces the file exactly
    let out2 = tempfile::tempdir().unwrap();
    let status = run(&[
        "sample",
        "--config",
        bundled("sample-gaussian.json").to_str().unwrap(),
        "--out",
        out2.path().to_str().unwrap(),
        "--seed",
        "99",
    ]);
    assert!(status.status.success());
    let body2 = fs::read_to_string(out2.path().join("samples.csv")).unwrap();
    assert_eq!(body, body2);
}
