use std::process::{Command, Output};

fn sbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbp")).args(args).output().expect("run sbp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn alpha_star_check_passes() {
    let o = sbp(&["--check", "alpha-star", "--n", "24"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS alpha* table"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["alpha_star"].as_f64().unwrap() - 481.3408873321106).abs() < 1e-9);
}

#[test]
fn borrowing_check_passes() {
    for alpha in ["490", "483"] {
        let o = sbp(&["--check", "borrowing", "--alpha", alpha]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stderr(&o).contains("PASS borrowing capacity"));
    }
}

#[test]
fn verify_prints_every_invariant() {
    let o = sbp(&["verify", "--alpha", "490", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("check,residual,tolerance,passed"));
    assert!(text.contains("sbp_identity"));
    assert!(!text.contains(",false"));
}

#[test]
fn output_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |jobs: &str, out: &std::path::Path| {
        let out = out.to_str().unwrap().to_owned();
        let o = sbp(&[
            "--jobs", jobs, "--out", &out, "optimum-sweep", "--n", "16", "--alphas", "483,490,495", "--phis", "1.5,2,4",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    };
    args("1", &a);
    args("3", &b);
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 10);
}

#[test]
fn snapshots_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("snap.csv");
    let o = sbp(&[
        "heat", "--alpha", "490", "--n", "16", "--t-end", "0.01", "--stride", "5",
        "--snapshots", snap.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(snap).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 18);
    assert!(text.lines().count() >= 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sbp(&["alpha-star", "--n", "x"]).status.code(), Some(2));
    assert_eq!(sbp(&["poisson", "--alpha", "490", "--phi", "0.5"]).status.code(), Some(2));
    assert_eq!(sbp(&["wave", "--dt", "1"]).status.code(), Some(2));
    assert_eq!(sbp(&["verify"]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_three() {
    // Below α* the Neumann heat march blows up.
    let o = sbp(&["heat", "--alpha", "481", "--n", "30", "--bc", "neumann"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(!stdout(&o).is_empty());
}

#[test]
fn expected_instability_passes_in_check_mode() {
    let o = sbp(&["--check", "heat", "--alpha", "481", "--n", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS error growth"));
}

#[test]
fn failed_check_exits_four() {
    let o = sbp(&["--check", "compat", "--alpha", "490", "--beta", "0.6607310956790123"]);
    assert_eq!(o.status.code(), Some(0));
    let o = sbp(&["--check", "spectrum", "--family", "neumann", "--alphas", "484.3,490", "--n", "24"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // φ = 1 Dirichlet scanned over a window that excludes the minimizer.
    let o = sbp(&[
        "--check", "spectrum", "--family", "dirichlet", "--phi", "1", "--alpha-min", "490", "--alpha-max", "495",
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn check_without_reference_says_so() {
    let o = sbp(&["--check", "borrowing", "--alpha", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("no published value"));
}
