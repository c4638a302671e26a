use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lasgap(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lasgap"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tardy_verify_level_one_is_feasible_with_gap_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = lasgap(
        &[
            "tardy-verify",
            "--n",
            "16",
            "--k",
            "2",
            "--theorem",
            "2",
            "--level",
            "1",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = report(&out);
    assert_eq!(r["gap"], "2");
    assert_eq!(r["status"], "FEASIBLE");
}

#[test]
fn tardy_verify_level_two_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = lasgap(
        &[
            "tardy-verify",
            "--n",
            "16",
            "--k",
            "2",
            "--theorem",
            "2",
            "--level",
            "2",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&out)["status"], "INFEASIBLE");
}

#[test]
fn verify_zeta_all_shifts_passes_and_writes_default_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = lasgap(
        &["verify-zeta", "--n", "5", "--d", "2", "--all-shifts"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("verify-zeta.json").exists());
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = lasgap(&["tardy-opt", "--bogus"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_parameter_is_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = lasgap(&["gen-instance", "--n", "15"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for (sub, extra) in [
        ("polyopt-verify", vec!["--n", "4", "--k", "2"]),
        ("oracle-compare", vec!["--seed", "3", "--count", "20"]),
        ("tardy-opt", vec!["--m", "3", "--p-base", "10"]),
    ] {
        let mut texts = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{sub}-{run}.json"));
            let mut args = vec![sub];
            args.extend(&extra);
            args.extend(["--out", out.to_str().unwrap()]);
            let o = lasgap(&args, dir.path());
            assert_eq!(o.status.code(), Some(0), "{sub}");
            texts.push(std::fs::read(&out).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{sub}");
    }
}
