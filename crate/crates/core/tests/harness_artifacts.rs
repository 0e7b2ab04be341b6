use std::fs;
use std::path::Path;

use aqg_core::diagnostics::CSV_HEADER;
use aqg_core::harness::{
    cmd_run, cmd_sweep, cmd_verify, HarnessError, VerifySuite, SWEEP_CSV_HEADER,
};
use aqg_core::oracle::ORACLE_CSV_HEADER;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const RUN: &str =
    "n1 = 16\nn2 = 16\nalpha = 0.75\nbeta = 0.75\nmu = 1\nnu = 1\nt_end = 0.1\ndt = 0.005\n";

#[test]
fn run_writes_report_snapshot_and_record() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", RUN);
    let out = dir.path().join("out");
    let rec = cmd_run(&cfg, &out, None).unwrap();
    let csv = fs::read_to_string(&rec.report_path).unwrap();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    assert_eq!(csv.lines().count(), 22);
    assert!(rec.condition_11 && rec.rho.is_some());
    assert!(rec.verdict.growth_rate_tail < 0.0);

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("run.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["solver"]["params"]["alpha"], 0.75);
    assert_eq!(json["condition_11"], true);
    assert!(json["wall_time"].as_f64().unwrap() >= 0.0);

    // the final snapshot feeds a follow-up run
    let follow = format!("{RUN}init = file\ninit_path = out/final.aqgf\n");
    let cfg2 = write(dir.path(), "follow.cfg", &follow);
    let rec2 = cmd_run(&cfg2, &dir.path().join("out2"), None).unwrap();
    let first_row = fs::read_to_string(&rec2.report_path)
        .unwrap()
        .lines()
        .nth(1)
        .unwrap()
        .to_string();
    let last_row = csv.lines().last().unwrap();
    // same hs column up to snapshot rounding
    let hs = |row: &str| row.split(',').nth(4).unwrap().parse::<f64>().unwrap();
    assert!((hs(&first_row) - hs(last_row)).abs() <= 1e-12 * hs(last_row));
}

#[test]
fn config_errors_exit_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.cfg",
        &RUN.replace("alpha = 0.75", "alpha = 1.5"),
    );
    let err = cmd_run(&cfg, dir.path(), None).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().starts_with("line 3"), "{err}");
    let err = cmd_run(&dir.path().join("missing.cfg"), dir.path(), None).unwrap_err();
    assert!(matches!(err, HarnessError::Config(_)));
}

#[test]
fn seed_override_changes_random_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "r.cfg",
        &format!("{RUN}init = random\nseed = 3\n"),
    );
    let a = cmd_run(&cfg, &dir.path().join("a"), None).unwrap();
    let b = cmd_run(&cfg, &dir.path().join("b"), Some(3)).unwrap();
    let c = cmd_run(&cfg, &dir.path().join("c"), Some(4)).unwrap();
    let read = |p: &Path| fs::read_to_string(p).unwrap();
    assert_eq!(read(&a.report_path), read(&b.report_path));
    assert_ne!(read(&a.report_path), read(&c.report_path));
}

#[test]
fn sweep_and_verify_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.cfg",
        "n1 = 16\nn2 = 16\nmu = 1\nnu = 1\nt_end = 0.02\nalpha_grid = 0.3, 0.7\nbeta_grid = 0.5\n",
    );
    let (rows, path) = cmd_sweep(&cfg, dir.path(), None).unwrap();
    assert_eq!(rows.len(), 2);
    let text = fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().next(), Some(SWEEP_CSV_HEADER));
    assert!(text.lines().nth(2).unwrap().starts_with("0.7,0.5,true,"));

    let (outcome, path) = cmd_verify(VerifySuite::Lemma6, dir.path(), None).unwrap();
    assert!(outcome.passed());
    let text = fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().next(), Some(ORACLE_CSV_HEADER));
    assert_eq!(text.lines().count(), 5);
}
