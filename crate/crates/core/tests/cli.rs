//! End-to-end runs of the `storshare` binary.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_storshare");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_tariff(dir: &Path, body: &str) -> String {
    let path = dir.join("tariff.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const STUDY_TARIFF: &str = r#"{"lambda_h":0.54,"lambda_l":0.22,"mu_h":0.30,"mu_l":0.13}"#;

#[test]
fn validate_tariff_ok_and_violation_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_tariff(dir.path(), STUDY_TARIFF);
    let out = run(&["validate-tariff", "--tariff", &good]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "OK");

    let bad_path = dir.path().join("bad.json");
    std::fs::write(
        &bad_path,
        r#"{"lambda_h":0.30,"lambda_l":0.22,"mu_h":0.54,"mu_l":0.13}"#,
    )
    .unwrap();
    let out = run(&["validate-tariff", "--tariff", bad_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("lambda_h < mu_h"));
}

#[test]
fn gen_data_is_deterministic_per_seed() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let out = run(&[
            "gen-data",
            "--out",
            d.path().to_str().unwrap(),
            "--seed",
            "7",
            "--households",
            "6",
            "--days",
            "4",
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["loads.csv", "capacities.csv"] {
        let a = std::fs::read(d1.path().join(name)).unwrap();
        let b = std::fs::read(d2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} not reproducible");
    }
}

#[test]
fn full_pipeline_simulate_core_check_settle() {
    let dir = tempfile::tempdir().unwrap();
    let data_dir = dir.path().join("data");
    let out = run(&[
        "gen-data",
        "--out",
        data_dir.to_str().unwrap(),
        "--seed",
        "42",
        "--households",
        "8",
        "--days",
        "5",
    ]);
    assert!(out.status.success());
    let tariff = write_tariff(dir.path(), STUDY_TARIFF);
    let loads = data_dir.join("loads.csv");
    let capacities = data_dir.join("capacities.csv");
    let report_dir = dir.path().join("report");

    let out = run(&[
        "simulate",
        "--tariff",
        &tariff,
        "--loads",
        loads.to_str().unwrap(),
        "--capacities",
        capacities.to_str().unwrap(),
        "--out",
        report_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["summary.csv", "household_savings.csv", "daily_ledger.csv", "report.json"] {
        assert!(report_dir.join(name).exists(), "{name} missing");
    }
    let summary = std::fs::read_to_string(report_dir.join("summary.csv")).unwrap();
    assert_eq!(summary.trim().lines().count(), 6);

    let out = run(&[
        "core-check",
        "--tariff",
        &tariff,
        "--loads",
        loads.to_str().unwrap(),
        "--capacities",
        capacities.to_str().unwrap(),
        "--date",
        "2016-01-02",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["num_coalitions_checked"], 255);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);

    let out = run(&[
        "settle-day",
        "--tariff",
        &tariff,
        "--loads",
        loads.to_str().unwrap(),
        "--capacities",
        capacities.to_str().unwrap(),
        "--csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("household_id,date,regime"));
    assert_eq!(text.trim().lines().count(), 9); // header + 8 households
}

#[test]
fn data_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let tariff = write_tariff(dir.path(), STUDY_TARIFF);
    let loads = dir.path().join("loads.csv");
    std::fs::write(&loads, "household_id,timestamp,kwh\na,not-a-time,1.0\n").unwrap();
    let capacities = dir.path().join("capacities.csv");
    std::fs::write(&capacities, "household_id,capacity_kwh,lambda_b\na,5.0,0.08\n").unwrap();
    let out = run(&[
        "simulate",
        "--tariff",
        &tariff,
        "--loads",
        loads.to_str().unwrap(),
        "--capacities",
        capacities.to_str().unwrap(),
        "--out",
        dir.path().join("r").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn invalid_tariff_aborts_simulation_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let tariff = write_tariff(dir.path(), r#"{"lambda_h":0.1,"lambda_l":0.22,"mu_h":0.30,"mu_l":0.13}"#);
    let loads = dir.path().join("loads.csv");
    std::fs::write(&loads, "household_id,timestamp,kwh\n").unwrap();
    let capacities = dir.path().join("capacities.csv");
    std::fs::write(&capacities, "household_id,capacity_kwh,lambda_b\n").unwrap();
    let out = run(&[
        "simulate",
        "--tariff",
        &tariff,
        "--loads",
        loads.to_str().unwrap(),
        "--capacities",
        capacities.to_str().unwrap(),
        "--out",
        dir.path().join("r").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fill_missing_flag_and_peak_window() {
    let dir = tempfile::tempdir().unwrap();
    let tariff = write_tariff(dir.path(), STUDY_TARIFF);
    // only 2 of 24 hours present
    let loads = dir.path().join("loads.csv");
    std::fs::write(
        &loads,
        "household_id,timestamp,kwh\n\
         a,2016-03-01T09:00:00,2.5\n\
         a,2016-03-01T23:00:00,1.0\n",
    )
    .unwrap();
    let capacities = dir.path().join("capacities.csv");
    std::fs::write(&capacities, "household_id,capacity_kwh,lambda_b\na,5.0,0.08\n").unwrap();

    let base = [
        "simulate",
        "--tariff",
        &tariff,
        "--loads",
        loads.to_str().unwrap(),
        "--capacities",
        capacities.to_str().unwrap(),
        "--out",
    ];
    let strict_out = dir.path().join("strict");
    let mut args: Vec<&str> = base.to_vec();
    args.push(strict_out.to_str().unwrap());
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2), "missing hours must fail without the flag");

    let filled_out = dir.path().join("filled");
    let mut args: Vec<&str> = base.to_vec();
    args.push(filled_out.to_str().unwrap());
    args.extend(["--fill-missing", "--peak-window", "9:10"]);
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(filled_out.join("report.json")).unwrap())
            .unwrap();
    // window 9:10 puts the 2.5 kWh hour in peak, the 23:00 hour off-peak
    let without = json["households"][0]["cost_without_storage"].as_f64().unwrap();
    assert!((without - (0.54 * 2.5 + 0.22 * 1.0)).abs() < 1e-9);
}
