use qlectra_cli::{metrics_json, registry, run_config, ExperimentConfig};
use serde_json::Value;
use std::process::Command;

fn qlectra(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qlectra")).args(args).output().unwrap()
}

#[test]
fn grover_report_on_stdout() {
    let out = qlectra(&["grover", "--param", "n=3", "--param", "marked=2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metrics"]["iterations"].as_f64(), Some(2.0));
    assert!((v["metrics"]["success_prob"].as_f64().unwrap() - 0.9453).abs() < 1e-4);
    assert_eq!(v["params"]["n"], 3);
}

#[test]
fn chsh_estimate_within_four_sigma() {
    let out = qlectra(&["chsh", "--seed", "7", "--param", "shots=100000"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = &v["metrics"];
    assert!((m["exact"].as_f64().unwrap() - 0.7071).abs() < 1e-4);
    assert!(m["z_score"].as_f64().unwrap().abs() < 4.0);
}

#[test]
fn config_file_runs_twice_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"schema":1,"name":"polymer","seed":4,"params":{"trials":20000}}"#).unwrap();
    let a = qlectra(&["run", "-f", cfg.to_str().unwrap()]);
    let b = Command::new(env!("CARGO_BIN_EXE_qlectra"))
        .args(["run", "-f", cfg.to_str().unwrap()])
        .env("QLECTRA_THREADS", "1")
        .output()
        .unwrap();
    let metrics = |o: &std::process::Output| serde_json::from_slice::<Value>(&o.stdout).unwrap()["metrics"].to_string();
    assert!(a.status.success() && b.status.success());
    assert_eq!(metrics(&a), metrics(&b));
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("report.csv");
    std::fs::write(&cfg, r#"{"schema":1,"name":"bb84","seed":1,"params":{"bits":256},"output":{"format":"json"}}"#).unwrap();
    let r = qlectra(&["run", "-f", cfg.to_str().unwrap(), "--param", "eve=true", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(r.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    let record = rows.records().next().unwrap().unwrap();
    let eve = headers.iter().position(|h| h == "eve_detected").unwrap();
    assert_eq!(record[eve].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn rabi_csv_columns() {
    let out = qlectra(&["rabi", "--format", "csv", "--param", "samples=20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,p_n0,p_n1m1"));
    assert_eq!(lines.count(), 21);
}

#[test]
fn chsh_records_carry_trial_fields() {
    let out = qlectra(&["chsh", "--format", "csv", "--param", "shots=10", "--param", "records=true"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("setting_a,setting_b,outcome_a,outcome_b\n"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn errors_are_json_with_exit_codes() {
    let unknown = qlectra(&["warp-drive"]);
    assert_eq!(unknown.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&unknown.stderr).unwrap();
    assert_eq!(v["error"], "unknown_experiment");

    let extra = qlectra(&["grover", "--param", "colour=red"]);
    assert_eq!(extra.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&extra.stderr).unwrap();
    assert_eq!(v["error"], "schema_violation");

    let missing = qlectra(&["run", "-f", "/nonexistent/cfg.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(v["error"], "io_failure");

    let numerical = qlectra(&["cocsign", "--param", "nu=10"]);
    assert_eq!(numerical.status.code(), Some(3));
}

#[test]
fn list_names_every_experiment() {
    let out = qlectra(&["list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for e in registry() {
        assert!(text.lines().any(|l| l.starts_with(e.id)), "{}", e.id);
    }
}

#[test]
fn every_experiment_runs_with_small_parameters() {
    let overrides: &[(&str, &[&str])] = &[
        ("grover-adiabatic", &["n=3", "marked=2", "total=4"]),
        ("shor", &["q=15"]),
        ("zalka", &["n=4", "steps=40", "center=2", "x0=1.5"]),
        ("anneal", &["total=20", "steps=400"]),
        ("lindblad", &["t=0.5", "dt=0.01"]),
        ("rabi", &["samples=10"]),
        ("decouple", &["runs=2", "total=0.01"]),
        ("teleport", &["inputs=5"]),
        ("bb84", &["bits=64"]),
        ("chsh", &["shots=1000"]),
        ("polymer", &["trials=1000", "control=classical:5"]),
        ("quanta", &["eps=0.1,0.05"]),
        ("complexity", &["state=pairs"]),
        ("phonons", &["n=8"]),
        ("qft", &["n=3"]),
    ];
    for e in registry() {
        let mut cfg = ExperimentConfig::new(e.id);
        cfg.seed = 13;
        if let Some((_, ps)) = overrides.iter().find(|(id, _)| *id == e.id) {
            for a in *ps {
                cfg.set_param(a).unwrap();
            }
        }
        let r = run_config(&cfg, Some(2)).unwrap_or_else(|err| panic!("{}: {err}", e.id));
        assert!(!r.metrics.is_empty());
        assert!(r.metrics.values().all(|v| v.is_finite()), "{}: {:?}", e.id, r.metrics);
        assert_eq!(metrics_json(&r), metrics_json(&run_config(&cfg, Some(1)).unwrap()), "{}", e.id);
    }
}

#[test]
fn complexity_of_pairs_and_ghz() {
    let run = |state: &str| {
        let mut cfg = ExperimentConfig::new("complexity");
        cfg.set_param(&format!("state={state}")).unwrap();
        let r = run_config(&cfg, Some(1)).unwrap();
        (r.metrics["naive"], r.metrics["quantum"])
    };
    assert_eq!(run("pairs"), (2.0, 2.0));
    assert_eq!(run("product"), (1.0, 1.0));
    assert_eq!(run("ghz").1, 4.0);
}
