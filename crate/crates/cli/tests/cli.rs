use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn nblp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nblp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = nblp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(name: &str, value: &Value) {
    if let Err(e) = jsonschema::validate(&schema(name), value) {
        panic!("{name} schema violation: {e}\n{value:#}");
    }
}

#[test]
fn synth_examples() {
    let qram = ok_json(&["synth", "qram", "--n", "1", "--q", "2"]);
    assert_eq!(qram["width"], 12);
    assert_eq!(qram["predicted_width"], 12);
    assert_eq!(qram["t_depth"], qram["predicted_t_depth"]);
    assert_schema("synth_metrics", &qram);

    let aqft = ok_json(&["synth", "aqft", "--l", "4", "--beta", "3"]);
    assert_eq!(aqft["crk_count"], 5);
    assert_eq!(aqft["t_count"], Value::Null);
    assert_schema("synth_metrics", &aqft);

    let bv = ok_json(&["synth", "bv", "--n", "7"]);
    assert_eq!(bv["t_depth"], 0);
    assert_schema("synth_metrics", &bv);

    let qft = ok_json(&["synth", "qft", "--l", "5"]);
    assert_eq!(qft["crk_count"], 10);
    assert_schema("synth_metrics", &qft);
}

#[test]
fn synth_writes_importable_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qram.txt");
    let metrics = ok_json(&[
        "synth",
        "qram",
        "--n",
        "2",
        "--q",
        "2",
        "--circuit",
        path.to_str().unwrap(),
    ]);
    let circuit =
        nblp_core::circuit::import_text(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(circuit.width() as u64, metrics["width"].as_u64().unwrap());
    assert_eq!(
        circuit.t_depth().unwrap() as u64,
        metrics["t_depth"].as_u64().unwrap()
    );
}

#[test]
fn synth_qram_reads_memory_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mem.json");
    std::fs::write(&path, r#"{"q": 1, "n": 1, "cells": ["11", "01"]}"#).unwrap();
    let m = ok_json(&[
        "synth",
        "qram",
        "--n",
        "1",
        "--q",
        "1",
        "--memory",
        path.to_str().unwrap(),
    ]);
    assert_eq!(m["query_loads_emitted"], 3);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"q": 1, "n": 1, "cells": ["1"]}"#).unwrap();
    let out = nblp(&[
        "synth",
        "qram",
        "--n",
        "1",
        "--q",
        "1",
        "--memory",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn estimate_chain_and_infeasible_exit_code() {
    let args = [
        "estimate",
        "--n",
        "4",
        "--q",
        "4",
        "--eta",
        "0.25",
        "--t",
        "0.1",
        "--epsilon",
        "0.5",
        "--delta",
        "0.05",
    ];
    let report = ok_json(&args);
    assert_eq!(report["s_repetitions"], 13834);
    assert_eq!(report["m"], 6917);
    assert_schema("bounds_report", &report);

    let out = nblp(&[
        "estimate",
        "--n",
        "4",
        "--q",
        "4",
        "--eta",
        "0.25",
        "--t",
        "0.3",
        "--epsilon",
        "0.5",
        "--delta",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t < eta"));
}

#[test]
fn invalid_input_exit_code() {
    for args in [
        vec![
            "estimate",
            "--n",
            "4",
            "--q",
            "5",
            "--eta",
            "0.25",
            "--t",
            "0.1",
            "--epsilon",
            "0.5",
            "--delta",
            "0.05",
        ],
        vec![
            "estimate",
            "--n",
            "4",
            "--q",
            "4",
            "--eta",
            "0.25",
            "--t",
            "0.1",
            "--epsilon",
            "0.5",
            "--delta",
            "2",
        ],
        vec!["synth", "aqft", "--l", "4", "--beta", "1"],
        vec!["simulate", "--n", "3", "--q", "3", "--eta", "0.3"],
        vec![
            "simulate",
            "--n",
            "3",
            "--q",
            "3",
            "--eta",
            "0.3",
            "--seed",
            "1",
            "--prep-mode",
            "qram",
        ],
        vec!["synth", "qram", "--n", "1"],
        vec!["bogus"],
    ] {
        assert_eq!(nblp(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sweep_rows() {
    let out = nblp(&[
        "sweep",
        "--n-min",
        "4",
        "--eta",
        "0.25",
        "--t",
        "0.1",
        "--epsilon",
        "0.5",
        "--delta",
        "0.05",
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "n");
    let s_col = headers.iter().position(|h| h == "s_repetitions").unwrap();
    let s: Vec<f64> = reader
        .records()
        .map(|r| r.unwrap()[s_col].parse().unwrap())
        .collect();
    assert_eq!(s.len(), 4);
    for w in s.windows(2) {
        assert!((w[0] / w[1] - 4.0).abs() < 1e-3);
    }
}

#[test]
fn simulate_noiseless_and_schema() {
    let r = ok_json(&[
        "simulate", "--n", "3", "--q", "3", "--eta", "0.5", "--seed", "11", "--shots", "100",
    ]);
    assert_eq!(r["conditional_success_rate"], 1.0);
    assert_eq!(r["episodes"].as_array().unwrap().len(), 100);
    assert_schema("simulate_report", &r);

    let sv = ok_json(&[
        "simulate",
        "--n",
        "2",
        "--q",
        "2",
        "--eta",
        "0.5",
        "--seed",
        "11",
        "--shots",
        "30",
        "--prep-mode",
        "qram",
        "--summary-only",
    ]);
    assert_eq!(sv["conditional_success_rate"], 1.0);
    assert!(sv.get("episodes").is_none());
    assert_schema("simulate_report", &sv);

    let fresh = ok_json(&[
        "simulate",
        "--n",
        "4",
        "--q",
        "2",
        "--eta",
        "0.2",
        "--seed",
        "3",
        "--shots",
        "50",
        "--realization",
        "fresh",
        "--prep-mode",
        "ideal",
    ]);
    assert_eq!(fresh["exact"], Value::Null);
    assert_schema("simulate_report", &fresh);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "simulate", "--n", "4", "--q", "3", "--eta", "0.2", "--seed", "5", "--shots", "500",
        ],
        vec![
            "simulate",
            "--n",
            "3",
            "--q",
            "2",
            "--eta",
            "0.2",
            "--seed",
            "5",
            "--shots",
            "200",
            "--realization",
            "fresh",
            "--prep-mode",
            "ideal",
            "--format",
            "csv",
        ],
        vec![
            "samples", "generate", "--n", "5", "--q", "3", "--eta", "0.3", "--seed", "8",
        ],
    ];
    for args in cases {
        let a = nblp(&args);
        let b = nblp(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg: PathBuf = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# estimate defaults\nn = 4\nq = 4\neta = 0.25\nt = 0.1\nepsilon = 0.5\ndelta = 0.05\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = ok_json(&["estimate", "--config", c]);
    assert_eq!(from_file["s_repetitions"], 13834);
    let overridden = ok_json(&["estimate", "--config", c, "--q", "3"]);
    assert_eq!(overridden["q"], 3);
    assert_eq!(overridden["eta"], 0.25);

    std::fs::write(&cfg, "nonsense = 1\n").unwrap();
    assert_eq!(nblp(&["estimate", "--config", c]).status.code(), Some(2));
}

#[test]
fn samples_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.json");
    let p = path.to_str().unwrap();
    let out = nblp(&[
        "samples", "generate", "--n", "4", "--q", "4", "--eta", "0.5", "--seed", "2", "--secret",
        "1011", "--output", p,
    ]);
    assert!(out.status.success());
    let set: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema("sample_set", &set);

    let inspect = ok_json(&["samples", "inspect", p]);
    assert_eq!(inspect["brute_force"], "1011");
    assert_eq!(inspect["exact_ps_rational"], "1/2");
    assert_schema("samples_inspect", &inspect);

    let sim = ok_json(&["simulate", "--samples", p, "--seed", "1", "--shots", "64"]);
    assert_eq!(sim["secret"], "1011");
    assert_eq!(sim["exact"]["ps"], 0.5);
}

#[test]
fn memory_schema_accepts_core_output() {
    let table =
        nblp_core::qram::MemoryTable::new(1, 1, vec!["10".parse().unwrap(), "01".parse().unwrap()])
            .unwrap();
    let value: Value = serde_json::from_str(&table.to_json()).unwrap();
    assert_schema("memory_table", &value);
}
