use std::collections::BTreeMap;
use std::process::Command;

use serde_json::Value;
use tesstopo::cli::{run, Outcome, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_OK, EXIT_VALIDATION};
use tesstopo::io::scalar_from_json;
use tesstopo::scalar::Scalar;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("tesstopo").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = cli(args);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

/// Leaf strings of a JSON tree keyed by dotted path.
fn leaves(v: &Value, path: String, out: &mut BTreeMap<String, String>) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{path}.{k}")
        }
    };
    match v {
        Value::Object(m) if m.contains_key("decimal") => {
            out.insert(path, scalar_from_json(v).unwrap().render());
        }
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, join(k), out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| leaves(x, join(&i.to_string()), out)),
        Value::String(s) => {
            out.insert(path, s.clone());
        }
        Value::Null => {}
        other => {
            out.insert(path, other.to_string());
        }
    }
}

fn csv_values(text: &str) -> BTreeMap<String, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["path", "value", "decimal"]
    );
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            let value = match Scalar::parse(&rec[1]) {
                Ok(x) if !rec[2].is_empty() => x.render(),
                _ => rec[1].to_string(),
            };
            (rec[0].to_string(), value)
        })
        .collect()
}

#[test]
fn json_and_csv_carry_the_same_values() {
    for args in [
        vec!["derive", "--catalog", "ex04_stit"],
        vec!["check", "--catalog", "ex08_divided_delaunay"],
        vec!["transform", "central-point", "--catalog", "ex05_cubic_lattice"],
        vec!["measure", "--generator", "parallel_pyramids"],
    ] {
        let mut from_json = BTreeMap::new();
        leaves(&json(&args), String::new(), &mut from_json);
        let mut csv_args = vec!["--format", "csv"];
        csv_args.extend(&args);
        let out = cli(&csv_args);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert_eq!(csv_values(&out.stdout), from_json, "{args:?}");
    }
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        vec!["derive", "--catalog", "ex08_divided_delaunay"],
        vec!["sample", "--count", "5", "--seed", "11"],
        vec!["--format", "csv", "region", "--type", "pv-ep", "--ve", "5"],
        vec!["catalog", "list"],
    ] {
        let a = cli(&args);
        assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
        assert_eq!(a.stdout, cli(&args).stdout);
    }
}

#[test]
fn parameter_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let reference = json(&["derive", "--catalog", "ex04_stit"]);
    let params = reference["params"].clone();
    let json_path = dir.path().join("stit.json");
    std::fs::write(&json_path, serde_json::to_string(&params).unwrap()).unwrap();
    assert_eq!(json(&["derive", "--file", json_path.to_str().unwrap()]), reference);

    let csv_path = dir.path().join("stit.csv");
    let mut text = String::from("key,value\n");
    for (k, v) in params.as_object().unwrap() {
        text.push_str(&format!("{k},{}\n", v.as_str().unwrap()));
    }
    std::fs::write(&csv_path, text).unwrap();
    assert_eq!(json(&["derive", "--file", csv_path.to_str().unwrap()]), reference);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["check", "--catalog", "ex04_stit"]).code, EXIT_OK);
    assert_eq!(cli(&["check", "VE=4", "EP=3", "PV=99"]).code, EXIT_INFEASIBLE);
    assert_eq!(cli(&["check", "VE=nonsense"]).code, EXIT_INVALID);
    assert_eq!(cli(&["check", "--catalog", "no_such_entry"]).code, EXIT_INVALID);
    assert_eq!(cli(&["derive", "--catalog", "ex04_stit", "VE=4"]).code, EXIT_INVALID);
    assert_eq!(
        cli(&["--precision", "10", "derive", "--catalog", "ex04_stit"]).code,
        EXIT_INVALID
    );
    assert_eq!(cli(&["measure", "--generator", "no_such_generator"]).code, EXIT_INVALID);

    let dir = tempfile::tempdir().unwrap();
    let overlapping = dir.path().join("overlap.json");
    let cube = [
        [0, 0, 0],
        [1, 0, 0],
        [0, 1, 0],
        [1, 1, 0],
        [0, 0, 1],
        [1, 0, 1],
        [0, 1, 1],
        [1, 1, 1],
    ];
    let domain = serde_json::json!({
        "name": "two cubes",
        "lattice": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "cells": [cube, cube],
    });
    std::fs::write(&overlapping, domain.to_string()).unwrap();
    assert_eq!(
        cli(&["measure", "--domain", overlapping.to_str().unwrap()]).code,
        EXIT_VALIDATION
    );
}

#[test]
fn precision_controls_decimals() {
    let digits = |out: &Outcome| {
        let line = out
            .stdout
            .lines()
            .find(|l| l.starts_with("params.mu_VE,"))
            .unwrap()
            .to_string();
        let dec = line.rsplit(',').next().unwrap().to_string();
        dec.trim_start_matches('-')
            .replace('.', "")
            .trim_start_matches('0')
            .len()
    };
    let base = ["--format", "csv", "derive", "--catalog", "ex08_divided_delaunay"];
    assert_eq!(digits(&cli(&base)), 50);
    let mut wide = base.to_vec();
    wide.extend(["--precision", "80"]);
    assert_eq!(digits(&cli(&wide)), 80);
}

#[test]
fn binary_reads_precision_from_environment() {
    let exe = env!("CARGO_BIN_EXE_tesstopo");
    let out = Command::new(exe)
        .args(["--format", "csv", "derive", "--catalog", "ex08_divided_delaunay"])
        .env("TESSTOPO_PRECISION", "20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("params.mu_VE,")).unwrap();
    assert_eq!(line.rsplit(',').next().unwrap(), "6.5011791282185856197");

    let bad = Command::new(exe)
        .args(["check", "VE=4", "EP=3", "PV=99"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INFEASIBLE));
    let help = Command::new(exe).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
}

#[test]
fn obj_export_writes_every_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pyramids.obj");
    let out = cli(&[
        "measure",
        "--generator",
        "parallel_pyramids",
        "--obj",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("o ")).count() > 0);
    assert!(text.lines().any(|l| l.starts_with("f ")));
}
