use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn examples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobarlab")).current_dir(examples()).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all: Vec<&str> = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn totals(entries: &Value, n: usize) -> Vec<u64> {
    let mut t = vec![0; n];
    for e in entries.as_array().unwrap() {
        let i = e[0].as_u64().unwrap() as usize;
        if i < n {
            t[i] += e[2].as_u64().unwrap();
        }
    }
    t
}

fn strip_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_seconds");
    v
}

#[test]
fn bundled_examples_reproduce_expected_values() {
    let expected: Value = serde_json::from_str(&std::fs::read_to_string(examples().join("expected.json")).unwrap()).unwrap();
    for case in expected.as_array().unwrap() {
        let args: Vec<&str> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        if let Some(text) = case.get("stdout_contains") {
            let out = run(&args);
            assert_eq!(out.status.code(), case["exit"].as_i64().map(|c| c as i32), "{args:?}");
            assert!(String::from_utf8_lossy(&out.stdout).contains(text.as_str().unwrap()), "{args:?}");
            continue;
        }
        let (code, report) = run_json(&args);
        assert_eq!(code, 0, "{args:?}");
        let results = &report["results"];
        if let Some(t) = case.get("totals") {
            let want: Vec<u64> = serde_json::from_value(t.clone()).unwrap();
            assert_eq!(totals(&results["entries"], want.len()), want, "{args:?}");
        }
        if let Some(e) = case.get("entries") {
            assert_eq!(&results["entries"], e, "{args:?}");
        }
        for key in ["comodule_side", "window_dims"] {
            if let Some(want) = case.get(key) {
                assert_eq!(&results[key], want, "{args:?}");
            }
        }
        if args[0] == "compare" {
            assert_eq!(results["comodule_side"], results["module_side"]);
        }
    }
}

#[test]
fn opposite_side_is_symmetric_on_bundled_coalgebras() {
    for (file, jmax) in [
        ("c2.json", None),
        ("c3.json", None),
        ("ten2_d2.json", Some("2")),
        ("square_zero.json", None),
        ("sym2_d4.json", Some("4")),
        ("xy_dual_d4.json", Some("4")),
    ] {
        let mut args = vec!["ext", file, "--imax", "3", "--side", "op"];
        if let Some(j) = jmax {
            args.extend(["--jmax", j]);
        }
        let (code, report) = run_json(&args);
        assert_eq!(code, 0, "{file}");
        assert_eq!(report["results"]["symmetric"], Value::Bool(true), "{file}");
    }
}

#[test]
fn cobar_and_bar_sides_agree() {
    let (_, co) = run_json(&["ext", "xy_dual_d4.json", "--imax", "3", "--jmax", "4"]);
    let (_, bar) = run_json(&["ext", "xy_dual_d4.json", "--imax", "3", "--jmax", "4", "--side", "algebra"]);
    assert_eq!(co["results"]["entries"], bar["results"]["entries"]);
}

#[test]
fn reports_are_deterministic_and_thread_independent() {
    let dir = std::env::temp_dir().join(format!("cobarlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut reports = Vec::new();
    for (k, threads) in ["1", "1", "4"].iter().enumerate() {
        let out = dir.join(format!("r{k}.json"));
        let status = run(&["ext", "sym2_d4.json", "--imax", "3", "--threads", threads, "--out", out.to_str().unwrap()]);
        assert!(status.status.success());
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        reports.push(strip_time(v));
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
    assert_eq!(reports[0]["schema"], "cobarlab/1");
    assert_eq!(reports[0]["input_digest"].as_str().unwrap().len(), 64);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn environment_thread_fallback() {
    let out = Command::new(env!("CARGO_BIN_EXE_cobarlab"))
        .current_dir(examples())
        .env("COBARLAB_THREADS", "2")
        .args(["ext", "c3.json", "--imax", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_cobarlab"))
        .current_dir(examples())
        .env("COBARLAB_THREADS", "many")
        .args(["ext", "c3.json"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = std::env::temp_dir().join(format!("cobarlab-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let out = run(&["validate", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema error"));
    std::fs::remove_dir_all(&dir).ok();

    let out = run(&["ext", "sym2_d4.json", "--jmax", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncation bound 4"));

    let out = run(&["compare", "sym2_d4.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("flatten"));

    assert_eq!(run(&["validate", "missing.json"]).status.code(), Some(2));
}

#[test]
fn validation_of_bundled_presentations() {
    for file in ["c2.json", "c3.json", "ten2_d2.json", "square_zero.json", "sym2_d4.json", "sym2_d3_flat.json", "xy_dual_d4.json"] {
        let (code, report) = run_json(&["validate", file]);
        assert_eq!(code, 0, "{file}");
        assert_eq!(report["verdict"], Value::Bool(true));
    }
    let (code, report) = run_json(&["validate", "c2_two_dim_comodule.json"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["counital"], Value::Bool(true));
}

#[test]
fn compare_pairs_over_flattened_symmetric() {
    for (l, m) in [
        ("trivial_comodule.json", "trivial_comodule.json"),
        ("trivial_comodule.json", "regular_comodule.json"),
        ("regular_comodule.json", "trivial_comodule.json"),
    ] {
        let (code, report) = run_json(&["compare", "sym2_d3_flat.json", l, m, "--n", "2"]);
        assert_eq!(code, 0, "{l} {m}");
        assert_eq!(report["results"]["verdict"], Value::Bool(true));
    }
}

#[test]
fn resolve_with_random_retraction_records_seed() {
    let (code, report) = run_json(&["resolve", "c3.json", "--length", "4", "--retraction", "random", "--seed", "11"]);
    assert_eq!(code, 0);
    assert_eq!(report["seed"], 11);
    assert_eq!(report["results"]["cogenerator_dims"], serde_json::json!([1, 1, 1, 1, 1]));
}

#[test]
fn demos() {
    let (code, report) = run_json(&["demo", "nonrational"]);
    assert_eq!(code, 0);
    let r = &report["results"];
    assert_eq!(r["is_rational"], Value::Bool(false));
    assert_eq!(r["module_axioms_verified"], Value::Bool(true));
    assert_eq!(r["max_rational_submodule"], "span(e1)");
    assert_eq!(report["seed"], 0);

    let (code, report) = run_json(&["demo", "contra", "--seed", "3"]);
    assert_eq!(code, 0);
    for k in ["module_trivial", "contra_nontrivial", "splitting_not_contra_linear"] {
        assert_eq!(report["results"][k], Value::Bool(true), "{k}");
    }
    assert_eq!(report["seed"], 3);
}
