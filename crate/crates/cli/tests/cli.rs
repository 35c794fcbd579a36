use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use hardy_lab::subspace::{orthonormalize, projector_distance, Subspace};
use hardy_lab::{Field, TruncatedSeries};

fn hardy_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy-lab"))
        .args(args)
        .env("HARDY_LAB_THREADS", "2")
        .output()
        .expect("spawn hardy-lab")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    let _ = std::fs::remove_file(&path);
    path
}

fn real_span(order: usize, vs: &[&[f64]]) -> Subspace {
    let series: Vec<_> = vs.iter().map(|v| TruncatedSeries::real(v).resize(order)).collect();
    orthonormalize(order, Field::Real, &series, 1e-10).unwrap()
}

#[test]
fn lemma1_run_writes_one_record_per_trial() {
    let out = hardy_lab(&["verify", "--suite", "lemma1", "--order", "64", "--trials", "1000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1000);
    for (t, line) in text.lines().enumerate() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["suite"], "lemma1");
        assert_eq!(v["trial"], t);
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn unknown_names_exit_2() {
    assert_eq!(hardy_lab(&["verify", "--suite", "nosuch"]).status.code(), Some(2));
    assert_eq!(hardy_lab(&["gen", "--generator", "nosuch"]).status.code(), Some(2));
    assert_eq!(hardy_lab(&["verify", "--suite", "lemma1", "--rank-tol", "0"]).status.code(), Some(2));
    assert_eq!(hardy_lab(&["decompose", "--input", "/nonexistent/m.json"]).status.code(), Some(2));
}

#[test]
fn bad_thread_cap_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_hardy-lab"))
        .args(["verify", "--suite", "lemma1", "--trials", "1"])
        .env("HARDY_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("HARDY_LAB_THREADS"));
}

#[test]
fn reports_are_reproducible_and_appended() {
    let path = scratch("repro.jsonl");
    let args = ["verify", "--suite", "lemma3,hitt", "--order", "64", "--trials", "4", "--seed", "11"];
    let first = hardy_lab(&args);
    assert_eq!(first.status.code(), Some(0));
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    assert_eq!(hardy_lab(&with_out).status.code(), Some(0));
    assert_eq!(hardy_lab(&with_out).status.code(), Some(0));
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, [first.stdout.clone(), first.stdout].concat());
}

#[test]
fn csv_flattens_residuals() {
    let path = scratch("report.csv");
    let p = path.to_str().unwrap();
    let args = ["verify", "--suite", "lemma1", "--trials", "2", "--format", "csv", "--out", p];
    assert_eq!(hardy_lab(&args).status.code(), Some(0));
    assert_eq!(hardy_lab(&args).status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    // one header, then one row per residual on each run
    assert_eq!(lines[0], "suite,trial,pass,statement,residual,value,tolerance");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("lemma1,0,true,"));
    assert!(lines[1].ends_with(",relative_error,0.0,1e-12"));
}

#[test]
fn gen_model_space_z2() {
    let out = hardy_lab(&["gen", "--generator", "model_space", "--theta", "z2", "--order", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["generator"], "model_space");
    let m: Subspace = serde_json::from_value(v["subspace"].clone()).unwrap();
    assert!(projector_distance(&m, &real_span(64, &[&[1.0], &[0.0, 1.0]])).unwrap() <= 1e-15);
}

#[test]
fn gen_toeplitz_zbar() {
    let out = hardy_lab(&["gen", "--generator", "toeplitz", "--symbol", "zbar", "--order", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let m: Subspace = serde_json::from_value(stdout_json(&out)["subspace"].clone()).unwrap();
    assert!(projector_distance(&m, &real_span(64, &[&[1.0]])).unwrap() <= 1e-15);
}

#[test]
fn gen_is_bit_identical_across_runs() {
    let args = ["gen", "--generator", "defect_instance", "--seed", "42", "--n", "2"];
    let a = hardy_lab(&args);
    let b = hardy_lab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["params"]["n"], 2);
}

#[test]
fn defect_instance_round_trips_through_decompose() {
    let path = scratch("defect42.json");
    let p = path.to_str().unwrap();
    let gen = hardy_lab(&["gen", "--generator", "defect_instance", "--seed", "42", "--n", "2", "--out", p]);
    assert_eq!(gen.status.code(), Some(0));
    let out = hardy_lab(&["decompose", "--input", p]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "defect");
    assert!(v["defect"].as_u64().unwrap() <= 2);
    assert_eq!(v["certificate"]["pass"], true);
}

#[test]
fn inner_multiplier_round_trips_through_decompose() {
    let path = scratch("inner3.json");
    let p = path.to_str().unwrap();
    assert_eq!(hardy_lab(&["gen", "--generator", "inner_multiplier", "--seed", "3", "--out", p]).status.code(), Some(0));
    let v = stdout_json(&hardy_lab(&["decompose", "--input", p]));
    assert_eq!(v["kind"], "hitt");
    for (name, value) in v["certificate"]["residuals"].as_object().unwrap() {
        if name != "n_dim" {
            assert!(value.as_f64().unwrap() <= 1e-6, "{name} = {value}");
        }
    }
}

#[test]
fn decompose_span_z_and_model_space() {
    let path = scratch("span_z.json");
    std::fs::write(&path, serde_json::to_string(&real_span(16, &[&[0.0, 1.0]])).unwrap()).unwrap();
    let v = stdout_json(&hardy_lab(&["decompose", "--input", path.to_str().unwrap()]));
    assert_eq!(v["case"], "ii");
    assert_eq!(v["defect"], 1);
    let e: Subspace = serde_json::from_value(v["defect_basis"].clone()).unwrap();
    assert!(projector_distance(&e, &real_span(16, &[&[1.0]])).unwrap() <= 1e-12);

    let k = real_span(32, &[&[1.0], &[0.0, 1.0], &[0.0, 0.0, 1.0]]);
    std::fs::write(&path, serde_json::to_string(&k).unwrap()).unwrap();
    let v = stdout_json(&hardy_lab(&["decompose", "--input", path.to_str().unwrap()]));
    assert_eq!(v["kind"], "hitt");
    let g: TruncatedSeries = serde_json::from_value(v["g"].clone()).unwrap();
    assert!(g.sub(&TruncatedSeries::monomial(0, 32)).unwrap().norm() <= 1e-12);
    let n: Subspace = serde_json::from_value(v["n"].clone()).unwrap();
    assert!(projector_distance(&n, &k).unwrap() <= 1e-12);
}

#[test]
fn decompose_zero_subspace_exits_2() {
    let path = scratch("zero.json");
    std::fs::write(&path, r#"{"field":"real","order":8,"basis":[]}"#).unwrap();
    let out = hardy_lab(&["decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero subspace"));
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Top-level keys of `doc` must be exactly the schema's properties, with
/// every required key present.
fn assert_keys_match(schema: &Value, doc: &Value) {
    let obj = doc.as_object().unwrap();
    for key in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(key.as_str().unwrap()), "missing {key}");
    }
    if let Some(props) = schema["properties"].as_object() {
        if schema["additionalProperties"] == false {
            for key in obj.keys() {
                assert!(props.contains_key(key), "undocumented key {key}");
            }
        }
    }
}

#[test]
fn documents_follow_schemas() {
    let path = scratch("schema_inst.json");
    let p = path.to_str().unwrap();
    assert_eq!(hardy_lab(&["gen", "--generator", "inner_multiplier", "--seed", "3", "--out", p]).status.code(), Some(0));
    let inst: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_keys_match(&schema("instance.schema.json"), &inst);
    assert_keys_match(&schema("subspace.schema.json"), &inst["subspace"]);
    assert_keys_match(&schema("certificate.schema.json"), &inst["certificates"][0]);
    assert_keys_match(&schema("blaschke.schema.json"), &inst["params"]["theta"]);

    let report = stdout_json(&hardy_lab(&["decompose", "--input", p]));
    assert_keys_match(&schema("decompose_report.schema.json"), &report);
    assert_keys_match(&schema("series.schema.json"), &report["g"]);

    let toeplitz = stdout_json(&hardy_lab(&["gen", "--generator", "toeplitz", "--symbol", "zbar", "--order", "16"]));
    assert_keys_match(&schema("symbol.schema.json"), &toeplitz["params"]["symbol"]);

    let out = hardy_lab(&["verify", "--suite", "defect", "--trials", "1", "--order", "64"]);
    let record: Value = serde_json::from_str(String::from_utf8_lossy(&out.stdout).lines().next().unwrap()).unwrap();
    let s = schema("record.schema.json");
    assert_keys_match(&s, &record);
    assert_keys_match(&schema("certificate.schema.json"), &record);
    let suites: Vec<_> = s["properties"]["suite"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_owned()).collect();
    let names: Vec<_> = hardy_lab_cli::config::Suite::EACH.iter().map(|s| s.name().to_owned()).collect();
    assert_eq!(suites, names);
}
