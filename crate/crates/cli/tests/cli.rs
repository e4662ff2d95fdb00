use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn rabi3(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rabi3"))
        .args(args)
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn ok(dir: &Path, args: &[&str]) {
    let (code, err) = rabi3(dir, args);
    assert_eq!(code, 0, "{args:?}: {err}");
}

fn read_csv(path: PathBuf) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'), "{} has CR line endings", path.display());
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

/// Minimal structural check against the shipped schema: types, required
/// keys, enums, array items and nested objects.
fn validate(schema: &Value, value: &Value, path: &str) {
    if let Some(t) = schema.get("type").and_then(Value::as_str) {
        let matches = match t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "number" => value.is_number(),
            "integer" => value.is_u64() || value.is_i64(),
            other => panic!("schema type {other} not handled"),
        };
        assert!(matches, "{path}: expected {t}, got {value}");
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        assert!(options.contains(value), "{path}: {value} not in {options:?}");
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for key in required {
            let key = key.as_str().unwrap();
            assert!(value.get(key).is_some(), "{path}: missing `{key}`");
        }
    }
    if let (Some(props), Some(obj)) = (schema.get("properties").and_then(Value::as_object), value.as_object()) {
        for (k, sub) in props {
            if let Some(v) = obj.get(k) {
                validate(sub, v, &format!("{path}.{k}"));
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate(items, v, &format!("{path}[{i}]"));
        }
    }
}

fn schema() -> Value {
    read_json(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/fit_report.schema.json"))
}

fn dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn phase_diagram_labels() {
    let tmp = tempfile::tempdir().unwrap();
    ok(tmp.path(), &["phase-diagram", "--out", "pd", "--gamma", "0.5,0.5556,0.75,1,1.25,1.5,1.75,2", "--R", "0:2:0.1", "--beta", "1.2"]);
    let (header, rows) = read_csv(tmp.path().join("pd/phase_diagram.csv"));
    assert_eq!(header, ["gamma", "R", "label", "y1", "y2", "E0"]);
    assert_eq!(rows.len(), 8 * 21);
    for row in &rows {
        let (gamma, r) = (f(&row[0]), f(&row[1]));
        if r < gamma.sqrt().min(1.0) {
            assert_eq!(row[2], "Normal", "{row:?}");
        }
    }
    let find = |g: f64, r: f64| rows.iter().find(|row| f(&row[0]) == g && (f(&row[1]) - r).abs() < 1e-12).unwrap();
    assert_eq!(find(0.5556, 1.0)[2], "SuperradiantY2");
    assert_eq!(find(1.0, 1.5)[2], "BoundaryU1");
    assert_eq!(find(2.0, 1.5)[2], "SuperradiantY1");
}

#[test]
fn mean_photon_rows() {
    let tmp = tempfile::tempdir().unwrap();
    ok(tmp.path(), &["mean-photon", "--out", "a", "--alpha", "0.8", "--beta", "1.2", "--R", "1"]);
    let (header, rows) = read_csv(tmp.path().join("a/mean_photon.csv"));
    assert_eq!(header, ["gamma", "R", "n1_over_eta", "n2_over_eta", "flag"]);
    assert_eq!(f(&rows[0][2]), 0.0);
    assert!((f(&rows[0][3]) - 0.38889).abs() < 1e-5);

    ok(tmp.path(), &["mean-photon", "--out", "b", "--alpha", "1.2", "--beta", "0.8", "--R", "1", "--mode", "1"]);
    let (header, rows) = read_csv(tmp.path().join("b/mean_photon.csv"));
    assert_eq!(header, ["gamma", "R", "n1_over_eta", "flag"]);
    assert_eq!(f(&rows[0][2]), 0.0);

    ok(tmp.path(), &["mean-photon", "--out", "c", "--gamma", "0.5:1.5:0.5", "--beta", "1.2", "--R", "1.5"]);
    let (_, rows) = read_csv(tmp.path().join("c/mean_photon.csv"));
    let boundary = rows.iter().find(|r| r[0] == "1.0").unwrap();
    assert_eq!(boundary[2..], ["", "", "boundary_u1"]);
    assert!(rows.iter().filter(|r| r[0] != "1.0").all(|r| r[4] == "ok"));

    let (code, _) = rabi3(tmp.path(), &["mean-photon", "--out", "d", "--alpha", "0.8", "--delta", "0.1"]);
    assert_eq!(code, 2);
}

#[test]
fn universal_function_rows() {
    let tmp = tempfile::tempdir().unwrap();
    ok(tmp.path(), &["universal-f", "--out", "u1", "--branch", "mode1", "--rprime", "-10,0,10"]);
    let (header, rows) = read_csv(tmp.path().join("u1/universal_f.csv"));
    assert_eq!(header, ["rprime", "f"]);
    assert!(f(&rows[1][1]) > 0.0);
    assert!((f(&rows[2][1]) - 10.0).abs() < 1.0);
    // mode 2 at α = 0.8: deep minimum at ½⟨z²⟩ = r′/α
    ok(tmp.path(), &["universal-f", "--out", "u2", "--alpha", "0.8", "--beta", "1.2", "--rprime", "10"]);
    let (_, rows) = read_csv(tmp.path().join("u2/universal_f.csv"));
    assert!((f(&rows[0][1]) - 12.5).abs() < 1.25);
    let manifest = read_json(tmp.path().join("u2/manifest.json"));
    assert_eq!(manifest["config"]["branch"], "mode2");
    let (code, _) = rabi3(tmp.path(), &["universal-f", "--out", "u3", "--rprime", "10", "--trunc-1d", "8"]);
    assert_eq!(code, 3);
}

#[test]
fn solve_writes_report_and_state() {
    let tmp = tempfile::tempdir().unwrap();
    ok(tmp.path(), &["solve", "--out", "s", "--R", "0.9", "--eta", "20", "--dump-state", "true"]);
    let report = read_json(tmp.path().join("s/solve.json"));
    assert_eq!(report["converged"], true);
    let dim = report["dimension"].as_u64().unwrap() as usize;
    let (header, rows) = read_csv(tmp.path().join("s/state.csv"));
    assert_eq!(header, ["index", "level", "n1", "n2", "amplitude"]);
    assert_eq!(rows.len(), dim);
    let norm: f64 = rows.iter().map(|r| f(&r[4]).powi(2)).sum();
    assert!((norm - 1.0).abs() < 1e-12);

    let (code, err) = rabi3(tmp.path(), &["solve", "--out", "x", "--R", "0.9", "--eta", "20", "--max-krylov", "4", "--max-restarts", "0"]);
    assert_eq!(code, 3, "{err}");
    assert_eq!(read_json(tmp.path().join("x/solve.json"))["converged"], false);
}

#[test]
fn exit_codes_for_configuration_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = tmp.path().join("bad.conf");
    std::fs::write(&conf, "alpah = 0.8\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["solve", "--config", "bad.conf"],
        vec!["solve", "--eta", "-1"],
        vec!["solve", "--alpha", "abc"],
        vec!["phase-diagram", "--R", "0:1:0"],
        vec!["scaling", "--eta", "10,20,40", "--synthetic", "true"],
        vec!["scaling", "--R", "0.7", "--r", "0.1"],
        vec!["scaling", "--workers", "0"],
        vec!["solve", "--no-such-flag", "1"],
    ];
    for args in cases {
        let mut full = args.clone();
        full.extend(["--out", "o"]);
        let (code, err) = rabi3(tmp.path(), &full);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn config_file_is_overridden_by_flags_and_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("run.conf"), "# mode-2 grid\nbeta = 0.9\nR = 0.5,1\ngamma = 0.5\n").unwrap();
    ok(tmp.path(), &["phase-diagram", "--config", "run.conf", "--beta", "1.2", "--out", "a"]);
    let m = read_json(tmp.path().join("a/manifest.json"));
    assert_eq!(m["command"], "phase-diagram");
    assert_eq!(m["config"]["beta"], "1.2");
    assert_eq!(m["config"]["R"], "0.5,1");
    assert_eq!(m["config_file_values"]["beta"], "0.9");
    assert_eq!(m["flag_values"]["beta"], "1.2");
    assert_eq!(m["timestamp"], "2023-11-14T22:13:20Z");
    assert_eq!(m["input_hashes"].as_object().unwrap().len(), 1);

    // resolved.conf reproduces the run
    std::fs::copy(tmp.path().join("a/resolved.conf"), tmp.path().join("again.conf")).unwrap();
    ok(tmp.path(), &["phase-diagram", "--config", "again.conf", "--out", "b"]);
    assert_eq!(
        std::fs::read(tmp.path().join("a/phase_diagram.csv")).unwrap(),
        std::fs::read(tmp.path().join("b/phase_diagram.csv")).unwrap()
    );
}

#[test]
fn synthetic_scaling_round_trip_and_determinism() {
    let runs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let args = [
        "scaling", "--synthetic", "true", "--eta", "100,200,400,800,1600,3200", "--r=-0.02:0.02:0.002", "--out", "o",
        "--workers", "2",
    ];
    for dir in &runs {
        ok(dir.path(), &args);
    }
    let out = runs[0].path().join("o");
    let report = read_json(out.join("scaling_fit.json"));
    validate(&schema(), &report, "report");
    assert_eq!(report["source"], "synthetic");
    let rc = report["rc_theory"].as_f64().unwrap();
    assert!((report["rc_est"].as_f64().unwrap() - rc).abs() < 1e-3 * rc);
    assert!((report["slope"].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-3);
    assert!((report["nu"].as_f64().unwrap() - 1.5).abs() < 1e-3);
    assert_eq!(dir_files(&out), dir_files(&runs[1].path().join("o")));

    let (header, rows) = read_csv(out.join("scaling_collapsed.csv"));
    assert_eq!(header, ["eta", "R", "x", "y"]);
    assert_eq!(rows.len(), 6 * 21);
}

#[test]
fn parallel_sweep_matches_serial_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["scaling", "--eta", "100,200,400,800", "--r=-0.03:0.03:0.01", "--fit-window", "all"];
    for (out, workers) in [("w1", "1"), ("w3", "3")] {
        let mut full = args.to_vec();
        full.extend(["--out", out, "--workers", workers]);
        ok(tmp.path(), &full);
    }
    for name in ["scaling_raw.csv", "scaling_collapsed.csv"] {
        assert_eq!(
            std::fs::read(tmp.path().join("w1").join(name)).unwrap(),
            std::fs::read(tmp.path().join("w3").join(name)).unwrap(),
            "{name}"
        );
    }
    let mut a = read_json(tmp.path().join("w1/scaling_fit.json"));
    let mut b = read_json(tmp.path().join("w3/scaling_fit.json"));
    validate(&schema(), &a, "report");
    a.as_object_mut().unwrap().remove("manifest");
    b.as_object_mut().unwrap().remove("manifest");
    assert_eq!(a, b);
    let (header, rows) = read_csv(tmp.path().join("w1/scaling_raw.csv"));
    assert_eq!(header[..4], ["eta", "R", "r", "n_over_eta"]);
    assert_eq!(rows.len(), 4 * 7);
    assert!(rows.iter().all(|r| r[13] == "true"));
}

#[test]
fn sweep_non_convergence_lists_every_failed_point() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, err) = rabi3(
        tmp.path(),
        &["scaling", "--out", "o", "--eta", "10,20,40,80", "--r=-0.1,0.1", "--basis", "fock", "--max-dimension", "300", "--workers", "1"],
    );
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("of 8 points did not converge"), "{err}");
    assert!(err.contains("eta=80"), "{err}");
}
