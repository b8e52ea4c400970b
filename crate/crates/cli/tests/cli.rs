use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn suslov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suslov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&raw).expect("schema compiles")
}

fn assert_valid(name: &str, doc: &Value) {
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn json_stdout(args: &[&str]) -> Value {
    let out = suslov(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const D5: [&str; 8] = ["--b1", "4", "--b2", "1", "--k1", "4.4", "--k2", "1.1"];

fn with<'a>(cmd: &'a str, base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(base);
    v.extend_from_slice(extra);
    v
}

#[test]
fn classify_and_topology_for_d5() {
    let c = json_stdout(&with("classify", &D5, &[]));
    assert_eq!(c["region"], "D5");
    assert_valid("classify", &c);

    let t = json_stdout(&with("topology", &D5, &[]));
    assert_eq!(t["components"], 4);
    assert_eq!(t["genus_per_component"], serde_json::json!([0, 0, 0, 0]));
    assert_eq!(t["agree"], true);
    assert_valid("topology", &t);
}

#[test]
fn critical_points_output() {
    let v = json_stdout(&with("critical-points", &D5, &[]));
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 8);
    assert!(list.iter().all(|p| p["kind"] == "Center" && p["index"] == 1));
    assert_valid("critical_points", &v);
}

#[test]
fn equal_b_classify_has_null_delta() {
    let v = json_stdout(&["classify", "--b1", "1", "--b2", "1", "--k1", "1.5", "--k2", "1.5"]);
    assert_eq!(v["delta"], Value::Null);
    assert_valid("classify", &v);
}

#[test]
fn exit_codes() {
    let singular = suslov(&["topology", "--b1", "4", "--b2", "1", "--k1", "4", "--k2", "1.1"]);
    assert_eq!(singular.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&singular.stderr);
    assert!(msg.contains("not a smooth 2-manifold"), "{msg}");
    assert!(msg.contains("k1 != b1"), "{msg}");

    assert_eq!(suslov(&["classify", "--b1", "4"]).status.code(), Some(2));
    assert_eq!(suslov(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        suslov(&["classify", "--b1", "x", "--b2", "1", "--k1", "1", "--k2", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        suslov(&with("project", &D5, &["--format", "json"])).status.code(),
        Some(2)
    );
    assert_eq!(suslov(&["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_files_and_drift_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = out.to_str().unwrap();
    let r = suslov(&[
        "simulate", "--b1", "4", "--b2", "1", "--k1", "1", "--k2", "0.5", "--t-end", "1", "--seed", "9",
        "--out", o,
    ]);
    assert_eq!(r.status.code(), Some(0));
    let drift: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("traj.csv.drift.json")).unwrap())
            .unwrap();
    assert_valid("drift", &drift);
    assert!(drift["max_drift"].as_f64().unwrap() < 1e-12);

    let mut rd = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rd.headers().unwrap().len(), 9);
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 1001);
    let last_t: f64 = rows.last().unwrap()[0].parse().unwrap();
    assert_eq!(last_t, 1.0);
}

#[test]
fn simulate_from_given_state() {
    let r = suslov(&[
        "simulate", "--b1", "1", "--b2", "1", "--t-end", "0.002", "--init", "0.5,-0.5,0.6,0,0.8",
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8(r.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(1).unwrap().starts_with("0.0000000000000000e0,5.0000000000000000e-1,"));
}

fn sweep_to(dir: &Path, range: &str, grid: &str) -> PathBuf {
    let out = dir.join("atlas.json");
    let r = suslov(&[
        "sweep", "--b1", "4", "--b2", "1", "--sweep", range, "--grid-n", grid, "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    out
}

#[test]
fn sweep_atlas_validates_and_agrees_off_the_boundaries() {
    let dir = tempfile::tempdir().unwrap();
    let out = sweep_to(dir.path(), "0:8:0:2:64", "128");
    let atlas: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_valid("atlas", &atlas);
    let svg = std::fs::read_to_string(dir.path().join("atlas.json.svg")).unwrap();
    assert!(svg.contains("<svg"));

    let cells = atlas["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 64 * 64);
    let h1 = 8.0 / 64.0;
    let h2 = 2.0 / 64.0;
    let mut compared = 0;
    for c in cells {
        let (k1, k2) = (c["k1"].as_f64().unwrap(), c["k2"].as_f64().unwrap());
        // a cell touches a boundary when one of the curves passes through it
        let (r1, r2) = (k1 / 4.0, k2);
        let touches = (k1 - 4.0).abs() <= h1
            || (k2 - 1.0).abs() <= h2
            || (r1 + r2 - 1.0).abs() <= h1 / 4.0 + h2;
        if c["region"] == "Singular" || touches {
            continue;
        }
        assert_eq!(c["agree"], true, "{c}");
        compared += 1;
    }
    assert!(compared > 3500, "{compared}");
}

#[test]
fn project_svg_has_markers_for_d5() {
    let out = suslov(&with("project", &D5, &["--orbits", "2"]));
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches("<circle").count(), 8);
    assert!(svg.contains("stroke-dasharray"));
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let runs: [Vec<&str>; 3] = [
        with("project", &D5, &["--seed", "5"]),
        vec![
            "simulate", "--b1", "4", "--b2", "1", "--k1", "3.4", "--k2", "1.2", "--t-end", "2", "--seed", "5",
        ],
        vec!["sweep", "--b1", "4", "--b2", "1", "--sweep", "0:8:0:2:8", "--grid-n", "64"],
    ];
    for args in &runs {
        let a = suslov(args);
        let b = suslov(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}

#[test]
fn schemas_reject_malformed_documents() {
    let bad_region = serde_json::json!({"region": "D9", "subregion": null, "singular_cause": null, "delta": 1.0});
    assert!(!schema("classify").is_valid(&bad_region));
    let missing = serde_json::json!({"components": 1, "genus_per_component": [5], "euler": -8, "euler_ph": -8});
    assert!(!schema("topology").is_valid(&missing));
    let extra = serde_json::json!([{"state": {"m1": 0, "m2": 0, "gamma1": 0, "gamma2": 0, "gamma3": 1},
        "kind": "Saddle", "index": -1, "family": "Plus", "eigenvalues": [[1, 0], [-1, 0]], "note": 1}]);
    assert!(!schema("critical_points").is_valid(&extra));
}
