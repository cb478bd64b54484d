use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn motsteen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motsteen")).args(args).env_remove("MOTSTEEN_CACHE").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn row(table: &Value, d: i64, w: i64) -> &Value {
    table["rows"].as_array().unwrap().iter().find(|r| r["bidegree"] == serde_json::json!([d, w])).unwrap()
}

#[test]
fn dims_has_the_unit_and_xi1() {
    let t = json(&motsteen(&["dims", "--dmax", "4", "--wmax", "2", "--format", "json"]));
    assert_eq!(t["schema"], "motsteen.dims/1");
    assert_eq!(row(&t, 0, 0)["dim"], 1);
    assert_eq!(row(&t, 2, 1)["dim"], 1);
    for r in t["rows"].as_array().unwrap() {
        assert_eq!(r["homology"], r["expected"], "row {r}");
    }
}

#[test]
fn empty_range_is_an_empty_table() {
    let t = json(&motsteen(&["dims", "--dmin", "5", "--dmax", "4", "--format", "json"]));
    assert_eq!(t["rows"].as_array().unwrap().len(), 0);
    let tsv = motsteen(&["dims", "--dmin", "5", "--dmax", "4", "--format", "tsv"]);
    assert!(tsv.status.success());
    assert_eq!(String::from_utf8(tsv.stdout).unwrap().lines().count(), 1);
}

#[test]
fn verify_beta2_passes() {
    let v = json(&motsteen(&["verify", "beta2", "--dmax", "12", "--format", "json"]));
    assert_eq!(v["schema"], "motsteen.verify/1");
    assert_eq!(v["status"], "PASS");
}

#[test]
fn product_warning_fails_only_under_strict() {
    let loose = motsteen(&["verify", "products", "--dmax", "0", "--wmax", "0"]);
    assert!(loose.status.success());
    assert!(String::from_utf8_lossy(&loose.stdout).contains("overall: WARN"));
    let strict = motsteen(&["verify", "products", "--dmax", "0", "--wmax", "0", "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("counterexample"));
}

#[test]
fn corrupted_conjugation_fails() {
    let out = motsteen(&["verify", "chi", "--dmax", "12", "--corrupt-chi-tau2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tau2"));
}

#[test]
fn present_real_has_two_torsion_rho() {
    let p = json(&motsteen(&["present", "--scheme", "real", "--bound", "2", "--format", "json"]));
    assert_eq!(p["schema"], "motsteen.presentation/1");
    let rels = p["integral"]["relations"].as_array().unwrap();
    assert!(rels.iter().any(|r| r["lhs"] == "2*rho" && r["rhs"] == "0"));
    assert!(p["mz"].is_object());
}

#[test]
fn present_bound_zero_lists_coefficients_only() {
    let p = json(&motsteen(&["present", "--scheme", "z-half", "--bound", "0", "--format", "json"]));
    assert!(p.get("mz").is_none());
    assert!(p.get("dual_steenrod").is_none());
    assert!(!p["coefficients"]["generators"].as_array().unwrap().is_empty());
}

fn cached_dims(dir: &Path, via_env: bool) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_motsteen"));
    cmd.args(["dims", "--prime", "3", "--dmax", "30", "--wmax", "2", "--format", "json"]);
    if via_env {
        cmd.env("MOTSTEEN_CACHE", dir);
    } else {
        cmd.env_remove("MOTSTEEN_CACHE").arg("--cache").arg(dir);
    }
    cmd.output().unwrap()
}

#[test]
fn warm_cache_output_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cold = cached_dims(dir.path(), false);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = cached_dims(dir.path(), false);
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, motsteen(&["dims", "--prime", "3", "--dmax", "30", "--wmax", "2", "--format", "json"]).stdout);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = cached_dims(dir.path(), true);
    assert!(out.status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!entries.is_empty());
    let entry: Value = serde_json::from_slice(&std::fs::read(&entries[0]).unwrap()).unwrap();
    assert_eq!(entry["version"], "motsteen.cache/1");
}

#[test]
fn stale_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cold = cached_dims(dir.path(), false);
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let path = e.unwrap().path();
        let mut entry: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
        entry["version"] = "motsteen.cache/0".into();
        entry["payload"] = Value::Null;
        std::fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
    }
    assert_eq!(cached_dims(dir.path(), false).stdout, cold.stdout);
}

#[test]
fn invalid_configurations_exit_one() {
    for args in [
        &["dims", "--prime", "4"][..],
        &["dims", "--scheme", "real", "--prime", "3"],
        &["dims", "--scheme", "finite-field", "--prime", "3"],
        &["dims", "--scheme", "finite-field-9", "--prime", "3"],
        &["dims", "--wmax", "-1"],
        &["verify", "no-such-suite"],
    ] {
        let out = motsteen(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
    let out = motsteen(&["dims", "--prime", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn w_table_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, r#"{"2": 3}"#).unwrap();
    let out = motsteen(&["present", "--w-table", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(&path, r#"{"2": 16}"#).unwrap();
    assert!(motsteen(&["present", "--w-table", path.to_str().unwrap()]).status.success());
}
