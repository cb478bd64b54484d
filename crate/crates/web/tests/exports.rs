use motsteen_web::{block_json, chart_json, evaluate_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn chart_lists_nonzero_bidegrees() {
    let cells = parse(chart_json("alg-closed", 2, 8, 1));
    let cells = cells.as_array().unwrap();
    assert!(cells.iter().any(|c| c["d"] == 0 && c["w"] == 0 && c["dim"] == 1));
    assert!(cells.iter().all(|c| c["dim"].as_u64().unwrap() > 0));
}

#[test]
fn evaluation_normalizes_and_applies_beta() {
    let v = parse(evaluate_json("alg-closed", 2, true, "tau0*tau0 + tau*xi1"));
    assert_eq!(v["normal_form"], "0");
    assert!(v["bidegree"].is_null());
    let v = parse(evaluate_json("alg-closed", 2, true, "tau0*tau1 + tau*xi1^2"));
    assert_eq!(v["bidegree"], serde_json::json!([4, 1]));
    let v = parse(evaluate_json("real", 2, false, "tau"));
    assert_eq!(v["beta"], "rho");
    assert!(evaluate_json("alg-closed", 2, false, "tau0").is_err());
    assert!(evaluate_json("real", 3, false, "tau").is_err());
}

#[test]
fn nonzero_blocks_are_acyclic() {
    let v = parse(block_json(3, &[1, 2]));
    assert!(v["homology"].as_array().unwrap().iter().all(|h| h == 0));
    let zero = parse(block_json(2, &[]));
    assert_eq!(zero["homology"], serde_json::json!([1]));
    assert!(block_json(2, &[9]).is_err());
}
