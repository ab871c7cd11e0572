use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schwarz-pick"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn dataset(dir: &TempDir, pairs: &[(f64, f64)]) -> PathBuf {
    let points: Vec<String> = pairs
        .iter()
        .map(|(z, w)| format!(r#"{{"z":{{"re":{z},"im":0}},"w":{{"re":{w},"im":0}}}}"#))
        .collect();
    write(dir, "data.json", &format!(r#"{{"points":[{}]}}"#, points.join(",")))
}

fn poly(dir: &TempDir, coeffs: &[f64]) -> PathBuf {
    let c: Vec<String> = coeffs.iter().map(|a| format!(r#"{{"re":{a},"im":0}}"#)).collect();
    write(dir, "f.json", &format!(r#"{{"kind":"poly","coeffs":[{}]}}"#, c.join(",")))
}

#[test]
fn region_examples() {
    let dir = TempDir::new().unwrap();
    let o = run(&["region", "--data", dataset(&dir, &[(0.0, 0.0)]).to_str().unwrap(), "--z", "0.5,0"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(num(&v["center"]["re"]).abs() < 1e-12);
    assert!((num(&v["radius"]) - 0.5).abs() < 1e-12);

    let o = run(&["region", "--data", dataset(&dir, &[(0.0, 0.5)]).to_str().unwrap(), "--z", "0.5,0"]);
    let v = json(&o);
    assert!((num(&v["center"]["re"]) - 0.4).abs() < 1e-12);
    assert!((num(&v["radius"]) - 0.4).abs() < 1e-12);
}

#[test]
fn region_boundary_and_csv() {
    let dir = TempDir::new().unwrap();
    let data = dataset(&dir, &[(0.0, 0.5)]);
    let o = run(&["region", "--data", data.to_str().unwrap(), "--z", "0.5,0", "--emit-boundary", "8"]);
    let v = json(&o);
    let pts = v["boundary"].as_array().unwrap();
    assert_eq!(pts.len(), 8);
    for p in pts {
        let (x, y) = (num(&p["re"]) - 0.4, num(&p["im"]));
        assert!(((x * x + y * y).sqrt() - 0.4).abs() < 1e-12);
    }

    let o = run(&["--output", "csv", "region", "--data", data.to_str().unwrap(), "--z", "0.5,0"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "kind,index,re,im,radius,status");
}

#[test]
fn region_infeasible_exits_2() {
    let dir = TempDir::new().unwrap();
    let o = run(&["region", "--data", dataset(&dir, &[(0.0, 0.0), (0.5, 0.8)]).to_str().unwrap(), "--z", "0.3,0"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["status"], "infeasible");
}

#[test]
fn schur_of_z_squared() {
    let dir = TempDir::new().unwrap();
    let o = run(&["schur", "--function", poly(&dir, &[0.0, 0.0, 1.0]).to_str().unwrap(), "--length", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let moduli: Vec<f64> = v["moduli"].as_array().unwrap().iter().map(num).collect();
    assert_eq!(moduli.len(), 3);
    assert!(moduli[0] < 1e-12 && moduli[1] < 1e-12 && (moduli[2] - 1.0).abs() < 1e-10);
    assert_eq!(v["blaschke_degree"], 2);
}

#[test]
fn schur_of_zero_and_cross_check() {
    let dir = TempDir::new().unwrap();
    let o = run(&["schur", "--function", poly(&dir, &[0.0]).to_str().unwrap()]);
    let v = json(&o);
    assert!(v["moduli"].as_array().unwrap().iter().all(|m| num(m) == 0.0));

    let o = run(&["schur", "--function", poly(&dir, &[0.0, 0.5, 0.5]).to_str().unwrap(), "--length", "4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let cc = &v["taylor_cross_check"];
    assert_eq!(cc["closed_form"].as_array().unwrap().len(), 4);
    assert!(num(&cc["max_difference"]) < 1e-8);
    assert!((num(&v["gammas"][2]["re"]) - 2.0 / 3.0).abs() < 1e-10);
}

#[test]
fn schur_rejects_unbounded_polynomial() {
    let dir = TempDir::new().unwrap();
    let o = run(&["schur", "--function", poly(&dir, &[0.0, 1.5]).to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn bounds_t_chain_example() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        r#"{"kind":"schur","node":{"re":0,"im":0},"gamma":{"re":0.5,"im":0},
            "inner":{"kind":"schur","node":{"re":0,"im":0},"gamma":{"re":0.5,"im":0},
              "inner":{"kind":"const","value":{"re":0,"im":0}}}}"#,
    );
    let o = run(&["bounds", "--function", f.to_str().unwrap(), "--z", "0.5,0", "--z0", "0,0", "--depth", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let t: Vec<f64> = v["t_chain"].as_array().unwrap().iter().map(num).collect();
    assert!((t[0] - 0.8).abs() < 1e-12 && (t[1] - 0.75).abs() < 1e-12);
    let m = num(&v["realized_modulus"]);
    assert!(m <= t[1] + 1e-12);
    let r: Vec<f64> = v["r_chain"].as_array().unwrap().iter().map(num).collect();
    assert!((r[1] - (1.0 + 2.0 * 0.5 * 0.5 + 0.25) / 0.75).abs() < 1e-12);
    assert!(num(&v["realized_exp_distance"]) <= r[1] + 1e-12);

    let o = run(&["--output", "csv", "bounds", "--function", f.to_str().unwrap(), "--z", "0.5,0"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "index,t_bound,r_bound");
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn bounds_zero_gammas_give_powers() {
    let dir = TempDir::new().unwrap();
    let data = dataset(&dir, &[(0.0, 0.0), (0.2, 0.0), (-0.3, 0.0)]);
    let o = run(&["bounds", "--data", data.to_str().unwrap(), "--z", "0.5,0", "--depth", "1"]);
    assert_eq!(code(&o), 0);
    let t0 = num(&json(&o)["t_chain"][0]);
    assert!((t0 - 0.5).abs() < 1e-12);
}

#[test]
fn bounds_truncated_exits_3_with_partial_output() {
    let dir = TempDir::new().unwrap();
    let f = poly(&dir, &[0.0, 0.0, 1.0]);
    let o = run(&["bounds", "--function", f.to_str().unwrap(), "--z", "0.5,0", "--depth", "3"]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_eq!(v["truncated"], true);
    assert_eq!(v["t_chain"].as_array().unwrap().len(), 2);
}

#[test]
fn bounds_infeasible_data_exits_2() {
    let dir = TempDir::new().unwrap();
    let data = dataset(&dir, &[(0.0, 0.0), (0.5, 0.8)]);
    let o = run(&["bounds", "--data", data.to_str().unwrap(), "--z", "0.3,0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_passes_and_detects_zero_tolerance() {
    let o = run(&["verify", "--samples", "50"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["passed"], true);

    let o = run(&["verify", "--samples", "50", "--tol", "all=0"]);
    assert_eq!(code(&o), 4);
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--seed", "99", "--samples", "30"]);
    let b = run(&["verify", "--seed", "99", "--samples", "30", "--sequential"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let o = run(&["--output", "csv", "verify", "--samples", "10"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "property,tolerance,samples,max_violation,worst_sample,exceedances,errors,passed"
    );
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["verify", "--samples", "0"])), 1);
    assert_eq!(code(&run(&["verify", "--jet-order", "2"])), 1);
    assert_eq!(code(&run(&["verify", "--tol", "nope=1"])), 1);
    assert_eq!(code(&run(&["region", "--data", "/nonexistent.json", "--z", "0,0"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
