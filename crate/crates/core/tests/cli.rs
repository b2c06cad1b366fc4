use std::path::Path;
use std::process::{Command, Output};

fn ssbrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssbrp")).args(args).output().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join("instance.json");
    let mut args = vec!["generate", "--out", arg(&path)];
    args.extend_from_slice(extra);
    let out = ssbrp(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn generate_solve_validate() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), &["--family", "wien", "--stations", "12", "--seed", "4"]);
    let sol = dir.path().join("sol.json");
    let out = ssbrp(&["solve", "--instance", arg(&inst), "--out", arg(&sol), "--max-iter", "20", "--seed", "42"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.contains("iteration of best") && summary.contains("elapsed"));

    let out = ssbrp(&["validate", "--instance", arg(&inst), "--solution", arg(&sol)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let again = dir.path().join("sol2.json");
    ssbrp(&["solve", "--instance", arg(&inst), "--out", arg(&again), "--max-iter", "20", "--seed", "42"]);
    assert_eq!(std::fs::read(&sol).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn validate_reports_overload_and_stale_objective() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), &["--family", "palma", "--seed", "2"]);
    let sol = dir.path().join("sol.json");
    let out = ssbrp(&["solve", "--instance", arg(&inst), "--out", arg(&sol), "--max-iter", "10"]);
    assert!(out.status.success());
    let mut doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&sol).unwrap()).unwrap();

    let mut stale = doc.clone();
    stale["objective"]["total"] = serde_json::json!(0.123);
    std::fs::write(&sol, stale.to_string()).unwrap();
    let out = ssbrp(&["validate", "--instance", arg(&inst), "--solution", arg(&sol)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("mismatch"));

    let route = doc["routes"].as_array_mut().unwrap().iter_mut().find(|r| r["moves"].as_array().unwrap().len() > 2).unwrap();
    route["moves"][1]["operative"] = serde_json::json!(500);
    std::fs::write(&sol, doc.to_string()).unwrap();
    let out = ssbrp(&["validate", "--instance", arg(&inst), "--solution", arg(&sol)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("capacity exceeded"));
}

#[test]
fn gamma_t_zero_drops_time() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), &["--family", "wien", "--stations", "10"]);
    let sol = dir.path().join("sol.json");
    let out = ssbrp(&["solve", "--instance", arg(&inst), "--out", arg(&sol), "--max-iter", "10", "--gamma-t", "0"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&sol).unwrap()).unwrap();
    let o = &doc["objective"];
    let sum = o["imbalance"].as_f64().unwrap() + o["damaged"].as_f64().unwrap();
    assert!((o["total"].as_f64().unwrap() - sum).abs() < 1e-12);
}

#[test]
fn generate_flags() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), &["--family", "wien", "--stations", "60", "--damaged-fraction", "0.1", "--seed", "7"]);
    let first = std::fs::read_to_string(&a).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["stations"].as_array().unwrap().len(), 60);
    assert_eq!(doc["depot"]["operative"], 0);
    let b = generate(dir.path(), &["--family", "wien", "--stations", "60", "--damaged-fraction", "0.1", "--seed", "7"]);
    assert_eq!(first, std::fs::read_to_string(&b).unwrap());

    let p = generate(dir.path(), &["--family", "palma"]);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    assert_eq!(doc["stations"].as_array().unwrap().len(), 28);

    assert_eq!(ssbrp(&["generate", "--damaged-fraction", "2"]).status.code(), Some(2));
    assert_eq!(ssbrp(&["generate", "--family", "berlin"]).status.code(), Some(2));
    assert_eq!(ssbrp(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_single_cell_matches_solve() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), &["--family", "wien", "--stations", "10", "--seed", "5"]);
    let csv = dir.path().join("sweep.csv");
    let json = dir.path().join("sweep.json");
    let spec = format!("wien={}", arg(&inst));
    let out = ssbrp(&[
        "sweep", "--instance", &spec, "--theta", "0.5", "--mu", "1.5", "--seed", "3", "--max-iter", "15",
        "--out", arg(&csv), "--json", arg(&json),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,theta,mu,of_mean,of_best,iter_mean,cpu_mean_s,n_instances,n_seeds,of_std,n_failed"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(lines.next().is_none());

    let sol = dir.path().join("sol.json");
    ssbrp(&["solve", "--instance", arg(&inst), "--out", arg(&sol), "--theta", "0.5", "--mu", "1.5", "--seed", "3", "--max-iter", "15"]);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&sol).unwrap()).unwrap();
    assert_eq!(row[3].parse::<f64>().unwrap(), doc["objective"]["total"].as_f64().unwrap());

    let rows: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
}

#[test]
fn sweep_default_grid_shape() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = ssbrp(&["sweep", "--max-iter", "3", "--workers", "4", "--out", arg(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let families: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(families.iter().filter(|f| **f == "palma").count(), 9);
    assert_eq!(families.iter().filter(|f| **f == "wien").count(), 9);
}
