use std::fs;

use oriented_competition::cli::{main_with_args, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK};
use oriented_competition::models::read_snapshot_csv;
use oriented_competition::{LatticeBox, ModelKind};

fn orcomp(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("orcomp").chain(args.iter().copied()))
}

#[test]
fn simulate_writes_manifest_snapshots_and_images() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let out_s = out.to_str().unwrap();
    assert_eq!(orcomp(&["simulate", "--model", "competition", "--t", "15", "--checkpoints", "5,15", "--render", "--out", out_s]), EXIT_OK);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["snapshot_files"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["box"]["max_x"], 77);
    let csv = fs::read(out.join("competition_t15.csv")).unwrap();
    assert!(csv.starts_with(b"x,y,state\n"));
    let st = read_snapshot_csv(&csv[..], ModelKind::Competition, LatticeBox::square(77).unwrap(), 15.0).unwrap();
    assert!(st.num_cells() > 2);
    assert!(out.join("competition_t5.ppm").exists());
}

#[test]
fn render_accepts_an_empty_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    fs::write(&csv, "x,y,state\n").unwrap();
    let ppm = dir.path().join("empty.ppm");
    let code = orcomp(&["render", "--snapshot", csv.to_str().unwrap(), "--model", "richardson", "--box", "3", "--out", ppm.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let bytes = fs::read(&ppm).unwrap();
    assert!(bytes.starts_with(b"P6\n4 4\n255\n"));
    assert_eq!(bytes.len(), "P6\n4 4\n255\n".len() + 48);
}

#[test]
fn verify_reports_json_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    assert_eq!(orcomp(&["verify", "dual", "--seeds", "2", "--samples", "200", "--t", "8", "--out", out.to_str().unwrap()]), EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["hard_failure"], false);
    assert_eq!(v["suites"][0]["suite"], "dual");
    assert_eq!(v["parameters"]["alpha"], 0.75);
}

#[test]
fn invalid_configurations_are_rejected() {
    assert_eq!(orcomp(&["simulate", "--model", "competition", "--t", "5", "--delta", "1.5"]), EXIT_CONFIG);
    assert_eq!(orcomp(&["simulate", "--model", "competition", "--t=-1"]), EXIT_CONFIG);
    assert_eq!(orcomp(&["simulate", "--model", "competition", "--t", "5", "--checkpoints", "9"]), EXIT_CONFIG);
    assert_eq!(orcomp(&["mu", "--direction", "1", "--n", "5"]), EXIT_CONFIG);
    assert_eq!(orcomp(&["mu", "--rho", "0"]), EXIT_CONFIG);
    assert_eq!(orcomp(&["--jobs", "0", "mu"]), EXIT_CONFIG);
    assert_eq!(orcomp(&["render"]), EXIT_CONFIG);
    assert_eq!(orcomp(&["shape", "--angles", "8", "--t", "10", "--replicates", "1", "--out", "/tmp/never-written"]), EXIT_CONFIG);
    assert_ne!(EXIT_CONFIG, EXIT_CHECK_FAILED);
}

#[test]
fn trace_and_walk_write_their_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(orcomp(&["trace", "--x", "4", "--y", "6", "--t", "9", "--out", d.join("tr").to_str().unwrap()]), EXIT_OK);
    let trace = fs::read_to_string(d.join("tr/trace.csv")).unwrap();
    assert!(trace.starts_with("site_x,site_y,t_enter,t_exit\n4,6,"));
    let colors: serde_json::Value = serde_json::from_slice(&fs::read(d.join("tr/trace.json")).unwrap()).unwrap();
    assert!(colors["competition"].is_string());
    assert_eq!(orcomp(&["walk", "--trials", "500", "--k-max", "50", "--out", d.join("w").to_str().unwrap()]), EXIT_OK);
    let walk = fs::read_to_string(d.join("w/walk.csv")).unwrap();
    assert_eq!(walk.lines().count(), 51);
}
