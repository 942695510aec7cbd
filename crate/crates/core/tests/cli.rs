use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_badflow"));
    c.env_remove("BADFLOW_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn validate(doc: &Value, schema: &str) {
    let text = std::fs::read_to_string(schema_dir().join(schema)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn manifest_line(csv: &str) -> Value {
    let first = csv.lines().next().unwrap();
    serde_json::from_str(first.strip_prefix("# ").unwrap()).unwrap()
}

#[test]
fn orbit_csv_for_golden_ratio() {
    let o = run(&["orbit", "--x", "golden", "--weight", "1", "--T", "30", "--step", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    validate(&manifest_line(&text), "manifest.schema.json");
    let mut lines = text.lines().skip(1);
    assert_eq!(lines.next().unwrap(), "t,lambda1,certified_floor_so_far");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3001);
    assert!(rows.iter().all(|r| r[2] >= 0.4 && r[1] >= r[2]));
}

#[test]
fn orbit_of_zero_decays_exponentially() {
    let o = run(&["orbit", "--x", "0", "--weight", "1", "--T", "4", "--step", "0.1"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for l in text.lines().skip(2) {
        let r: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((r[1] - (-r[0]).exp()).abs() <= 1e-12);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["orbit", "--x", "0.3", "--weight", "0.7,0.7"],
        vec!["orbit", "--x", "0.3", "--weight", "1", "--convention", "xy"],
        vec!["cantor", "--R", "1"],
        vec!["bad-check", "--x", "0.1,0.2", "--weight", "1"],
        vec!["scan", "nondiv", "--t", "1", "--eps", "0.1", "--interval", "0.2"],
        vec!["no-such-command"],
        vec!["--workers", "0", "scan", "minima"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn resource_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["cantor", "--R", "256", "--depth", "3", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bad_check_reports() {
    let golden = stdout_json(&run(&["bad-check", "--x", "golden", "--weight", "1", "--Q", "1000"]));
    validate(&golden, "bad_check.schema.json");
    let p = &golden["payload"];
    assert!((p["constant"].as_f64().unwrap() - 0.381966).abs() < 1e-6);
    assert_eq!(p["verdict"], "consistent");
    assert_eq!(p["dual"]["only_zero_solution"], true);

    let third = stdout_json(&run(&["bad-check", "--x", "1/3", "--weight", "1", "--Q", "100", "--mode", "direct"]));
    validate(&third, "bad_check.schema.json");
    assert_eq!(third["payload"]["constant"].as_f64(), Some(0.0));
    assert_eq!(third["payload"]["witness"], serde_json::json!([-1, 3]));
    assert!(third["payload"].get("dual").is_none());

    let liouville = stdout_json(&run(&["bad-check", "--x", "liouville:5", "--weight", "1", "--Q", "10000000", "--mode", "direct"]));
    assert!(liouville["payload"]["constant"].as_f64().unwrap() <= 1e-5);
}

#[test]
fn cantor_writes_valid_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["cantor", "--depth", "3", "--out-dir", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let tree: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("tree.json")).unwrap()).unwrap();
    validate(&tree, "tree.schema.json");
    let richness: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("richness.json")).unwrap()).unwrap();
    validate(&richness, "richness.schema.json");
    assert_eq!(richness["manifest"]["config"]["R"], 16);
    let csv = std::fs::read_to_string(dir.path().join("survivors.csv")).unwrap();
    validate(&manifest_line(&csv), "manifest.schema.json");
    assert_eq!(csv.lines().nth(1).unwrap(), "index,lo,hi,midpoint,phi1,phi2,norm_q0,norm_q1,norm_q2,norm_q3,recheck_pass");
    let rows = csv.lines().skip(2).count();
    let survivors = richness["payload"]["survivors"].as_array().unwrap().len();
    assert_eq!(rows, survivors);
    assert!(rows > 0 && csv.lines().skip(2).all(|l| l.ends_with(",true")));
}

#[test]
fn cantor_depth_zero_is_a_live_root() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["cantor", "--depth", "0", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let tree: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("tree.json")).unwrap()).unwrap();
    validate(&tree, "tree.schema.json");
    let gens = tree["payload"]["generations"].as_array().unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(gens[0][0]["survival"]["status"], "alive");
    let richness: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("richness.json")).unwrap()).unwrap();
    validate(&richness, "richness.schema.json");
}

#[test]
fn scan_outputs_validate() {
    let cases: [(&[&str], &str); 8] = [
        (&["scan", "dangerous", "--q", "4", "--l", "1"], "scan_dangerous.schema.json"),
        (&["scan", "dangerous", "--q", "4", "--l-prime", "2", "--all-windows", "--R", "4", "--rho", "0.5"], "scan_dangerous.schema.json"),
        (&["scan", "eq", "--q", "2,3", "--grid", "200"], "scan_eq.schema.json"),
        (&["scan", "eq", "--q", "3", "--s", "0.3"], "scan_eq.schema.json"),
        (&["scan", "nondiv", "--t", "2", "--eps", "0.05,0.2", "--grid", "100"], "scan_nondiv.schema.json"),
        (&["scan", "shah", "--t", "1", "--samples", "5", "--seed", "3"], "scan_shah.schema.json"),
        (&["scan", "minima", "--lattice", "rows:2,0,0;0,0.5,0;0,0,1"], "scan_minima.schema.json"),
        (&["scan", "sublattices", "--lattice", "diag:1,2,0.5", "--k", "2", "--rho", "1"], "scan_sublattices.schema.json"),
    ];
    for (args, schema) in cases {
        let doc = stdout_json(&run(args));
        validate(&doc, schema);
    }
}

#[test]
fn sublattice_scan_counts_unit_ball_vectors() {
    let doc = stdout_json(&run(&["scan", "sublattices", "--lattice", "identity", "--k", "1", "--rho", "1"]));
    assert_eq!(doc["payload"]["count"], 13);
}

#[test]
fn dangerous_scan_with_empty_box_is_empty() {
    // at q = 1 the tail box ρ·b^{q/2} < 1 leaves only a′ = 0, and ρ·b^{−1} < 1 rules that out
    let doc = stdout_json(&run(&["scan", "dangerous", "--q", "1", "--l", "1", "--all-windows"]));
    assert_eq!(doc["payload"]["count"], 0);
    assert_eq!(doc["payload"]["records"], serde_json::json!([]));
}

#[test]
fn nondiv_fraction_is_monotone_in_eps() {
    let a = stdout_json(&run(&["scan", "nondiv", "--t", "4", "--interval", "0.25,0.5", "--eps", "0.05", "--grid", "300"]));
    let b = stdout_json(&run(&["scan", "nondiv", "--t", "4", "--interval", "0.25,0.5", "--eps", "0.1", "--grid", "300"]));
    let fa = a["payload"]["results"][0]["fraction"].as_f64().unwrap();
    let fb = b["payload"]["results"][0]["fraction"].as_f64().unwrap();
    assert!(fa <= fb);
}

#[test]
fn worker_flag_beats_environment() {
    let o = bin().env("BADFLOW_WORKERS", "3").args(["--workers", "2", "scan", "minima"]).output().unwrap();
    assert_eq!(stdout_json(&o)["manifest"]["workers"], 2);
    let o = bin().env("BADFLOW_WORKERS", "3").args(["scan", "minima"]).output().unwrap();
    assert_eq!(stdout_json(&o)["manifest"]["workers"], 3);
}

#[test]
fn shah_sweep_is_seeded() {
    let args = ["scan", "shah", "--t", "1", "--samples", "8", "--seed", "11"];
    let a = stdout_json(&run(&args));
    let b = stdout_json(&run(&args));
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["manifest"]["seed"], 11);
}
