use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopbound"))
}

fn root(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(args: &[&str], out: &Path) -> (Output, Option<Value>) {
    let o = bin()
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    let report = std::fs::read_to_string(out)
        .ok()
        .map(|s| serde_json::from_str(&s).expect("report is JSON"));
    (o, report)
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

fn records<'a>(r: &'a Value, check: &str, item: &str) -> Vec<&'a Value> {
    r["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["check"] == check && x["item"] == item)
        .collect()
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(root(&format!("../../docs/{name}"))).unwrap();
    jsonschema::JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn verify_default_config_passes_and_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = root("configs/default_on.json");
    let (o, r) = run(
        &["verify", "--config", cfg.to_str().unwrap()],
        &dir.path().join("r.json"),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = r.unwrap();
    assert!(schema("report.schema.json").is_valid(&r));
    assert_eq!(r["summary"]["all_pass"], true);
    for check in ["dh-bulk", "dh-boundary", "reflection"] {
        let m = r["summary"]["checks"][check]["max_residual"]
            .as_f64()
            .unwrap();
        assert!(m < 1e-10, "{check}: {m}");
    }
}

#[test]
fn shipped_configs_match_schema() {
    let s = schema("config.schema.json");
    for name in ["default_on", "perturbed_on", "c2", "gen_on"] {
        let text = std::fs::read_to_string(root(&format!("configs/{name}.json"))).unwrap();
        assert!(s.is_valid(&serde_json::from_str(&text).unwrap()), "{name}");
    }
}

#[test]
fn perturbed_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = root("configs/perturbed_on.json");
    let (o, r) = run(
        &["verify", "--config", cfg.to_str().unwrap()],
        &dir.path().join("r.json"),
    );
    assert_eq!(o.status.code(), Some(1));
    let r = r.unwrap();
    assert!(
        r["summary"]["checks"]["reflection"]["max_residual"]
            .as_f64()
            .unwrap()
            > 1e-3
    );
}

#[test]
fn c2_both_branches_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = root("configs/c2.json");
    let (o, r) = run(
        &["verify", "--config", cfg.to_str().unwrap()],
        &dir.path().join("r.json"),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = r.unwrap();
    let recs = records(&r, "reflection", "classes");
    for b in ["real", "imaginary"] {
        assert!(recs.iter().any(|x| x["branch"] == b));
    }
}

#[test]
fn derive_single_point_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"model":"on","grids":{"lambda":[0.3],"lambda1":[0.2],"x":[0.4]},"scale":1}"#,
    );
    let o = bin()
        .args(["derive", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("boundary lambda=0.3 lambda1=0.2 x=0.4 [real]"));
    assert!(table.contains("beta3"));
    let (_, r) = run(
        &["derive", "--config", cfg.to_str().unwrap()],
        &dir.path().join("r.json"),
    );
    let r = r.unwrap();
    for rec in records(&r, "solve", "boundary") {
        assert!(rec["value"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn empty_grid_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"grids":{"lambda":[]}}"#);
    let o = bin()
        .args(["verify", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda"));
    let o = bin()
        .args(["verify", "--config", "/nonexistent/c.json"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generalized_k_zero_reduces_to_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"model":"gen-on","grids":{"k":[0]}}"#);
    let (o, r) = run(
        &["derive", "--config", cfg.to_str().unwrap()],
        &dir.path().join("r.json"),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = r.unwrap();
    let recs = records(&r, "solve", "k-zero");
    assert_eq!(recs.len(), 9);
    assert!(recs.iter().all(|x| x["value"].as_f64().unwrap() < 1e-12));
}

#[test]
fn limits_pass_by_default_and_fail_when_tightened() {
    let dir = tempfile::tempdir().unwrap();
    let (o, r) = run(&["limits"], &dir.path().join("a.json"));
    assert_eq!(o.status.code(), Some(0));
    let r = r.unwrap();
    assert!(records(&r, "limits", "k-zero")
        .iter()
        .all(|x| x["value"].as_f64().unwrap() < 1e-12));
    let large = records(&r, "limits", "large-k");
    assert!(large.iter().any(|x| x["verdict"] == "pass"));
    // λ/2 = x makes the rescaling singular; reported, not dropped
    assert!(large.iter().any(|x| x["verdict"] == "skipped"));

    let (o, r) = run(&["limits", "--tol", "1e-9"], &dir.path().join("b.json"));
    assert_eq!(o.status.code(), Some(1));
    let r = r.unwrap();
    assert!(records(&r, "limits", "large-k")
        .iter()
        .any(|x| x["verdict"] == "fail"));
    assert!(records(&r, "limits", "k-zero")
        .iter()
        .all(|x| x["verdict"] == "pass"));
}

#[test]
fn reports_are_deterministic_and_echo_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = root("configs/gen_on.json");
    let args = ["verify", "--config", cfg.to_str().unwrap()];
    let (_, a) = run(&args, &dir.path().join("a.json"));
    let (_, b) = run(&args, &dir.path().join("b.json"));
    let (mut a, mut b) = (a.unwrap(), b.unwrap());
    for r in [&mut a, &mut b] {
        r["generated_at"] = Value::Null;
        r["config"]["out"] = Value::Null;
    }
    assert_eq!(a, b);
    let echoed: loopbound::cli::config::SweepConfig =
        serde_json::from_value(a["config"].clone()).unwrap();
    assert_eq!(echoed.grids.k, vec![0.0, 0.5, 2.0]);
}

#[test]
fn report_reals_carry_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    run(&["verify", "--model", "gen-on"], &out);
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("\"lambda\": 2.0000000000000001e-1"));
}

#[test]
fn seed_free_takes_no_value() {
    let o = bin().args(["verify", "--seed-free=1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = run(
        &["verify", "--model", "gen-on", "--seed-free"],
        &dir.path().join("r.json"),
    );
    assert_eq!(o.status.code(), Some(0));
}
