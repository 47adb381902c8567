use std::path::{Path, PathBuf};
use std::process::Command;

use liouville_cli::{Scenario, REPORT_FILE};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
}

fn crate_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn analyze(scenario: &Path, out: &Path, extra: &[&str]) -> (i32, String, String) {
    let o = bin()
        .arg("analyze")
        .arg(scenario)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap();
    (
        o.status.code().unwrap(),
        String::from_utf8_lossy(&o.stdout).into(),
        String::from_utf8_lossy(&o.stderr).into(),
    )
}

fn bundled() -> Vec<PathBuf> {
    ["brownian", "poisson-lattice", "drift-diffusion-strong"]
        .iter()
        .map(|n| crate_path(&format!("scenarios/{n}.json")))
        .collect()
}

fn load_report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(REPORT_FILE)).unwrap()).unwrap()
}

fn result_of<'a>(report: &'a Value, kind: &str) -> &'a Value {
    &report["analyses"].as_array().unwrap().iter().find(|a| a["analysis"] == kind).unwrap()["result"]
}

#[test]
fn bundled_scenarios_round_trip() {
    for p in bundled() {
        let s = Scenario::load(&p).unwrap();
        let back = Scenario::from_json(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, back, "{}", p.display());
    }
}

#[test]
fn reports_are_byte_identical_under_a_fixed_seed() {
    for p in bundled() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        assert_eq!(analyze(&p, a.path(), &["--seed", "11"]).0, 0);
        assert_eq!(analyze(&p, b.path(), &["--seed", "11"]).0, 0);
        let ra = std::fs::read(a.path().join(REPORT_FILE)).unwrap();
        let rb = std::fs::read(b.path().join(REPORT_FILE)).unwrap();
        assert!(ra == rb, "{} differs between runs", p.display());
        assert!(a.path().join(liouville_cli::TIMING_FILE).exists());
    }
}

#[test]
fn bundled_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(analyze(&bundled()[0], dir.path(), &[]).0, 0);
    let r = load_report(dir.path());
    assert_eq!(result_of(&r, "liouville")["holds"], true);
    assert_eq!(result_of(&r, "coupling")["holds"], true);
    assert_eq!(result_of(&r, "residual")["report"]["pass"], true);

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(analyze(&bundled()[1], dir.path(), &[]).0, 0);
    let r = load_report(dir.path());
    let l = result_of(&r, "liouville");
    assert_eq!(l["holds"], false);
    let gamma = l["verdict"]["witness"]["gamma"][0].as_f64().unwrap();
    assert!((gamma - 2.0 * std::f64::consts::PI).abs() < 1e-4);
    assert!(result_of(&r, "residual")["report"]["max_normalized"].as_f64().unwrap() < 1e-6);

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(analyze(&bundled()[2], dir.path(), &[]).0, 0);
    let r = load_report(dir.path());
    let s = result_of(&r, "strong");
    assert_eq!(s["holds"], false);
    let theta: Vec<f64> = s["verdict"]["witness"]["theta"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!((theta[0] + 2.0).abs() < 1e-6 && theta[1].abs() < 1e-6);
}

#[test]
fn every_verdict_line_carries_its_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let (_, stdout, _) = analyze(&bundled()[1], dir.path(), &[]);
    for line in stdout.lines().filter(|l| l.contains("holds=")) {
        assert!(line.contains("box R=") && line.contains("tol"), "{line}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(analyze(&crate_path("tests/fixtures/valid.json"), dir.path(), &[]).0, 0);

    let (code, _, stderr) = analyze(&crate_path("tests/fixtures/schema-broken.json"), dir.path(), &[]);
    assert_eq!(code, 2);
    assert!(stderr.contains("analyses[0]"), "{stderr}");

    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = analyze(&crate_path("tests/fixtures/precondition-broken.json"), dir.path(), &[]);
    assert_eq!(code, 3);
    let r = load_report(dir.path());
    assert_eq!(r["analyses"][0]["status"], "failed");
    assert!(r["analyses"][0]["error"].as_str().unwrap().contains("precondition"));
}

#[test]
fn missing_growth_is_a_validation_error() {
    let text = r#"{"name":"x","symbol":{"kind":"triplet","b":[0.0],"Q":[[1.0]]},"analyses":[{"analysis":"strong"}]}"#;
    let err = Scenario::from_json(text).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("analyses[0]"));
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"name":"x","symbol":{"kind":"triplet","b":[0.0],"Q":[[1.0]]},"analyses":[],"sead":3}"#;
    assert_eq!(Scenario::from_json(text).unwrap_err().exit_code(), 2);
}

#[test]
fn empty_analysis_list_exports_nothing() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(analyze(&crate_path("tests/fixtures/empty.json"), dir.path(), &[]).0, 0);
    let csv = dir.path().join("csv");
    let o = bin().arg("export").arg(dir.path().join(REPORT_FILE)).arg("all").arg("--out").arg(&csv).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(!csv.exists());
}

#[test]
fn export_zero_scatter_and_unknown_selector() {
    let dir = tempfile::tempdir().unwrap();
    analyze(&bundled()[1], dir.path(), &[]);
    let csv = dir.path().join("csv");
    let report = dir.path().join(REPORT_FILE);
    let o = bin().arg("export").arg(&report).arg("zero_set").arg("--out").arg(&csv).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(csv.join("00_zero_set_zeros.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# columns: xi1,residual"));
    let xs: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    let tau = 2.0 * std::f64::consts::PI;
    for k in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        assert!(xs.iter().any(|x| (x - k * tau).abs() < 1e-6), "missing {k}·2π in {xs:?}");
    }

    let o = bin().arg("export").arg(&report).arg("beta_table").arg("--out").arg(&csv).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn half_exp_polar_table() {
    let text = r#"{
        "name": "half-exp",
        "symbol": { "kind": "triplet", "b": [0.0, 0.0], "Q": [[1.0, 0.0], [0.0, 1.0]] },
        "growth": { "dim": 2, "factors": [{ "kind": "half_exp", "v": [1.0, 0.0] }] },
        "analyses": [{ "analysis": "beta_table", "directions": 32, "r_max": 200.0 }]
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("half-exp.json");
    std::fs::write(&path, text).unwrap();
    assert_eq!(analyze(&path, dir.path(), &[]).0, 0);
    let csv = dir.path().join("csv");
    bin().arg("export").arg(dir.path().join(REPORT_FILE)).arg("all").arg("--out").arg(&csv).output().unwrap();
    let text = std::fs::read_to_string(csv.join("00_beta_table_beta.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# columns: angle,omega1,omega2,beta,beta_numeric"));
    for l in lines {
        let c: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((c[3] - c[1].max(0.0)).abs() < 1e-12, "{l}");
        assert!((c[4] - c[1].max(0.0)).abs() < 1e-3, "{l}");
    }
}

#[test]
fn builtins_lists_catalog() {
    let o = bin().arg("builtins").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    for needle in ["stable |ξ|^α", "e^{α|x|^β} for β ∈ [0,1]", "½(1+cos(ξ⁰·x))"] {
        assert!(s.contains(needle), "{needle}");
    }
}
