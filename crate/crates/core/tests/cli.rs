use std::fs;
use std::process::{Command, Output};

fn cslgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cslgeom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn minimal_torus_verifies() {
    let o = cslgeom(&[
        "verify",
        "--family",
        "calabi-torus",
        "--params",
        "r1=0.816496580927726,r3=0.7071067811865476",
        "--grid",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!((v["invariants"]["normB2"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert_eq!(v["invariants"]["minimal"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn report_is_byte_deterministic() {
    let args = [
        "verify",
        "--family",
        "calabi-product",
        "--n",
        "3",
        "--params",
        "r1=0.8",
        "--grid",
        "4",
        "--seed",
        "5",
    ];
    let a = cslgeom(&args);
    let b = cslgeom(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let rows = v["thresholds"].as_array().unwrap();
    let main = rows.iter().find(|r| r["name"] == "main").unwrap();
    assert!((main["pointwise_margin_min"].as_f64().unwrap() + 0.395061728).abs() < 1e-8);
    assert_eq!(v["invariants"]["equality_basic"], true);
}

#[test]
fn invalid_radii_exit_two() {
    let o = cslgeom(&["verify", "--family", "calabi-torus", "--params", "r1=0.6,r2=0.7,r3=0.6,r4=0.8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("r1² + r2² = 1"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cslgeom(&["verify"]).status.code(), Some(2));
    assert_eq!(cslgeom(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        cslgeom(&["verify", "--family", "totally-geodesic", "--n", "2", "--format", "xml"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cslgeom(&["scan", "--family", "calabi-product", "--n", "3", "--sweep", "r1=0.5:0.9:1"]).status.code(),
        Some(2)
    );
    assert_eq!(cslgeom(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = cslgeom(&[
        "scan",
        "--family",
        "calabi-product",
        "--n",
        "3",
        "--sweep",
        "r1=0.5:0.95:10",
        "--grid",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "param,normB2,normH2,threshold_basic,margin_basic,threshold_main,margin_main,equality_flag,kappa"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    let critical = (0.75f64).sqrt();
    for r in &rows {
        let r1: f64 = r[0].parse().unwrap();
        assert_eq!(r[7] == "true", r1 <= critical, "row {r:?}");
    }
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("report.json");
    fs::write(
        &cfg,
        format!(
            "family = \"calabi-product\"\nn = 2\ngrid = 4\nout = \"{}\"\n[params]\nr1 = 0.6\n",
            out.display()
        ),
    )
    .unwrap();
    let o = cslgeom(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["family"], "calabi_product");
    assert_eq!(v["grid"], 4);
}

#[test]
fn thresholds_table() {
    let o = cslgeom(&["thresholds", "--n", "17"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("main3"));
    let o2 = cslgeom(&["thresholds", "--n", "2"]);
    assert!(!stdout(&o2).contains("main1"));
}
