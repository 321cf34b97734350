use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn discord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discord")).args(args).output().expect("binary runs")
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = discord(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn bell_state_is_half_by_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let bell = generate(dir.path(), "bell.json", &["--family", "belldiag", "--c", "1,-1,1", "--param", "1"]);
    let out = discord(&["compute", "--state", &bell, "--measure", "affinity"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!((r["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(r["method"], "closed-pure");
    let schmidt = r["diagnostics"]["schmidt_spectrum"].as_array().unwrap();
    assert_eq!(schmidt.len(), 2);
    assert!((r["diagnostics"]["purity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn mixed_two_qubit_uses_closed_2xn() {
    let dir = tempfile::tempdir().unwrap();
    let w = generate(dir.path(), "w.json", &["--family", "werner2", "--param", "0.5"]);
    let r = json(&discord(&["compute", "--state", &w]));
    assert_eq!(r["method"], "closed-2xn");
    let p: f64 = 0.5;
    let expect = 0.25 * (1.0 + p - ((1.0 - p) * (1.0 + 3.0 * p)).sqrt());
    assert!((r["value"].as_f64().unwrap() - expect).abs() < 1e-12);
    assert!(r["bound"].as_f64().unwrap() <= expect + 1e-9);
    assert!(r["diagnostics"].get("schmidt_spectrum").is_none());
}

#[test]
fn product_state_has_zero_discord() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prod.json");
    std::fs::write(
        &path,
        r#"{"dim_a": 2, "dim_b": 2, "matrix": [
            [{"re": 0.42}, {"re": 0.18}, {"re": 0.0}, {"re": 0.0}],
            [{"re": 0.18}, {"re": 0.28}, {"re": 0.0}, {"re": 0.0}],
            [{"re": 0.0}, {"re": 0.0}, {"re": 0.18}, {"re": 0.12}],
            [{"re": 0.0}, {"re": 0.0}, {"re": 0.12}, {"re": 0.12}]]}"#,
    )
    .unwrap();
    let r = json(&discord(&["compute", "--state", path.to_str().unwrap(), "--measure", "all"]));
    for res in r["results"].as_array().unwrap() {
        assert!(res["value"].as_f64().unwrap().abs() < 1e-9, "{res}");
    }
}

#[test]
fn qutrit_werner_optimize_matches_formula() {
    let dir = tempfile::tempdir().unwrap();
    let w = generate(dir.path(), "w3.json", &["--family", "werner", "--m", "3", "--param", "0.9"]);
    let r = json(&discord(&["compute", "--state", &w, "--method", "optimize"]));
    let (m, x) = (3.0f64, 0.9f64);
    let expect = 0.5 * ((m - x) / (m + 1.0) - ((m - 1.0) / (m + 1.0) * (1.0 - x * x)).sqrt());
    assert!((r["value"].as_f64().unwrap() - expect).abs() < 1e-4);
    assert_eq!(r["method"], "optimized-local");
    assert_eq!(r["seed"], 0);
}

#[test]
fn auto_and_optimize_agree_on_pure_states() {
    let dir = tempfile::tempdir().unwrap();
    let iso = generate(dir.path(), "iso.json", &["--family", "isotropic", "--m", "3", "--param", "1"]);
    let auto = json(&discord(&["compute", "--state", &iso]));
    let opt = json(&discord(&["compute", "--state", &iso, "--method", "optimize"]));
    assert_eq!(auto["method"], "closed-pure");
    assert!((auto["value"].as_f64().unwrap() - opt["value"].as_f64().unwrap()).abs() < 1e-5);
    assert!((auto["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-10);
}

#[test]
fn invalid_state_exits_2_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"dim_a": 1, "dim_b": 2, "matrix": [[{"re": 1.5}, {"re": 0}], [{"re": 0}, {"re": -0.5}]]}"#)
        .unwrap();
    let out = discord(&["compute", "--state", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "not_psd");

    let out = discord(&["compute", "--state", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = discord(&["compute", "--measure", "nonsense", "--state", "x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unsupported_requests_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let w = generate(dir.path(), "w3.json", &["--family", "werner", "--m", "3", "--param", "0.2"]);
    let out = discord(&["compute", "--state", &w, "--method", "closed"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "unsupported_dimension");
}

#[test]
fn werner_sweep_has_82_rows_and_fig_endpoints() {
    let out = discord(&["sweep", "--family", "werner2", "--from", "-0.3333", "--to", "1", "--steps", "41", "--measure", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,param,measure,analytic,optimized,gap");
    assert_eq!(lines.len() - 1, 82);
    let last: Vec<&str> = lines[lines.len() - 2..].to_vec();
    for row in last {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[1].parse::<f64>().unwrap(), 1.0);
        assert!((cols[3].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
        assert!(cols[5].parse::<f64>().unwrap() < 1e-5);
    }
}

#[test]
fn sweep_rejects_bad_grid() {
    let out = discord(&["sweep", "--family", "werner2", "--from", "0", "--to", "2", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = discord(&["sweep", "--family", "werner2", "--from", "0", "--to", "1", "--steps", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = discord(&["sweep", "--family", "ghz", "--from", "0", "--to", "1", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn large_m_sweep_runs_analytic_only() {
    let out = discord(&[
        "sweep", "--family", "isotropic", "--m", "64", "--from", "0.2", "--to", "0.9", "--steps", "3", "--measure",
        "affinity", "--analytic-only",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
    let out = discord(&["sweep", "--family", "werner", "--m", "9", "--from", "0", "--to", "1", "--steps", "2", "--measure", "affinity"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_is_deterministic_and_fails_when_overtight() {
    let a = discord(&["verify", "--seed", "7", "--only", "3,8"]);
    let b = discord(&["verify", "--seed", "7", "--only", "3,8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<Value> =
        String::from_utf8(a.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["id"], 3);
    assert_eq!(lines[2]["summary"]["failed"], 0);

    let tight = discord(&["verify", "--only", "3", "--tol-optimizer", "1e-16"]);
    assert_eq!(tight.status.code(), Some(1));
    let line: Value = serde_json::from_str(String::from_utf8(tight.stdout).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(line["passed"], false);
}

#[test]
fn csv_compute_output() {
    let dir = tempfile::tempdir().unwrap();
    let w = generate(dir.path(), "w.json", &["--family", "werner2", "--param", "1"]);
    let out_path = dir.path().join("out.csv");
    let out = discord(&["compute", "--state", &w, "--measure", "all", "--format", "csv", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "measure,value,method,bound,evaluations");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("hs,5.0000000000"));
}
