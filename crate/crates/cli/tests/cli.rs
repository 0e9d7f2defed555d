use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sim")).args(args).output().expect("sim runs")
}

fn repo_cases() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../cases")
}

fn short_case(dir: &Path, name: &str, extra: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    fs::write(
        &path,
        format!(r#"{{"name":"{name}","beta_deg":-60,"phi_d_deg":-10,"duration_s":2.0{extra}}}"#),
    )
    .unwrap();
    path
}

#[test]
fn validate_accepts_checked_in_cases() {
    for n in 1..=6 {
        let p = repo_cases().join(format!("case{n}.json"));
        let out = sim(&["validate", p.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn validate_rejects_zero_roll() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, r#"{"name":"bad","beta_deg":-60,"phi_d_deg":0}"#).unwrap();
    let out = sim(&["validate", p.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("phi_d_deg"));
}

#[test]
fn cases_command_matches_checked_in_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sim(&["cases", dir.path().to_str().unwrap()]).status.success());
    for n in 1..=6 {
        let name = format!("case{n}.json");
        let fresh = fs::read_to_string(dir.path().join(&name)).unwrap();
        let stored = fs::read_to_string(repo_cases().join(&name)).unwrap();
        assert_eq!(fresh, stored, "{name} is out of date");
    }
}

#[test]
fn run_writes_report_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let case = short_case(dir.path(), "short", "");
    let out_dir = dir.path().join("out");
    let out = sim(&["run", case.to_str().unwrap(), "--out", out_dir.to_str().unwrap(), "--csv", "--svg"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["f_E_d"].as_f64().unwrap() - 1.6895).abs() < 1e-3);
    assert!((report["T_sum_d"].as_f64().unwrap() - 8.4258).abs() < 1e-3);
    let csv = fs::read_to_string(out_dir.join("short.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("t,y,z,phi_deg,vy,vz,omega,T_sum_cmd,T_sum_ach,M_X,T1,T2,T3,T4,f_E_est,f_E_true,mode,u_f")
    );
    assert_eq!(lines.count(), 2001);
    assert!(out_dir.join("short.report.json").exists());
    assert!(fs::read_to_string(out_dir.join("short.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn run_without_contact_fails() {
    let dir = tempfile::tempdir().unwrap();
    let case = short_case(dir.path(), "far", r#","approach":{"standoff":3.0}"#);
    let out = sim(&["run", case.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("contact"));
}

#[test]
fn table_of_one_case() {
    let dir = tempfile::tempdir().unwrap();
    short_case(dir.path(), "only", "");
    let out = sim(&["table", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("| only")).count(), 1);
    assert!(!text.contains("vertical") && !text.contains("horizontal"));
}

#[test]
fn envelope_single_surface() {
    let dir = tempfile::tempdir().unwrap();
    let out = sim(&["envelope", "--betas", "90", "--gt", "7.4530", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let svg = fs::read_to_string(dir.path().join("envelope.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    let csv = fs::read_to_string(dir.path().join("envelope_beta90.csv")).unwrap();
    assert_eq!(csv.lines().count(), 401);
}
