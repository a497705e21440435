use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn currentproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_currentproj")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn current(dir: &Path, name: &str, words: &[&str]) -> String {
    let parts: Vec<String> = words.iter().map(|w| format!(r#"{{"word":"{w}","weight":1.0}}"#)).collect();
    write(dir, name, &format!(r#"{{"components":[{}]}}"#, parts.join(","))).display().to_string()
}

fn filling(dir: &Path) -> String {
    current(dir, "filling.json", &["a1", "a1b1A1B1", "a2", "b1", "b2", "b1b2"])
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn intersect_prints_the_count() {
    let out = currentproj(&["intersect", "a1", "b1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1");
    assert_eq!(stdout(&currentproj(&["intersect", "a1", "a2"])).trim(), "0");
}

#[test]
fn projection_converges_and_writes_a_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.csv");
    let out = currentproj(&["project", &filling(dir.path()), "--trajectory", traj.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let result: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(result["status"], "converged");
    assert_eq!(result["minimizer"].as_array().unwrap().len(), 6);
    let csv = std::fs::read_to_string(traj).unwrap();
    assert!(csv.starts_with("iter,F,grad_norm,fn_coords\n"));
}

#[test]
fn non_filling_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let mu = current(dir.path(), "nf.json", &["a1", "a2"]);
    assert_eq!(currentproj(&["project", &mu]).status.code(), Some(2));
    assert_eq!(currentproj(&["fill-check", &mu]).status.code(), Some(2));
}

#[test]
fn override_reports_no_minimizer_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let mu = current(dir.path(), "nf.json", &["a1", "a2"]);
    let out = currentproj(&["project", &mu, "--override-filling"]);
    assert_eq!(out.status.code(), Some(3));
    let result: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(result["status"], "no_minimizer");
    assert!(result["degeneration"]["length"].as_f64().unwrap() < 1e-3);
}

#[test]
fn unstable_cutoff_exits_with_four() {
    let out = currentproj(&["--radius", "2", "intersect", "a1b1a2b2", "A1b2a2B1"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let junk = write(dir.path(), "junk.json", "{not json");
    assert_eq!(currentproj(&["length", junk.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(currentproj(&["length", "/nonexistent/current.json"]).status.code(), Some(1));
    assert_eq!(currentproj(&["intersect", "a1", "c7"]).status.code(), Some(1));
}

#[test]
fn output_goes_to_the_requested_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("fill.json");
    let out = currentproj(&["--out", out_path.to_str().unwrap(), "fill-check", &filling(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let verdict: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(verdict["filling"], true);
}

#[test]
fn twist_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = currentproj(&["twist", &filling(dir.path()), "--index", "1", "--times", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn negated_verify_fails() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"seed": 7, "sample_count": 3}"#);
    let report_dir = dir.path().join("report");
    let base = ["--out", report_dir.to_str().unwrap(), "verify", spec.to_str().unwrap()];
    assert_eq!(currentproj(&base).status.code(), Some(0));
    assert!(report_dir.join("ratios.csv").exists());
    let mut negated = base.to_vec();
    negated.push("--negate");
    assert_eq!(currentproj(&negated).status.code(), Some(5));
}
