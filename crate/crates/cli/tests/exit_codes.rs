use std::path::PathBuf;
use std::process::Command;

fn bcg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bcg"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

#[test]
fn passing_workspace_exits_zero() {
    let out = bcg().arg("--workspace").arg(fixture("z2")).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["workspace"], "z2");
}

#[test]
fn relative_job_reports_class_and_witness() {
    let out = bcg()
        .args(["--job", "relative", "--degree", "2", "--workspace"])
        .arg(fixture("z2"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let two = report["jobs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|j| j["target"] == "z2/two-trivial")
        .unwrap();
    assert_eq!(two["data"]["dims"], serde_json::json!([0, 1, 0]));
    let class = &two["data"]["degrees"][1]["classes"][0];
    assert_eq!(class["seminorm"], "1");
    assert!(class["witness"].is_array());
}

#[test]
fn input_errors_exit_two() {
    let missing = bcg().args(["--workspace", "/nonexistent/ws.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let bad_job = bcg().args(["--job", "nope", "--workspace"]).arg(fixture("z2")).output().unwrap();
    assert_eq!(bad_job.status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("bcg-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"group_table": [[0,1,2],[1,1,0],[2,0,1]]}"#).unwrap();
    let axiom = bcg().arg("--workspace").arg(&path).output().unwrap();
    assert_eq!(axiom.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&axiom.stderr).contains("axiom"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn resource_cap_exits_three() {
    let out = bcg()
        .args(["--job", "cohomology", "--path-cap", "3", "--workspace"])
        .arg(fixture("s3"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["jobs"][0]["status"], "cap");
}

#[test]
fn report_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("bcg-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let to_file = bcg()
        .args(["--job", "seminorm", "--workspace"])
        .arg(fixture("z3"))
        .arg("--report")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let to_stdout = bcg().args(["--job", "seminorm", "--workspace"]).arg(fixture("z3")).output().unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
