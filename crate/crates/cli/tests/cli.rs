use std::process::{Command, Output};

fn k3pencil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3pencil")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_groups_passes() {
    let out = k3pencil(&["verify", "groups"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for order in ["144", "576", "3600"] {
        assert!(text.contains(order), "missing {order}");
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 failed"));
}

#[test]
fn json_report_is_deterministic() {
    let a = k3pencil(&["report", "--case", "6,generic", "--format", "json"]);
    let b = k3pencil(&["report", "--case", "6,generic", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("\"paper_ref\""));
    assert!(text.contains("2·3²·5"));
}

#[test]
fn special_case_report() {
    let out = k3pencil(&["report", "--case", "8,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("-168"));
    assert!(text.contains("D4"));
}

#[test]
fn unknown_case_is_a_usage_error() {
    assert_eq!(k3pencil(&["report", "--case", "7,1"]).status.code(), Some(2));
    assert_eq!(k3pencil(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn bad_catalog_directory_is_a_data_error() {
    let out = k3pencil(&["--catalog", "/nonexistent/k3pencil", "verify", "groups"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_follows_mismatch_count() {
    for scope in ["lattices", "all"] {
        let out = k3pencil(&["verify", scope]);
        let errors = String::from_utf8_lossy(&out.stderr).into_owned();
        let mismatches = errors.lines().filter(|l| l.starts_with("mismatch ")).count();
        let summary = errors.lines().last().unwrap_or_default();
        assert!(summary.ends_with(&format!("{mismatches} failed")), "{summary}");
        assert_eq!(out.status.code(), Some(if mismatches == 0 { 0 } else { 1 }), "{errors}");
        assert!(stdout(&out).matches("FAIL ").count() == mismatches);
    }
}

#[test]
fn closed_pipe_is_not_a_crash() {
    use std::io::Read;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_k3pencil"))
        .args(["verify", "groups"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let mut errors = String::new();
    child.stderr.take().unwrap().read_to_string(&mut errors).unwrap();
    let status = child.wait().unwrap();
    assert!(!errors.contains("panicked"), "{errors}");
    assert_eq!(status.code(), Some(0));
}
