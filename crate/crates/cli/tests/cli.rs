use std::io::Write;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_quadapn"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn analyze_reads_a_lut_from_stdin() {
    let (code, out, _) = run(&["analyze", "-", "--skip-blocking"], Some("2 2\n0 1 2 3\n"));
    assert_eq!(code, 0);
    assert!(out.contains("APN: no"));
}

#[test]
fn input_errors_exit_with_two() {
    let (code, _, err) = run(&["analyze", "-"], Some("2 2\n0 1 x\n"));
    assert_eq!(code, 2);
    assert!(err.contains("line 2"));
    let (code, _, _) = run(&["analyze", "/definitely/missing.txt"], None);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["analyze", "catalog:nothing:6"], None);
    assert_eq!(code, 2);
}

#[test]
fn expecting_crookedness_of_a_non_apn_function_is_a_violation() {
    let (code, _, _) = run(&["analyze", "catalog:gold_2:6", "--skip-blocking"], None);
    assert_eq!(code, 0);
    let (code, out, _) = run(
        &["analyze", "catalog:gold_2:6", "--skip-blocking", "--expect-crooked"],
        None,
    );
    assert_eq!(code, 1, "{out}");
}

#[test]
fn json_report_on_stdout_is_deterministic() {
    let args = ["analyze", "catalog:cube:6", "--json", "-"];
    let (_, a, _) = run(&args, None);
    let (_, b, _) = run(&args, None);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["nonbent_size"], 21);
    assert_eq!(v["partition"]["type"], "[2^21]");
}

#[test]
fn ea_output_is_a_parseable_apn_lut() {
    let (code, lut, _) = run(&["ea", "catalog:cube:6", "--seed", "5"], None);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["analyze", "-", "--skip-blocking"], Some(&lut));
    assert_eq!(code, 0);
    assert!(out.contains("APN: yes"), "{out}");
    assert!(out.contains("[0^42,2^21]"));
}

#[test]
fn construct_spread_with_refinement() {
    let (code, out, _) = run(
        &["construct", "--kind", "spread", "--n", "8", "--param", "4", "--refine", "0:2"],
        None,
    );
    assert_eq!(code, 0);
    assert!(out.contains("type: [2^5,4^16]"), "{out}");
    assert!(out.contains("verify: pass"));
}

#[test]
fn ccz_check_of_the_cube_is_not_certified() {
    let (code, out, _) = run(&["ccz-check", "catalog:cube:6"], None);
    assert_eq!(code, 0);
    assert!(out.contains("not certified"));
}

#[test]
fn tiny_pair_budget_reports_exhaustion() {
    let (code, _, _) = run(&["ccz-check", "catalog:cube:8", "--budget", "3"], None);
    assert_eq!(code, 3);
}
