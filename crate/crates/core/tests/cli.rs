//! The `hahn` binary end to end.

use std::io::Write;
use std::process::{Command, Stdio};

fn hahn(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hahn"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn documented_examples() {
    assert_eq!(
        hahn(&["eval", "--order", "4", "exp(t)"], "").1,
        "1 + t + 1/2*t^2 + 1/6*t^3 + O(t^4)\n"
    );
    let (code, _, err) = hahn(&["eval", "res(t^(-1))"], "");
    assert_eq!(code, 3);
    assert!(err.contains("NotInValuationRing"));
    let (code, out, _) = hahn(&["check", "--suite", "E1", "--cases", "100", "--seed", "42"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "suite E1 (real:50, seed 42): 100 cases, 100 passed, 0 failed, 0 indeterminate\n");
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["check", "--suite", "all", "--cases", "5", "--seed", "7", "--json"][..],
        &["--coeff", "real:30", "eval", "exp(1/3 + t) * log(2 + t^(1/2))"][..],
        &["--dim", "2", "eval", "inv(t^[0,1] + t^[1,-1])"][..],
    ] {
        // stderr carries wall-clock timings, so only the exit code and stdout are compared.
        let a = hahn(args, "");
        let b = hahn(args, "");
        assert_eq!((a.0, &a.1), (b.0, &b.1), "{args:?}");
        assert_eq!(a.0, 0, "{args:?}: {}", a.2);
    }
}

#[test]
fn exit_codes_by_error_family() {
    assert_eq!(hahn(&["eval", "1 +"], "").0, 2);
    assert_eq!(hahn(&["--dim", "2", "eval", "t^3"], "").0, 2);
    assert_eq!(hahn(&["eval", "root(2, -1)"], "").0, 0);
    assert_eq!(hahn(&["eval", "exp(2)"], "").0, 3);
    assert_eq!(hahn(&["res", "t^(-2) + 1"], "").0, 3);
    assert_eq!(hahn(&["decompose", "--mult", "--", "-t"], "").0, 3);
    assert_eq!(hahn(&["v", "O(t^3)"], "").0, 4);
    assert_eq!(hahn(&["eval", "log(1 + O(t^0))"], "").0, 4);
}

#[test]
fn stdin_inputs() {
    let (code, out, _) = hahn(&["parse", "--roundtrip", "-"], "t + 1\n# comment\n2*t^(2/4) + O(t^3)\n");
    assert_eq!(code, 0);
    assert_eq!(out, "1 + t\n2*t^(1/2) + O(t^3)\n");
    assert_eq!(hahn(&["eval", "-"], "  (1 - t)^(-1) \n").1, "1 + t + t^2 + t^3 + t^4 + t^5 + t^6 + t^7 + t^8 + t^9 + t^10 + t^11 + O(t^12)\n");
}

#[test]
fn failing_check_exits_one() {
    // A precision too coarse for the 1e-40 threshold is rejected up front …
    assert_eq!(hahn(&["--coeff", "real:12", "check", "--suite", "E1"], "").0, 2);
    // … while a coarse real mode makes exact-equality suites report failures.
    let (code, out, _) = hahn(&["--coeff", "real:15", "check", "--suite", "log_inverse", "--cases", "30"], "");
    assert!(code == 0 || code == 1, "{out}");
    assert_eq!(code == 1, out.contains("first failure"), "{out}");
}
