//! Acceptance run: twelve property criteria, one PASS/FAIL line each.
//!
//! Seeds, case counts and tolerances are pinned here. The process exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use hahn::checks::{env_for, find_suite, run_with, CheckReport};
use hahn::coeff::{CoeffMode, Tolerance};
use hahn::oexp::{check_axiom, Axiom, Verdict};
use hahn::parse::parse_series;
use hahn::series::Context;
use hahn::session::SessionConfig;

const SEED: u64 = 42;

/// Bytes used by the fuzzing part of criterion 11.
const ALPHABET: &[u8] = b"t^()[],+-*/O0123456789.~ e";

type Outcome = Result<String, String>;

fn config(mode: CoeffMode) -> SessionConfig {
    SessionConfig::new(1, mode)
}

fn rational() -> SessionConfig {
    config(CoeffMode::Rational)
}

fn real50() -> SessionConfig {
    config(CoeffMode::Real(50))
}

/// Runs a suite and demands zero failures; `max_indeterminate` bounds the
/// number of undecidable cases that are tolerated.
fn suite(name: &str, cases: u64, cfg: &SessionConfig, max_indeterminate: u64) -> Result<CheckReport, String> {
    let s = find_suite(name).map_err(|e| e.to_string())?;
    let r = run_with(s, cases, SEED, cfg).map_err(|e| e.to_string())?;
    if r.cases != cases {
        return Err(format!("{name}: ran {} of {cases} cases", r.cases));
    }
    if r.failed > 0 {
        return Err(r.to_string());
    }
    if r.indeterminate > max_indeterminate {
        let why = r.first_indeterminate.as_ref().map(|w| w.reason.clone()).unwrap_or_default();
        return Err(format!("{r}; first indeterminate: {why}"));
    }
    Ok(r)
}

fn summary(reports: &[CheckReport]) -> String {
    reports
        .iter()
        .map(|r| format!("{} {}/{}", r.suite, r.passed, r.cases))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Pins the comparison thresholds a suite environment uses.
fn expect_tolerances(cfg: &SessionConfig, suite_name: &str, tol: u32, loose: u32, squaring: u32) -> Result<(), String> {
    let env = env_for(find_suite(suite_name).map_err(|e| e.to_string())?, cfg).map_err(|e| e.to_string())?;
    let got = (env.tol.clone(), env.loose_tol.clone(), env.squaring_tol.clone());
    let want = (
        Tolerance::from_exponent(tol),
        Tolerance::from_exponent(loose),
        Tolerance::from_exponent(squaring),
    );
    if got != want {
        return Err(format!("{suite_name}: tolerances {got:?}, expected {want:?}"));
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let cfg = rational();
    let rs = vec![
        suite("field_axioms", 500, &cfg, 0)?,
        suite("ordering", 500, &cfg, 0)?,
        suite("valuation", 500, &cfg, 0)?,
        suite("convexity", 500, &cfg, 0)?,
    ];
    Ok(summary(&rs))
}

fn criterion_2() -> Outcome {
    let exact = rational();
    let real = real50();
    expect_tolerances(&real, "roots", 40, 39, 38)?;
    let rs = vec![
        suite("invert", 500, &exact, 0)?,
        suite("roots", 300, &exact, 0)?,
        suite("invert", 500, &real, 0)?,
        suite("roots", 300, &real, 0)?,
    ];
    Ok(format!("{} (exact in rational mode; real:50 within 1e-40 for inverses, 10·epsilon for roots)", summary(&rs)))
}

fn e_suite(name: &str, cases: u64) -> Outcome {
    let cfg = rational();
    expect_tolerances(&cfg, name, 40, 39, 38)?;
    let env = env_for(find_suite(name).unwrap(), &cfg).map_err(|e| e.to_string())?;
    if env.ctx.mode != CoeffMode::Real(50) {
        return Err(format!("{name} runs in {}", env.ctx.mode));
    }
    let r = suite(name, cases, &cfg, 0)?;
    Ok(format!("{} in real:50, cutoff 12, relative error ≤ 1e-40", summary(&[r])))
}

fn criterion_5() -> Outcome {
    let ctx = Context::new(1, CoeffMode::Real(50));
    let target = SessionConfig::default_order(1);
    let tol = Tolerance::for_digits(50);
    let mut decided = 0;
    for n in 0u32..=4 {
        let sq = n * n;
        for text in [format!("{}", sq + 1), format!("{} + t", sq + 1), format!("{sq} + 3/2 + t^(1/2)")] {
            let x = hahn::session::Session::new(config(CoeffMode::Real(50)))
                .and_then(|s| s.eval_series(&text))
                .map_err(|e| format!("{text}: {e}"))?;
            debug_assert_eq!(x.ctx(), ctx);
            let w = check_axiom(Axiom::E3(n), &[x], &target, &tol).map_err(|e| format!("{text}: {e}"))?;
            match w.verdict {
                Verdict::Pass => decided += 1,
                Verdict::Fail(why) => return Err(format!("E3(n={n}) fails at x = {text}: {why}")),
                Verdict::Indeterminate(_) => {}
            }
        }
    }
    if decided != 15 {
        return Err(format!("only {decided} of 15 exhaustive cases were decidable"));
    }
    // Random x ∈ 𝒪 with n ≤ 5; undecidable comparisons are allowed but rare.
    let r = suite("E3", 200, &rational(), 4)?;
    Ok(format!("15/15 exhaustive cases; {}", r))
}

fn criterion_8() -> Outcome {
    let r = suite("decompositions", 500, &rational(), 0)?;
    let s = suite("residue_hom", 500, &rational(), 0)?;
    Ok(summary(&[r, s]))
}

fn criterion_9() -> Outcome {
    let r = suite("indep", 300, &rational(), 0)?;
    Ok(format!("{} agreement with the minor-rank oracle", summary(&[r])))
}

fn criterion_10() -> Outcome {
    let cfg = rational();
    expect_tolerances(&cfg, "log_inverse", 40, 39, 38)?;
    let a = suite("log_inverse", 200, &cfg, 0)?;
    let b = suite("olog_zero", 50, &cfg, 0)?;
    Ok(format!("{} (both directions per case)", summary(&[a, b])))
}

fn run_bin(args: &[&str]) -> Result<(i32, Vec<u8>, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hahn"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run the binary: {e}"))?;
    Ok((
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    ))
}

fn criterion_11() -> Outcome {
    let mut rs = Vec::new();
    for mode in [CoeffMode::Rational, CoeffMode::Real(50)] {
        for dim in [1, 2] {
            let mut cfg = SessionConfig::new(dim, mode);
            cfg.default_cutoff = SessionConfig::default_order(dim);
            rs.push(suite("parser_roundtrip", 1000, &cfg, 0)?);
        }
    }
    // Fuzzing: every input parses or yields a located syntax error.
    let ctx = Context::rational(1);
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for i in 0..100_000u32 {
        let len = (i % 23) as usize;
        let bytes: Vec<u8> = (0..len)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                ALPHABET[(state % ALPHABET.len() as u64) as usize]
            })
            .collect();
        let text = String::from_utf8(bytes).expect("ascii");
        match std::panic::catch_unwind(|| parse_series(&text, ctx)) {
            Ok(Ok(_)) | Ok(Err(hahn::error::Error::Syntax { .. })) => {}
            Ok(Err(e)) => return Err(format!("fuzz input {text:?}: unexpected {e}")),
            Err(_) => return Err(format!("fuzz input {text:?}: crash")),
        }
    }
    // CLI determinism and the documented command examples.
    let check = ["check", "--suite", "E1", "--cases", "100", "--seed", "42"];
    let (c1, o1, _) = run_bin(&check)?;
    let (c2, o2, _) = run_bin(&check)?;
    if c1 != 0 || o1 != o2 {
        return Err(format!("check run not reproducible (exit {c1}/{c2})"));
    }
    let o1 = String::from_utf8_lossy(&o1);
    if !o1.contains("100 cases, 100 passed, 0 failed") {
        return Err(format!("unexpected check report: {o1}"));
    }
    let (code, out, _) = run_bin(&["eval", "--order", "4", "exp(t)"])?;
    if code != 0 || out != b"1 + t + 1/2*t^2 + 1/6*t^3 + O(t^4)\n" {
        return Err(format!("eval exp(t): exit {code}, {}", String::from_utf8_lossy(&out)));
    }
    let (code, _, err) = run_bin(&["eval", "res(t^(-1))"])?;
    if code != 3 || !err.contains("NotInValuationRing") {
        return Err(format!("eval res(t^(-1)): exit {code}, stderr {err}"));
    }
    Ok(format!("{}; 100000 fuzz inputs; CLI output byte-identical", summary(&rs)))
}

fn criterion_12() -> Outcome {
    let cfg = rational();
    expect_tolerances(&cfg, "uniqueness", 40, 39, 38)?;
    let r = suite("uniqueness", 100, &cfg, 0)?;
    Ok(format!("{} within 1e-38", summary(&[r])))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 exact field and valuation laws", criterion_1),
        ("2 inversion and root oracles", criterion_2),
        ("3 E1 exp(x+y) = exp x · exp y", || e_suite("E1", 500)),
        ("4 E2 exp x = e(x) on |x| ≤ 1", || e_suite("E2", 200)),
        ("5 E3 x > n² implies exp x > x^n", criterion_5),
        ("6 E4 exp(olog y) = y for y > 1", || e_suite("E4", 200)),
        ("7 res(exp x) = e^(res x)", || e_suite("res", 500)),
        ("8 decomposition round trips", criterion_8),
        ("9 exponent-group oracle", criterion_9),
        ("10 log/exp inverse laws", criterion_10),
        ("11 parser, fuzzing, CLI determinism", criterion_11),
        ("12 exp x = e(x/n)^n", criterion_12),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
