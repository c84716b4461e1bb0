//! Seeded randomized property checks.
//!
//! A run is fully determined by `(suite, cases, seed, session config)`: case
//! `i` draws its inputs from a stream keyed by `(seed, i)`, so a failing case
//! can be regenerated and replayed in isolation.

pub mod gen;
pub mod report;
pub mod suites;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use crate::coeff::CoeffMode;
use crate::error::{Error, Result};
use crate::oexp::{is_obstruction, Verdict};
use crate::series::Context;
use crate::session::SessionConfig;

pub use gen::{gen_random, CaseRng, Domain, GeneratorSpec};
pub use report::{CheckReport, Witness};
pub use suites::{Env, Input, Suite, SUITES};

/// Digits used by exponential suites when the session is rational.
pub const DEFAULT_REAL_DIGITS: u32 = 50;

/// Looks up a suite by name.
pub fn find_suite(name: &str) -> Result<&'static Suite> {
    SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

/// Names accepted by [`run_suite`], including `all`.
pub fn suite_names() -> Vec<&'static str> {
    let mut v: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
    v.push("all");
    v
}

/// The environment a suite runs in under the given session configuration.
pub fn env_for(suite: &Suite, config: &SessionConfig) -> Result<Env> {
    config.validate()?;
    let mode = match config.coeff_mode {
        CoeffMode::Rational if suite.real => CoeffMode::Real(DEFAULT_REAL_DIGITS),
        m => m,
    };
    Ok(Env::new(Context::new(config.dim, mode), config.default_cutoff.clone(), config.e3_bound))
}

/// Outcome of a single case.
pub fn evaluate(suite: &Suite, env: &Env, inputs: &[Input]) -> Verdict {
    match catch_unwind(AssertUnwindSafe(|| (suite.check)(env, inputs))) {
        Ok(Ok(v)) => v,
        Ok(Err(e)) if is_obstruction(&e) => Verdict::Indeterminate(e.to_string()),
        Ok(Err(e)) => Verdict::Fail(format!("error: {e}")),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Verdict::Fail(format!("panic: {msg}"))
        }
    }
}

/// Regenerates the inputs of case `index`.
pub fn case_inputs(suite: &Suite, env: &Env, seed: u64, index: u64) -> Vec<Input> {
    let mut rng = CaseRng::new(seed, index);
    (suite.generate)(env, &mut rng)
}

/// Runs `cases` cases of one suite.
pub fn run_with(suite: &Suite, cases: u64, seed: u64, config: &SessionConfig) -> Result<CheckReport> {
    let env = env_for(suite, config)?;
    let start = Instant::now();
    let mut report = CheckReport::new(suite.name, seed, env.ctx.mode);
    let quiet = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    for index in 0..cases {
        let inputs = case_inputs(suite, &env, seed, index);
        let verdict = evaluate(suite, &env, &inputs);
        report.record(index, &inputs, verdict);
    }
    std::panic::set_hook(quiet);
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Runs a named suite, or every suite for `all`.
pub fn run_suite(name: &str, cases: u64, seed: u64, config: &SessionConfig) -> Result<Vec<CheckReport>> {
    if name == "all" {
        SUITES.iter().map(|s| run_with(s, cases, seed, config)).collect()
    } else {
        Ok(vec![run_with(find_suite(name)?, cases, seed, config)?])
    }
}

/// Re-runs a single recorded case.
pub fn replay(suite: &Suite, config: &SessionConfig, seed: u64, index: u64) -> Result<(Vec<Input>, Verdict)> {
    let env = env_for(suite, config)?;
    let inputs = case_inputs(suite, &env, seed, index);
    let verdict = evaluate(suite, &env, &inputs);
    Ok((inputs, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Series;

    fn buggy_check(_env: &Env, x: &[Input]) -> Result<Verdict> {
        // Wrongly claims every series has a nonnegative leading coefficient.
        let Input::Series(s) = &x[0] else { unreachable!() };
        Ok(match s.leading() {
            Some(l) if l.c.is_negative() => Verdict::Fail("negative leading coefficient".into()),
            _ => Verdict::Pass,
        })
    }

    fn gen_any(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
        vec![Input::Series(gen::gen_with(&env.spec, rng, env.ctx))]
    }

    static BUGGY: Suite = Suite {
        name: "buggy",
        summary: "deliberately wrong property",
        real: false,
        generate: gen_any,
        check: buggy_check,
    };

    #[test]
    fn failures_are_replayable() {
        let config = SessionConfig::default();
        let report = run_with(&BUGGY, 50, 7, &config).unwrap();
        assert!(report.failed > 0);
        let w = report.first_failure.clone().unwrap();
        let (inputs, verdict) = replay(&BUGGY, &config, 7, w.index).unwrap();
        assert!(matches!(verdict, Verdict::Fail(_)));
        let printed: Vec<String> = inputs.iter().map(|i| i.to_string()).collect();
        assert_eq!(printed, w.inputs);
        // The printed witness reparses to the same input.
        let s: Series = crate::parse::parse_series(&w.inputs[0], config.ctx()).unwrap();
        assert_eq!(Input::Series(s), inputs[0]);
    }

    #[test]
    fn runs_are_deterministic() {
        let config = SessionConfig::default();
        let a = run_suite("valuation", 30, 3, &config).unwrap();
        let b = run_suite("valuation", 30, 3, &config).unwrap();
        assert_eq!(a[0].to_json_value(false), b[0].to_json_value(false));
    }

    #[test]
    fn unknown_suite() {
        let config = SessionConfig::default();
        assert!(matches!(run_suite("nope", 1, 0, &config), Err(Error::UnknownSuite(_))));
    }
}
