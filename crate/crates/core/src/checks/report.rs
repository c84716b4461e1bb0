//! Summaries of a suite run.

use std::fmt;

use serde::Serialize;

use super::suites::Input;
use crate::coeff::CoeffMode;
use crate::oexp::Verdict;

/// The first failing case of a run, with its inputs printed in the input
/// syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub index: u64,
    pub inputs: Vec<String>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    pub indeterminate: u64,
    pub seed: u64,
    pub mode: String,
    pub first_failure: Option<Witness>,
    /// Reason of the first indeterminate case, for diagnosis.
    pub first_indeterminate: Option<Witness>,
    pub wall_time_ms: u64,
}

impl CheckReport {
    pub fn new(suite: &str, seed: u64, mode: CoeffMode) -> Self {
        CheckReport {
            suite: suite.to_string(),
            cases: 0,
            passed: 0,
            failed: 0,
            indeterminate: 0,
            seed,
            mode: mode.to_string(),
            first_failure: None,
            first_indeterminate: None,
            wall_time_ms: 0,
        }
    }

    pub fn record(&mut self, index: u64, inputs: &[Input], verdict: Verdict) {
        self.cases += 1;
        let witness = |reason: String| Witness {
            index,
            inputs: inputs.iter().map(|i| i.to_string()).collect(),
            reason,
        };
        match verdict {
            Verdict::Pass => self.passed += 1,
            Verdict::Fail(reason) => {
                self.failed += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(witness(reason));
                }
            }
            Verdict::Indeterminate(reason) => {
                self.indeterminate += 1;
                if self.first_indeterminate.is_none() {
                    self.first_indeterminate = Some(witness(reason));
                }
            }
        }
    }

    pub fn is_green(&self) -> bool {
        self.failed == 0
    }

    /// Fraction of cases that were indeterminate.
    pub fn indeterminate_rate(&self) -> f64 {
        if self.cases == 0 {
            0.0
        } else {
            self.indeterminate as f64 / self.cases as f64
        }
    }

    /// JSON form; wall time is included only on request so that output is
    /// reproducible byte for byte.
    pub fn to_json_value(&self, with_time: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !with_time {
            if let Some(obj) = v.as_object_mut() {
                obj.remove("wall_time_ms");
            }
        }
        v
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite {} ({}, seed {}): {} cases, {} passed, {} failed, {} indeterminate",
            self.suite, self.mode, self.seed, self.cases, self.passed, self.failed, self.indeterminate
        )?;
        if let Some(w) = &self.first_failure {
            write!(f, "\n  first failure: case {}: {}", w.index, w.reason)?;
            for (i, input) in w.inputs.iter().enumerate() {
                write!(f, "\n    input {}: {}", i, input)?;
            }
        }
        Ok(())
    }
}
