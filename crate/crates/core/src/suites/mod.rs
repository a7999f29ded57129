//! Verification suites behind the `verify` subcommands. Each returns a
//! serializable report with one entry per check and an overall verdict.

mod analysis;
mod decomposition;
mod estimates;

use serde::Serialize;

pub use analysis::{
    besov_suite, comb_suite, heatchar_suite, CombReport, HeatCharEntry, HeatCharReport, SpikeRow, HEATCHAR_FAMILY,
};
pub use decomposition::lp_suite;
pub use estimates::{
    bernstein_family, bernstein_scales, bernstein_suite, bilinear_suite, BernsteinCase, BernsteinSuiteReport,
    BilinearSuiteReport,
};

/// A measured quantity against its bound.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    /// Measured value: an error, a ratio or a fitted constant.
    pub constant: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(check: impl Into<String>, constant: f64, bound: f64) -> Self {
        Self {
            check: check.into(),
            constant,
            bound,
            pass: constant <= bound,
        }
    }

    pub fn at_least(check: impl Into<String>, constant: f64, bound: f64) -> Self {
        Self {
            check: check.into(),
            constant,
            bound,
            pass: constant >= bound,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub dim: usize,
    pub points: Vec<usize>,
    pub seed: u64,
    pub trials: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    pub(crate) fn new(suite: &str, dim: usize, points: Vec<usize>, seed: u64, trials: u64, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            suite: suite.to_string(),
            dim,
            points,
            seed,
            trials,
            checks,
            pass,
        }
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Relative size `a / b`, or `a` itself when `b` vanishes.
pub(crate) fn relative(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a
    } else {
        a / b
    }
}
