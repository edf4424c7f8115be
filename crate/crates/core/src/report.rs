//! Bound-check reports shared by every experiment.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Number of standard errors allowed between an estimate and its bound.
pub const SIGMA_SLACK: f64 = 3.0;

/// Absolute slack for floating-point roundoff, relative to `max(1, |bound|)`.
pub const ROUNDOFF_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `mean ≤ bound`.
    Upper,
    /// `mean ≥ bound`.
    Lower,
    /// `|mean − bound|` within the slack.
    Equal,
}

fn mc_pass(check: CheckKind, mean: f64, std_error: f64, bound: f64) -> bool {
    let slack = SIGMA_SLACK * std_error + ROUNDOFF_SLACK * bound.abs().max(1.0);
    mean.is_finite()
        && match check {
            CheckKind::Upper => mean <= bound + slack,
            CheckKind::Lower => mean >= bound - slack,
            CheckKind::Equal => (mean - bound).abs() <= slack,
        }
}

/// One checked inequality or identity: an estimate of an expectation, its
/// standard error and the value it is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub experiment: String,
    pub params: Map<String, Value>,
    pub empirical_mean: f64,
    pub std_error: f64,
    pub bound: f64,
    pub n_reps: u64,
    pub check: CheckKind,
    pub pass: bool,
    /// The inequality being checked, in words.
    pub tag: String,
}

impl BoundReport {
    /// Monte Carlo report; passes when the estimate is within three standard
    /// errors of the allowed side of the bound.
    pub fn monte_carlo(
        experiment: &str,
        tag: &str,
        params: Map<String, Value>,
        check: CheckKind,
        mean: f64,
        std_error: f64,
        bound: f64,
        n_reps: u64,
    ) -> Self {
        let pass = mc_pass(check, mean, std_error, bound);
        Self {
            experiment: experiment.into(),
            params,
            empirical_mean: mean,
            std_error,
            bound,
            n_reps,
            check,
            pass,
            tag: tag.into(),
        }
    }

    /// Report for a comparison decided in exact arithmetic; the floats are
    /// for display only.
    pub fn exact(
        experiment: &str,
        tag: &str,
        params: Map<String, Value>,
        check: CheckKind,
        value: f64,
        bound: f64,
        holds: bool,
    ) -> Self {
        Self {
            experiment: experiment.into(),
            params,
            empirical_mean: value,
            std_error: 0.0,
            bound,
            n_reps: 0,
            check,
            pass: holds,
            tag: tag.into(),
        }
    }

    /// The same report against a bound tightened by `factor < 1`: upper
    /// bounds are scaled by `factor`, lower bounds by `1/factor`, identities
    /// by `factor`. The pass flag is recomputed in floating point.
    pub fn tightened(mut self, factor: f64) -> Self {
        if factor == 1.0 {
            return self;
        }
        self.bound = match self.check {
            CheckKind::Upper | CheckKind::Equal => self.bound * factor,
            CheckKind::Lower => self.bound / factor,
        };
        self.pass = mc_pass(self.check, self.empirical_mean, self.std_error, self.bound);
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Builds a parameter map from `key => value` pairs.
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = serde_json::Map::new();
        $( m.insert($k.to_string(), serde_json::json!($v)); )*
        m
    }};
}
