//! Pass/fail reports produced by every identity check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::qseries::{BiSeries, FracSeries, PowerSeries};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Where two sides of an identity first disagree. `exp` is the exponent
/// (or a short label such as `"z^3 q^1/2"` for bivariate checks).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub exp: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub order: Value,
    pub status: Status,
    pub first_failure: Option<Failure>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, order: impl Into<Value>) -> Self {
        Self {
            check: check.into(),
            params: BTreeMap::new(),
            order: order.into(),
            status: Status::Pass,
            first_failure: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn param_rat(self, key: &str, value: &Rational) -> Self {
        self.param(key, rational::to_string(value))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records a failure unless one is already recorded.
    pub fn fail(&mut self, exp: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) {
        if self.first_failure.is_none() {
            self.first_failure = Some(Failure {
                exp: exp.into(),
                lhs: lhs.into(),
                rhs: rhs.into(),
            });
        }
        self.status = Status::Fail;
    }

    /// Fails with `what` when `cond` is false.
    pub fn require(&mut self, cond: bool, what: &str, lhs: impl ToString, rhs: impl ToString) {
        if !cond {
            self.fail(what, lhs.to_string(), rhs.to_string());
        }
    }

    pub fn fail_error(&mut self, err: &Error) {
        self.fail("error", err.to_string(), "");
    }

    /// Folds a fallible sub-step into the report.
    pub fn absorb<T>(&mut self, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail_error(&e);
                None
            }
        }
    }

    pub fn compare_rat(&mut self, label: &str, lhs: &Rational, rhs: &Rational) {
        if lhs != rhs {
            self.fail(label, rational::to_string(lhs), rational::to_string(rhs));
        }
    }

    /// Compares two power series through their common known window; `tag`
    /// prefixes the exponent in the failure record.
    pub fn compare_power(&mut self, tag: &str, lhs: &PowerSeries, rhs: &PowerSeries) {
        if let Some((n, a, b)) = lhs.first_difference(rhs) {
            self.fail(
                format!("{tag}z^{n}"),
                rational::to_string(&a),
                rational::to_string(&b),
            );
        }
    }

    pub fn compare_frac(&mut self, tag: &str, lhs: &FracSeries, rhs: &FracSeries) {
        match lhs.first_difference(rhs) {
            Ok(None) => {}
            Ok(Some((e, a, b))) => self.fail(
                format!("{tag}q^{}", rational::to_string(&e)),
                rational::to_string(&a),
                rational::to_string(&b),
            ),
            Err(e) => self.fail_error(&e),
        }
    }

    pub fn compare_bi(&mut self, tag: &str, lhs: &BiSeries, rhs: &BiSeries) {
        match lhs.first_difference(rhs) {
            Ok(None) => {}
            Ok(Some((z, e, a, b))) => self.fail(
                format!("{tag}z^{z} q^{}", rational::to_string(&e)),
                rational::to_string(&a),
                rational::to_string(&b),
            ),
            Err(e) => self.fail_error(&e),
        }
    }

    /// Merges a sub-report: the first failure wins.
    pub fn merge(&mut self, other: &CheckReport) {
        if let Some(f) = &other.first_failure {
            self.fail(
                format!("{}: {}", other.check, f.exp),
                f.lhs.clone(),
                f.rhs.clone(),
            );
        } else if !other.passed() {
            self.fail(other.check.clone(), "fail", "pass");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_is_kept() {
        let mut r = CheckReport::new("demo", 3).param("p", 3);
        assert!(r.passed());
        r.fail("q^1", "1", "2");
        r.fail("q^2", "3", "4");
        assert_eq!(r.first_failure.as_ref().unwrap().exp, "q^1");
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"status\":\"fail\""));
    }
}
