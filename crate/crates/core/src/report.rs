//! Shared report types for truncated numerical criteria.
//!
//! Every predicate in this crate that can only be probed at a finite
//! truncation reports its verdict together with the truncation, the method
//! used, and the tolerance that was actually applied, so a verdict can be
//! audited after the fact.

use serde::Serialize;
use std::fmt;

/// Outcome of a truncated criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails => write!(f, "fails"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// How the reported estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "closed-form")]
    ClosedForm,
    #[serde(rename = "truncated-sup")]
    TruncatedSup,
    #[serde(rename = "truncated-sup-with-limit-extrapolation")]
    TruncatedSupWithLimitExtrapolation,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::ClosedForm => write!(f, "closed-form"),
            Method::TruncatedSup => write!(f, "truncated-sup"),
            Method::TruncatedSupWithLimitExtrapolation => {
                write!(f, "truncated-sup-with-limit-extrapolation")
            }
        }
    }
}

/// Truncation parameters a criterion was evaluated at.
///
/// `n_max` is the outer index bound (block count, grid rows, ...); `k_max`
/// is the inner depth bound.  Criteria with a single truncation parameter
/// set `n_max` to it and leave `k_max` at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub n_max: u64,
    pub k_max: u64,
}

impl Truncation {
    pub fn new(n_max: u64, k_max: u64) -> Self {
        Truncation { n_max, k_max }
    }

    pub fn single(k: u64) -> Self {
        Truncation { n_max: k, k_max: 0 }
    }
}

/// Verdict plus the evidence it rests on.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    /// Name of the predicate that was tested.
    pub criterion: String,
    /// Label of the object (weight or Orlicz function) it was tested on.
    pub subject: String,
    pub verdict: Verdict,
    /// The scalar the decision rule was applied to.
    pub estimate: f64,
    pub truncation: Truncation,
    pub method: Method,
    /// Tolerance (or decision threshold) actually used.
    pub tolerance: f64,
    pub notes: String,
}

impl CriterionReport {
    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    pub fn is_inconclusive(&self) -> bool {
        self.verdict == Verdict::Inconclusive
    }
}

/// Two-sided decision against a scalar threshold.
///
/// When the estimate comes from a truncated computation and lands inside the
/// band around the threshold, the verdict is forced to `Inconclusive`; a
/// closed-form estimate is trusted at face value.
pub fn banded_verdict(
    holds_above: bool,
    estimate: f64,
    threshold: f64,
    band: f64,
    method: Method,
) -> Verdict {
    if method != Method::ClosedForm && (estimate - threshold).abs() <= band {
        return Verdict::Inconclusive;
    }
    let above = estimate > threshold;
    if above == holds_above {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn banded_verdict_forces_inconclusive_inside_band() {
        let v = banded_verdict(true, 1.0005, 1.0, 1e-2, Method::TruncatedSup);
        assert_eq!(v, Verdict::Inconclusive);
        let v = banded_verdict(true, 1.0005, 1.0, 1e-2, Method::ClosedForm);
        assert_eq!(v, Verdict::Holds);
        let v = banded_verdict(true, 0.5, 1.0, 1e-2, Method::TruncatedSup);
        assert_eq!(v, Verdict::Fails);
    }

    #[test]
    fn serializes_with_spec_level_names() {
        let rep = CriterionReport {
            criterion: "demo".into(),
            subject: "w".into(),
            verdict: Verdict::Inconclusive,
            estimate: 0.5,
            truncation: Truncation::new(4, 100),
            method: Method::TruncatedSupWithLimitExtrapolation,
            tolerance: 1e-3,
            notes: String::new(),
        };
        let js = serde_json::to_string(&rep).unwrap();
        assert!(js.contains("\"inconclusive\""));
        assert!(js.contains("truncated-sup-with-limit-extrapolation"));
        assert!(js.contains("\"n_max\":4"));
    }
}
