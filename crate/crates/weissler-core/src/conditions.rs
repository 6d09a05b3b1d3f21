//! Moment-sequence conditions controlling the contractive inequalities.
//!
//! Each check reports a margin per index — left side minus right side of
//! the condition, so positive means satisfied — along with the first index
//! (if any) where the margin dips below the reporting tolerance. Margins
//! are differences rather than ratios so violation sizes are comparable
//! across indices.

use crate::analytic::InequalityVerdict;
use crate::bernoulli::series_s;
use crate::error::{Error, Result};
use crate::weights::MomentSequence;

/// Default slack when classifying a margin as a violation: equality cases
/// (e.g. every classical weight under the ratio condition) must not trip on
/// rounding noise.
pub const DEFAULT_TOL_REPORT: f64 = 1e-10;

/// The conditions this module knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionName {
    /// `h_{2m}/h_{2(m−1)} ≥ (m/(m+1))·h_{2(m+1)}/h_{2m}` — the hypothesis
    /// of the fixed-dilation contraction theorem.
    WeakCondition,
    /// The stronger ratio condition with the extra middle term, under which
    /// the full family of powers is contractive.
    StrongCondition,
    /// `h_{2n}·ln S(1) ≥ h_{2(n+1)}/(n+1)` — the series-logarithm
    /// inequality the induction in the contraction proof rests on.
    Lemma2Inequality,
    /// `h_4 ≤ 2h_2²/(h_2+1)` — the base case of that induction.
    H4Bound,
    /// `h_{2k}² ≤ h_{2(k−1)}·h_{2(k+1)}` — log-convexity of the even
    /// moments, a consequence of the Cauchy–Schwarz inequality.
    CauchyLower,
}

impl ConditionName {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionName::WeakCondition => "weak_condition",
            ConditionName::StrongCondition => "strong_condition",
            ConditionName::Lemma2Inequality => "lemma2_inequality",
            ConditionName::H4Bound => "h4_bound",
            ConditionName::CauchyLower => "cauchy_lower",
        }
    }
}

impl std::fmt::Display for ConditionName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of checking one condition across a moment sequence.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub condition_name: ConditionName,
    /// `margins[i]` is the margin at index `i + 1`; positive = satisfied.
    pub margins: Vec<f64>,
    /// Smallest index whose margin is below `−tol_report`, if any.
    pub first_violation: Option<usize>,
    /// Largest index checked.
    pub holds_up_to: usize,
}

impl ConditionReport {
    fn from_margins(
        condition_name: ConditionName,
        margins: Vec<f64>,
        tol_report: f64,
    ) -> Self {
        let first_violation = margins
            .iter()
            .position(|&m| m < -tol_report)
            .map(|i| i + 1);
        let holds_up_to = margins.len();
        Self {
            condition_name,
            margins,
            first_violation,
            holds_up_to,
        }
    }

    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }

    /// Margin at sequence index `m` (1-based, matching the condition).
    pub fn margin_at(&self, m: usize) -> Option<f64> {
        if m >= 1 {
            self.margins.get(m - 1).copied()
        } else {
            None
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "condition": self.condition_name.as_str(),
            "margins": self.margins,
            "first_violation": self.first_violation,
        })
    }
}

fn validate_tol_report(tol_report: f64) -> Result<()> {
    if !(tol_report.is_finite() && tol_report >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "reporting tolerance must be a finite real ≥ 0, got {tol_report}"
        )));
    }
    Ok(())
}

fn require_len_2(h: &MomentSequence) -> Result<()> {
    if h.max_index() < 2 {
        return Err(Error::SequenceTooShort {
            required: 2,
            available: h.max_index(),
        });
    }
    Ok(())
}

/// Checks `h_{2m}/h_{2(m−1)} − (m/(m+1))·h_{2(m+1)}/h_{2m} ≥ 0` for every
/// index `1 ≤ m ≤ N−1`.
pub fn check_weak_condition(h: &MomentSequence, tol_report: f64) -> Result<ConditionReport> {
    validate_tol_report(tol_report)?;
    require_len_2(h)?;
    let margins = (1..h.max_index())
        .map(|m| {
            let frac = m as f64 / (m + 1) as f64;
            h.h(m) / h.h(m - 1) - frac * h.h(m + 1) / h.h(m)
        })
        .collect();
    Ok(ConditionReport::from_margins(
        ConditionName::WeakCondition,
        margins,
        tol_report,
    ))
}

/// Checks the three-term ratio condition
/// `h_{2m}/h_{2(m−1)} − h_{2(m+1)}/((m+1)·h_{2(m−1)}) − (m/(m+1))·h_{2(m+1)}/h_{2m} ≥ 0`
/// for `1 ≤ m ≤ N−1`. Classical weights sit exactly on the equality case.
pub fn check_strong_condition(h: &MomentSequence, tol_report: f64) -> Result<ConditionReport> {
    validate_tol_report(tol_report)?;
    require_len_2(h)?;
    let margins = (1..h.max_index())
        .map(|m| {
            let frac = m as f64 / (m + 1) as f64;
            h.h(m) / h.h(m - 1)
                - h.h(m + 1) / ((m + 1) as f64 * h.h(m - 1))
                - frac * h.h(m + 1) / h.h(m)
        })
        .collect();
    Ok(ConditionReport::from_margins(
        ConditionName::StrongCondition,
        margins,
        tol_report,
    ))
}

/// Log-convexity margins `h_{2(k−1)}·h_{2(k+1)} − h_{2k}²` for
/// `1 ≤ k ≤ N−1`; these are nonnegative for every genuine weight, so a
/// violation beyond quadrature error flags a broken sequence.
pub fn check_cauchy_lower(h: &MomentSequence, tol_report: f64) -> Result<ConditionReport> {
    validate_tol_report(tol_report)?;
    require_len_2(h)?;
    Ok(ConditionReport::from_margins(
        ConditionName::CauchyLower,
        h.cauchy_margins(),
        tol_report,
    ))
}

/// Verdict on `h_4 ≤ 2h_2²/(h_2+1)`, the base step of the contraction
/// induction (the ratio condition at its first index implies it).
pub fn check_h4_bound(h: &MomentSequence) -> Result<InequalityVerdict> {
    require_len_2(h)?;
    let h2 = h.h(1);
    let h4 = h.h(2);
    let rhs = 2.0 * h2 * h2 / (h2 + 1.0);
    // d(rhs)/d(h2) = 2h2(h2+2)/(h2+1)² ≤ 3/2 on (0, 1].
    let bound = h.error_bound(2)
        + 1.5 * h.error_bound(1)
        + f64::EPSILON * 8.0 * (h4.abs() + rhs.abs());
    Ok(InequalityVerdict::new(h4, rhs, bound))
}

/// Checks `h_{2n}·ln S(1) ≥ h_{2(n+1)}/(n+1)` for `1 ≤ n ≤ N−1`, with the
/// series logarithm evaluated to `series_tol`. Fails with the required
/// series length when the sequence cannot certify that tolerance.
pub fn check_lemma2_inequality(h: &MomentSequence, series_tol: f64) -> Result<ConditionReport> {
    require_len_2(h)?;
    let s1 = series_s(1.0, h, series_tol)?;
    let log_s1 = s1.value.ln();
    let margins = (1..h.max_index())
        .map(|n| h.h(n) * log_s1 - h.h(n + 1) / (n + 1) as f64)
        .collect();
    Ok(ConditionReport::from_margins(
        ConditionName::Lemma2Inequality,
        margins,
        DEFAULT_TOL_REPORT,
    ))
}
