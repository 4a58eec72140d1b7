use serde::{Deserialize, Serialize};

use super::admissibility::is_admissible;
use crate::error::{Error, Result};
use crate::model::{FibrationNumericalType, PluriFormula};

/// Longest audit series kept in a report, counting `P_0`.
pub const SERIES_CAP: u64 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    /// False when the values are lower bounds (base genus at least 1).
    pub exact: bool,
    pub p12: u64,
    /// `P_12 >= 2`.
    pub stmt1: bool,
    /// Least `n <= 4` with `P_n >= 1`.
    pub stmt2_witness: Option<u64>,
    /// Least `n <= 8` with `P_n >= 2`.
    pub stmt3_witness: Option<u64>,
    /// `P_n >= 2` for every `n >= 14`.
    pub stmt4: bool,
    /// First `n >= 14` with `P_n < 2`, when `stmt4` fails.
    pub first_tail_failure: Option<u64>,
    pub p13: u64,
    /// `P_0, P_1, ..., P_{14 + 2 lcm}`, cut at [`SERIES_CAP`] terms.
    pub series: Vec<u64>,
    pub series_truncated: bool,
}

impl MainTheoremReport {
    pub fn holds(&self) -> bool {
        self.stmt1 && self.stmt2_witness.is_some() && self.stmt3_witness.is_some() && self.stmt4
    }
}

/// Least `n` in `1..=limit` with `P_n >= target`.
pub fn first_n_reaching(formula: &PluriFormula, target: u64, limit: u64) -> Option<u64> {
    (1..=limit).find(|&n| formula.value(n) >= target)
}

/// Evaluates the four statements on a formula; the series is filled only
/// when `with_series` is set.
pub(crate) fn evaluate(
    formula: &PluriFormula,
    exact: bool,
    with_series: bool,
) -> MainTheoremReport {
    let p12 = formula.value(12);
    let first_tail_failure = formula.first_failure_from(14, 2);
    let (series, series_truncated) = if with_series {
        let wanted = 14 + 2 * formula.period() + 1;
        let len = wanted.min(SERIES_CAP);
        let series = (0..len)
            .map(|n| if n == 0 { 1 } else { formula.value(n) })
            .collect();
        (series, wanted > SERIES_CAP)
    } else {
        (Vec::new(), false)
    };
    MainTheoremReport {
        exact,
        p12,
        stmt1: p12 >= 2,
        stmt2_witness: first_n_reaching(formula, 1, 4),
        stmt3_witness: first_n_reaching(formula, 2, 8),
        stmt4: first_tail_failure.is_none(),
        first_tail_failure,
        p13: formula.value(13),
        series,
        series_truncated,
    }
}

/// The four statements evaluated on any type, admissible or not.
pub fn main_theorem_statements(ty: &FibrationNumericalType) -> MainTheoremReport {
    evaluate(&ty.formula(), ty.g == 0, true)
}

/// Checks the four statements on one admissible type. Over a base of
/// positive genus the values are lower bounds and the report says so.
pub fn verify_main_theorem(ty: &FibrationNumericalType) -> Result<MainTheoremReport> {
    let adm = is_admissible(ty);
    if !adm.admissible {
        return Err(Error::Inadmissible(
            adm.violations
                .iter()
                .map(|v| v.as_str().to_string())
                .collect(),
        ));
    }
    Ok(main_theorem_statements(ty))
}

/// `P_n >= target` for all `n >= threshold`, decided through the periodicity
/// of the floor terms.
pub fn verify_tail(ty: &FibrationNumericalType, threshold: u64, target: u64) -> bool {
    let formula = ty.formula();
    if threshold == 0 && target > 1 {
        return false;
    }
    formula.holds_from(threshold.max(1), target as i64)
}
