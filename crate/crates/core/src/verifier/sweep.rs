//! Depth-first sweep over fibre multisets.
//!
//! Adding a fibre adds a non-negative floor term, so every `P_n` (and every
//! lower bound used off `P^1`) can only grow along a branch. When a prefix
//! already has positive slope, some `P_n >= 1` with `n <= 3`, some
//! `P_n >= 2` with `n <= 7`, `P_12, P_13 >= 2` and `P_n >= 2` for all
//! `n >= 14`, every completion satisfies the four statements with witnesses
//! at most 3 and 7 and `P_13 >= 2`. Such a subtree can neither hold a
//! counterexample nor a sharp case nor move the extremes above 3 and 7,
//! and is skipped when `prune_dominated` is set.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cases::{assign_case, replay_case_bound, CaseReplay};
use super::enumerate::{admissible_type, fibre_kinds, slices, EnumerationBounds, Slice};
use super::theorem::{evaluate, MainTheoremReport};
use crate::error::{Error, Result};
use crate::model::{formula_for, FibrationNumericalType, FibreDatum, PluriFormula, Rational};

fn dominated(formula: &PluriFormula) -> bool {
    formula.slope() > Rational::from_integer(0)
        && formula.value(12) >= 2
        && formula.value(13) >= 2
        && (1..=3).any(|n| formula.value(n) >= 1)
        && (1..=7).any(|n| formula.value(n) >= 2)
        && formula.holds_from(14, 2)
}

/// Canonical order `(p, g, chi, t, r, fibres)`, elliptic first.
fn order_key(ty: &FibrationNumericalType) -> impl Ord + '_ {
    (
        ty.p,
        ty.g,
        ty.chi,
        ty.torsion_length(),
        ty.fibres.len(),
        &ty.fibres,
        ty.quasi_elliptic,
    )
}

fn sort_types(v: &mut [FibrationNumericalType]) {
    v.sort_by(|a, b| order_key(a).cmp(&order_key(b)));
}

trait Visitor: Send {
    fn visit(&mut self, ty: FibrationNumericalType);
    fn pruned(&mut self);
}

struct Walk<'a, V> {
    slice: Slice,
    bounds: &'a EnumerationBounds,
    kinds: Vec<FibreDatum>,
    visitor: V,
}

impl<V: Visitor> Walk<'_, V> {
    fn dfs(&mut self, start: usize, prefix: &mut Vec<FibreDatum>, t_sum: u32) {
        if t_sum == self.slice.t {
            for &quasi in self.slice.quasi_flags(self.bounds) {
                if let Some(ty) = admissible_type(&self.slice, quasi, prefix.clone()) {
                    self.visitor.visit(ty);
                }
            }
        }
        if prefix.len() == self.bounds.max_fibres {
            return;
        }
        if self.bounds.prune_dominated {
            let formula = formula_for(self.slice.g, self.slice.chi, self.slice.t as i64, prefix);
            if dominated(&formula) {
                self.visitor.pruned();
                return;
            }
        }
        for k in start..self.kinds.len() {
            let kind = self.kinds[k];
            if t_sum + kind.t > self.slice.t {
                continue;
            }
            prefix.push(kind);
            self.dfs(k, prefix, t_sum + kind.t);
            prefix.pop();
        }
    }
}

/// Runs one visitor per slice in parallel and merges the results.
fn sweep<V, F, M>(bounds: &EnumerationBounds, make: F, merge: M) -> Result<V>
where
    V: Visitor,
    F: Fn() -> V + Sync,
    M: Fn(V, V) -> V + Sync,
{
    let slices = slices(bounds)?;
    Ok(slices
        .par_iter()
        .map(|&slice| {
            let mut walk = Walk {
                slice,
                bounds,
                kinds: fibre_kinds(slice.p, bounds, slice.t),
                visitor: make(),
            };
            walk.dfs(0, &mut Vec::new(), 0);
            walk.visitor
        })
        .reduce(&make, &merge))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(rename = "type")]
    pub ty: FibrationNumericalType,
    pub report: MainTheoremReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReplayFailure {
    #[serde(rename = "type")]
    pub ty: FibrationNumericalType,
    pub replay: CaseReplay,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremes {
    /// Largest `min { n : P_n >= 1 }` over visited types.
    pub max_first_nonzero: u64,
    pub max_first_nonzero_types: Vec<FibrationNumericalType>,
    /// Largest `min { n : P_n >= 2 }` over visited types.
    pub max_first_ge2: u64,
    pub max_first_ge2_types: Vec<FibrationNumericalType>,
    pub p13_at_most_one: Vec<FibrationNumericalType>,
    /// True when pruning cannot have hidden a larger value.
    pub exact: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub bounds: EnumerationBounds,
    /// Admissible types evaluated one by one.
    pub visited_types: u64,
    /// Subtrees skipped as dominated.
    pub pruned_subtrees: u64,
    pub counterexamples: Vec<Counterexample>,
    pub cases: BTreeMap<String, u64>,
    pub existence_unknown: u64,
    /// Types whose case bound was compared with the exact `P_n`.
    pub case_replay_checked: u64,
    pub case_replay_failures: Vec<CaseReplayFailure>,
    /// Types for which the hand argument states no bound.
    pub case_uncovered: Vec<CaseReplayFailure>,
    pub extremes: Extremes,
}

impl SweepReport {
    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.visited_types += other.visited_types;
        self.pruned_subtrees += other.pruned_subtrees;
        self.counterexamples.extend(other.counterexamples);
        for (k, v) in other.cases {
            *self.cases.entry(k).or_default() += v;
        }
        self.existence_unknown += other.existence_unknown;
        self.case_replay_checked += other.case_replay_checked;
        self.case_replay_failures.extend(other.case_replay_failures);
        self.case_uncovered.extend(other.case_uncovered);
        let (a, b) = (&mut self.extremes, other.extremes);
        merge_max(
            &mut a.max_first_nonzero,
            &mut a.max_first_nonzero_types,
            b.max_first_nonzero,
            b.max_first_nonzero_types,
        );
        merge_max(
            &mut a.max_first_ge2,
            &mut a.max_first_ge2_types,
            b.max_first_ge2,
            b.max_first_ge2_types,
        );
        a.p13_at_most_one.extend(b.p13_at_most_one);
        self
    }

    fn finish(mut self, bounds: &EnumerationBounds) -> SweepReport {
        self.bounds = bounds.clone();
        self.counterexamples
            .sort_by(|a, b| order_key(&a.ty).cmp(&order_key(&b.ty)));
        self.case_replay_failures
            .sort_by(|a, b| order_key(&a.ty).cmp(&order_key(&b.ty)));
        self.case_uncovered
            .sort_by(|a, b| order_key(&a.ty).cmp(&order_key(&b.ty)));
        let e = &mut self.extremes;
        sort_types(&mut e.max_first_nonzero_types);
        sort_types(&mut e.max_first_ge2_types);
        sort_types(&mut e.p13_at_most_one);
        e.exact = self.pruned_subtrees == 0 || (e.max_first_nonzero >= 3 && e.max_first_ge2 >= 7);
        self
    }
}

fn merge_max(
    best: &mut u64,
    types: &mut Vec<FibrationNumericalType>,
    value: u64,
    more: Vec<FibrationNumericalType>,
) {
    if value > *best {
        *best = value;
        *types = more;
    } else if value == *best {
        types.extend(more);
    }
}

fn first_reaching(formula: &PluriFormula, target: u64) -> u64 {
    // Terminates: admissible types have positive slope.
    (1..)
        .find(|&n| formula.value(n) >= target)
        .expect("positive slope")
}

impl Visitor for SweepReport {
    fn visit(&mut self, ty: FibrationNumericalType) {
        self.visited_types += 1;
        let formula = ty.formula();
        let report = evaluate(&formula, ty.g == 0, false);
        *self
            .cases
            .entry(assign_case(&ty).as_str().to_string())
            .or_default() += 1;
        if ty.existence_unknown {
            self.existence_unknown += 1;
        }
        if let Some(replay) = replay_case_bound(&ty) {
            self.case_replay_checked += 1;
            if !replay.covered {
                self.case_uncovered.push(CaseReplayFailure {
                    ty: ty.clone(),
                    replay,
                });
            } else if !replay.holds() {
                self.case_replay_failures.push(CaseReplayFailure {
                    ty: ty.clone(),
                    replay,
                });
            }
        }
        let e = &mut self.extremes;
        let n1 = first_reaching(&formula, 1);
        merge_max(
            &mut e.max_first_nonzero,
            &mut e.max_first_nonzero_types,
            n1,
            vec![ty.clone()],
        );
        let n2 = first_reaching(&formula, 2);
        merge_max(
            &mut e.max_first_ge2,
            &mut e.max_first_ge2_types,
            n2,
            vec![ty.clone()],
        );
        if report.p13 <= 1 {
            e.p13_at_most_one.push(ty.clone());
        }
        if !report.holds() {
            let report = evaluate(&formula, ty.g == 0, true);
            self.counterexamples.push(Counterexample { ty, report });
        }
    }

    fn pruned(&mut self) {
        self.pruned_subtrees += 1;
    }
}

/// Checks the four statements on every admissible type within the bounds.
/// The report does not depend on how rayon splits the work.
pub fn verify_all(bounds: &EnumerationBounds) -> Result<SweepReport> {
    let report = sweep(bounds, SweepReport::default, SweepReport::merge)?;
    Ok(report.finish(bounds))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharpPredicate {
    /// `P_1 = P_2 = P_3 = 0`.
    P123Zero,
    /// `P_n <= 1` for `n = 1..=7`.
    PnLe1Through7,
    /// `P_13 = 1`.
    P13EqualsOne,
}

impl SharpPredicate {
    pub fn matches(self, formula: &PluriFormula) -> bool {
        match self {
            SharpPredicate::P123Zero => (1..=3).all(|n| formula.value(n) == 0),
            SharpPredicate::PnLe1Through7 => (1..=7).all(|n| formula.value(n) <= 1),
            SharpPredicate::P13EqualsOne => formula.value(13) == 1,
        }
    }
}

impl FromStr for SharpPredicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p123-zero" => Ok(SharpPredicate::P123Zero),
            "pn-le-1-through-7" => Ok(SharpPredicate::PnLe1Through7),
            "p13-equals-1" => Ok(SharpPredicate::P13EqualsOne),
            other => Err(Error::UnknownPredicate(other.to_string())),
        }
    }
}

struct SharpCollector {
    predicate: SharpPredicate,
    found: Vec<FibrationNumericalType>,
}

impl Visitor for SharpCollector {
    fn visit(&mut self, ty: FibrationNumericalType) {
        // Only exact values can be sharp.
        if ty.g == 0 && self.predicate.matches(&ty.formula()) {
            self.found.push(ty);
        }
    }

    fn pruned(&mut self) {}
}

/// Admissible types over `P^1` within the bounds where the named estimate
/// is attained.
pub fn find_sharp_cases(
    bounds: &EnumerationBounds,
    predicate: &str,
) -> Result<Vec<FibrationNumericalType>> {
    let predicate: SharpPredicate = predicate.parse()?;
    let make = || SharpCollector {
        predicate,
        found: Vec::new(),
    };
    let mut out = sweep(bounds, make, |mut a, b| {
        a.found.extend(b.found);
        a
    })?
    .found;
    sort_types(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[FibrationNumericalType]) -> Vec<String> {
        v.iter().map(|t| t.label()).collect()
    }

    #[test]
    fn p13_equals_one_in_tame_case4() {
        let found =
            find_sharp_cases(&EnumerationBounds::tame_case4(20, 5), "p13-equals-1").unwrap();
        assert_eq!(labels(&found), vec!["(2,6,6)"]);
    }

    #[test]
    fn p123_zero_in_tame_case4() {
        let found = find_sharp_cases(&EnumerationBounds::tame_case4(14, 4), "p123-zero").unwrap();
        let mut got = labels(&found);
        got.sort();
        let mut want: Vec<String> = [
            "(2,5,10)",
            "(2,7,14)",
            "(2,6,6)",
            "(2,8,8)",
            "(2,10,10)",
            "(2,12,12)",
            "(2,14,14)",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn unknown_predicate() {
        let err = find_sharp_cases(&EnumerationBounds::tame_case4(6, 3), "p0-zero").unwrap_err();
        assert_eq!(err, Error::UnknownPredicate("p0-zero".into()));
    }

    #[test]
    fn small_sweep_has_no_counterexamples() {
        let report = verify_all(&EnumerationBounds::tame_case4(16, 4)).unwrap();
        assert!(report.counterexamples.is_empty());
        assert_eq!(report.extremes.max_first_nonzero, 4);
        assert_eq!(report.extremes.max_first_ge2, 8);
        assert!(labels(&report.extremes.max_first_ge2_types).contains(&"(2,5,10)".to_string()));
        assert!(report.case_replay_failures.is_empty());
    }

    #[test]
    fn pruning_preserves_the_report() {
        let plain = EnumerationBounds {
            max_mult: 8,
            max_fibres: 4,
            max_chi_plus_t: 2,
            characteristics: vec![0, 2, 3],
            max_genus: 1,
            prune_dominated: false,
            ..EnumerationBounds::default()
        };
        let pruned = EnumerationBounds {
            prune_dominated: true,
            ..plain.clone()
        };
        let a = verify_all(&plain).unwrap();
        let b = verify_all(&pruned).unwrap();
        assert!(b.pruned_subtrees > 0);
        assert!(b.visited_types < a.visited_types);
        assert_eq!(a.counterexamples, b.counterexamples);
        assert_eq!(a.extremes.max_first_nonzero, b.extremes.max_first_nonzero);
        assert_eq!(a.extremes.max_first_ge2, b.extremes.max_first_ge2);
        assert_eq!(a.extremes.p13_at_most_one, b.extremes.p13_at_most_one);
        for pred in ["p123-zero", "pn-le-1-through-7", "p13-equals-1"] {
            assert_eq!(
                find_sharp_cases(&plain, pred).unwrap(),
                find_sharp_cases(&pruned, pred).unwrap()
            );
        }
    }
}
