use std::fmt;

use serde::{Deserialize, Serialize};

use crate::congruence::check_all_u;
use crate::fibre::{admissible_coefficients, torsion_length_realizable};
use crate::model::{FibrationNumericalType, FibreDatum, Rational};

/// A named rule a numerical type can break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Violation {
    #[serde(rename = "chi-negative")]
    ChiNegative,
    #[serde(rename = "tame-torsion-order")]
    TameTorsionOrder,
    #[serde(rename = "torsion-divisibility")]
    TorsionDivisibility,
    #[serde(rename = "wild-in-char-zero")]
    WildInCharZero,
    #[serde(rename = "wild-power-relation")]
    WildPowerRelation,
    #[serde(rename = "wild-jump-profile")]
    WildJumpProfile,
    #[serde(rename = "slope-nonpositive")]
    SlopeNonpositive,
    #[serde(rename = "tame-coefficient")]
    TameCoefficient,
    #[serde(rename = "wild-coefficient")]
    WildCoefficient,
    #[serde(rename = "quasi-elliptic-char")]
    QuasiEllipticChar,
    #[serde(rename = "quasi-elliptic-chi0-base-P1")]
    QuasiEllipticChi0BaseP1,
    #[serde(rename = "condition-U")]
    ConditionU,
}

impl Violation {
    pub fn as_str(self) -> &'static str {
        match self {
            Violation::ChiNegative => "chi-negative",
            Violation::TameTorsionOrder => "tame-torsion-order",
            Violation::TorsionDivisibility => "torsion-divisibility",
            Violation::WildInCharZero => "wild-in-char-zero",
            Violation::WildPowerRelation => "wild-power-relation",
            Violation::WildJumpProfile => "wild-jump-profile",
            Violation::SlopeNonpositive => "slope-nonpositive",
            Violation::TameCoefficient => "tame-coefficient",
            Violation::WildCoefficient => "wild-coefficient",
            Violation::QuasiEllipticChar => "quasi-elliptic-char",
            Violation::QuasiEllipticChi0BaseP1 => "quasi-elliptic-chi0-base-P1",
            Violation::ConditionU => "condition-U",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Broken rules, each listed once, in checking order.
    pub violations: Vec<Violation>,
    /// Set when some fibre has `t >= 3`, where only `nu | a + 1` is enforced.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub imprecise: bool,
}

/// Local rules for one fibre. Returns whether the local data is consistent
/// enough for the coefficient rule to be asked.
fn local_violations(f: &FibreDatum, p: u32, out: &mut Vec<Violation>) -> bool {
    let before = out.len();
    if f.t == 0 {
        if f.nu != f.m || f.e != 0 {
            out.push(Violation::TameTorsionOrder);
        }
        if (f.a + 1) % f.nu != 0 {
            out.push(Violation::TorsionDivisibility);
        }
        return out.len() == before;
    }
    if f.m % f.nu != 0 || (f.a + 1) % f.nu != 0 {
        out.push(Violation::TorsionDivisibility);
    }
    if p == 0 {
        out.push(Violation::WildInCharZero);
        return false;
    }
    let power_ok = f.e >= 1
        && (p as u64)
            .checked_pow(f.e)
            .and_then(|q| q.checked_mul(f.nu))
            == Some(f.m);
    if !power_ok {
        out.push(Violation::WildPowerRelation);
    }
    if f.m % f.nu == 0 && !torsion_length_realizable(f.m, f.nu, f.t) {
        out.push(Violation::WildJumpProfile);
    }
    out.len() == before
}

fn push_once(out: &mut Vec<Violation>, v: Violation) {
    if !out.contains(&v) {
        out.push(v);
    }
}

/// Checks every rule a numerical type must satisfy to come from a
/// fibration of Kodaira dimension one.
pub fn is_admissible(ty: &FibrationNumericalType) -> AdmissibilityReport {
    let p = ty.p.get();
    let mut violations = Vec::new();
    let mut imprecise = false;

    if ty.chi < 0 {
        violations.push(Violation::ChiNegative);
    }

    let mut local_ok = vec![true; ty.fibres.len()];
    for (ok, f) in local_ok.iter_mut().zip(&ty.fibres) {
        let mut found = Vec::new();
        *ok = local_violations(f, p, &mut found);
        for v in found {
            push_once(&mut violations, v);
        }
    }

    if ty.slope() <= Rational::from_integer(0) {
        violations.push(Violation::SlopeNonpositive);
    }

    // The sharper rule for h^1(O_S) <= 1 is only computable over P^1.
    let small_h1 = ty.g == 0 && ty.irregularity_h1().is_some_and(|h| h <= 1);
    for (f, &ok) in ty.fibres.iter().zip(&local_ok) {
        if f.t == 0 {
            if f.a + 1 != f.m {
                push_once(&mut violations, Violation::TameCoefficient);
            }
            continue;
        }
        if !ok {
            continue;
        }
        match admissible_coefficients(f.m, f.nu, p, f.t, small_h1) {
            Ok(set) => {
                imprecise |= set.imprecise;
                if !set.values.contains(&f.a) {
                    push_once(&mut violations, Violation::WildCoefficient);
                }
            }
            Err(_) => push_once(&mut violations, Violation::WildPowerRelation),
        }
    }

    if ty.quasi_elliptic {
        if p != 2 && p != 3 {
            violations.push(Violation::QuasiEllipticChar);
        }
        if ty.g == 0 && ty.chi == 0 {
            violations.push(Violation::QuasiEllipticChi0BaseP1);
        }
    }

    let divisible = ty.fibres.iter().all(|f| f.m % f.nu == 0);
    if !ty.quasi_elliptic && ty.g == 0 && ty.chi == 0 && divisible {
        if let Ok(false) = check_all_u(ty) {
            violations.push(Violation::ConditionU);
        }
    }

    AdmissibilityReport {
        admissible: violations.is_empty(),
        violations,
        imprecise,
    }
}
