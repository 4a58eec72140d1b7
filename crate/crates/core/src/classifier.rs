//! The `P_12` decision table: surface invariants to Kodaira class, and the
//! named families of Kodaira dimension zero.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Characteristic;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub p12: u64,
    /// `K^2` of a minimal model; linear genus is `k2_min + 1`.
    pub k2_min: i64,
    pub minimal: bool,
    pub pg: u64,
    pub q: u64,
    /// Smallest `m >= 1` with `m K = 0`, when known.
    pub canonical_torsion: Option<u64>,
    pub p: Characteristic,
}

impl SurfaceInvariants {
    pub fn new(p12: u64, k2_min: i64) -> Self {
        SurfaceInvariants {
            p12,
            k2_min,
            minimal: true,
            pg: 0,
            q: 0,
            canonical_torsion: None,
            p: Characteristic::ZERO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassLabel {
    /// Ruled, Kodaira dimension `-inf`.
    I,
    /// Kodaira dimension 0.
    II,
    /// Properly elliptic or quasi-elliptic.
    III,
    /// General type.
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kod0Subtype {
    Abelian,
    K3,
    Enriques,
    Hyperelliptic,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KodairaClass {
    pub class: ClassLabel,
    pub subtype: Option<Kod0Subtype>,
}

pub fn classify(inv: &SurfaceInvariants) -> Result<KodairaClass> {
    let class = match inv.p12 {
        0 => ClassLabel::I,
        1 => {
            match inv.canonical_torsion {
                Some(m) if m >= 1 && 12 % m == 0 => {}
                Some(m) => {
                    return Err(Error::InconsistentInvariants(format!(
                        "P_12 = 1 needs 12 K = 0, but canonical torsion is {m}"
                    )))
                }
                None => {
                    return Err(Error::InconsistentInvariants(
                        "P_12 = 1 needs the canonical torsion order".into(),
                    ))
                }
            }
            ClassLabel::II
        }
        _ => {
            if !inv.minimal {
                return Err(Error::InconsistentInvariants(
                    "K^2 must be taken on a minimal model".into(),
                ));
            }
            match inv.k2_min {
                0 => ClassLabel::III,
                k if k > 0 => ClassLabel::IV,
                k => {
                    return Err(Error::InconsistentInvariants(format!(
                        "P_12 >= 2 with K^2 = {k} < 0 on a minimal model"
                    )))
                }
            }
        }
    };
    let subtype = if class == ClassLabel::II {
        Some(classify_kod0_subtype(inv)?)
    } else {
        None
    };
    Ok(KodairaClass { class, subtype })
}

/// Named families of Kodaira dimension zero. Anything outside the classical
/// rows (notably the non-classical surfaces of characteristic 2 and 3) comes
/// back as `Unresolved`.
pub fn classify_kod0_subtype(inv: &SurfaceInvariants) -> Result<Kod0Subtype> {
    if inv.p12 != 1 {
        return Err(Error::InconsistentInvariants(format!(
            "subtype asked for a surface with P_12 = {}",
            inv.p12
        )));
    }
    let torsion = inv.canonical_torsion;
    Ok(match (inv.pg, inv.q) {
        (1, 2) => Kod0Subtype::Abelian,
        (1, 0) => Kod0Subtype::K3,
        (0, 0) if torsion == Some(2) => Kod0Subtype::Enriques,
        (_, 1) if matches!(torsion, Some(2 | 3 | 4 | 6)) => Kod0Subtype::Hyperelliptic,
        _ => Kod0Subtype::Unresolved,
    })
}

/// All `(m_1 <= .. <= m_r)` with `m_j >= 2` and `sum (1 - 1/m_j) = 2`.
///
/// Each term is at least `1/2` and below `1`, so `r` is 3 or 4, and the
/// smallest multiplicity of a triple is at most 3 with the largest at most 6;
/// searching up to 12 is therefore exhaustive.
pub fn torsion_solutions() -> Vec<Vec<u64>> {
    const LIMIT: u64 = 12;
    let target = Ratio::from_integer(2i64);
    let mut found = BTreeSet::new();
    for r in 1..=4usize {
        let mut tuple = vec![2u64; r];
        loop {
            let sum = tuple.iter().fold(Ratio::from_integer(0i64), |acc, &m| {
                acc + Ratio::new(m as i64 - 1, m as i64)
            });
            if sum == target {
                found.insert(tuple.clone());
            }
            // Next non-decreasing tuple.
            let mut pos = r;
            while pos > 0 && tuple[pos - 1] == LIMIT {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            let v = tuple[pos - 1] + 1;
            for x in tuple.iter_mut().skip(pos - 1) {
                *x = v;
            }
        }
    }
    found.into_iter().collect()
}

pub fn tuple_lcm(tuple: &[u64]) -> u64 {
    tuple.iter().fold(1u64, |acc, &m| acc.lcm(&m))
}
