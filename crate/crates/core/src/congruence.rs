//! Condition `U_i` on multiplicities and torsion orders, and floor-sum helpers.
//!
//! `(m_1..m_r | nu_1..nu_r)` satisfies `U_i` when there are integers `n_j`
//! with `n_i = 1 mod nu_i` and `sum_j n_j / m_j` integral. With
//! `M = lcm(m_j)` this is a linear congruence, solvable iff
//! `gcd(M, nu_i M/m_i, {M/m_j}_{j != i})` divides `M/m_i`. The brute-force
//! search over residues is kept as an independent oracle.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FibrationNumericalType;

/// Default cap on the number of residue combinations the oracle may try.
pub const DEFAULT_ORACLE_BOUND: u128 = 1_000_000;

/// `sum floor(n * a / m)` in exact integer arithmetic.
pub fn floor_sum(n: u64, pairs: &[(u64, u64)]) -> u64 {
    pairs
        .iter()
        .map(|&(a, m)| ((n as u128 * a as u128) / m as u128) as u64)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionUInstance {
    pub m: Vec<u64>,
    pub nu: Vec<u64>,
    /// Distinguished index, 1-based.
    pub i: usize,
}

impl ConditionUInstance {
    pub fn new(m: Vec<u64>, nu: Vec<u64>, i: usize) -> Result<Self> {
        if m.len() != nu.len() {
            return Err(Error::Malformed(format!(
                "{} multiplicities but {} torsion orders",
                m.len(),
                nu.len()
            )));
        }
        if i == 0 || i > m.len() {
            return Err(Error::Malformed(format!(
                "index {i} outside 1..={}",
                m.len()
            )));
        }
        for (&mj, &nj) in m.iter().zip(&nu) {
            if mj < 2 || nj == 0 || mj % nj != 0 {
                return Err(Error::Malformed(format!(
                    "need m >= 2 and nu | m, got ({mj}|{nj})"
                )));
            }
        }
        Ok(ConditionUInstance { m, nu, i })
    }

    fn lcm(&self) -> u64 {
        self.m.iter().fold(1u64, |acc, &m| acc.lcm(&m))
    }
}

/// Decides `U_i` through the gcd criterion.
pub fn check_condition_u(inst: &ConditionUInstance) -> bool {
    let big_m = inst.lcm();
    let k = inst.i - 1;
    let cofactor_i = big_m / inst.m[k];
    let mut g = big_m.gcd(&(inst.nu[k] * cofactor_i));
    for (j, &mj) in inst.m.iter().enumerate() {
        if j != k {
            g = g.gcd(&(big_m / mj));
        }
    }
    cofactor_i % g == 0
}

/// Decides `U_i` by trying every residue vector: `n_j` modulo `m_j` for
/// `j != i`, and `n_i` among the residues modulo `m_i` that are `1 mod nu_i`.
pub fn check_condition_u_bruteforce(inst: &ConditionUInstance, bound: u128) -> Result<bool> {
    let k = inst.i - 1;
    let choices: Vec<u64> = inst
        .m
        .iter()
        .enumerate()
        .map(|(j, &m)| if j == k { m / inst.nu[k] } else { m })
        .collect();
    let needed = choices
        .iter()
        .fold(1u128, |acc, &c| acc.saturating_mul(c as u128));
    if needed > bound {
        return Err(Error::OracleBoundExceeded { needed, bound });
    }
    let big_m = inst.lcm();
    // Contribution of residue index x at position j, scaled by M.
    let step: Vec<u64> = inst
        .m
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            if j == k {
                inst.nu[k] * (big_m / m)
            } else {
                big_m / m
            }
        })
        .collect();
    let base = big_m / inst.m[k];
    let mut idx = vec![0u64; choices.len()];
    loop {
        let total = idx
            .iter()
            .zip(&step)
            .fold(base % big_m, |acc, (&x, &s)| (acc + x * s) % big_m);
        if total == 0 {
            return Ok(true);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(false);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// All of `U_1..U_r` for an elliptic type over `P^1` with `chi = 0`.
pub fn check_all_u(ty: &FibrationNumericalType) -> Result<bool> {
    if ty.g != 0 || ty.chi != 0 {
        return Err(Error::Unsupported(format!(
            "condition U needs base P^1 and chi = 0, got g = {}, chi = {}",
            ty.g, ty.chi
        )));
    }
    let m: Vec<u64> = ty.fibres.iter().map(|f| f.m).collect();
    let nu: Vec<u64> = ty.fibres.iter().map(|f| f.nu).collect();
    Ok((1..=m.len()).all(|i| {
        check_condition_u(&ConditionUInstance {
            m: m.clone(),
            nu: nu.clone(),
            i,
        })
    }))
}

/// Each `m_k` divides the lcm of the other two.
pub fn divisibility_closure_r3(m1: u64, m2: u64, m3: u64) -> bool {
    m1.lcm(&m2) % m3 == 0 && m1.lcm(&m3) % m2 == 0 && m2.lcm(&m3) % m1 == 0
}
