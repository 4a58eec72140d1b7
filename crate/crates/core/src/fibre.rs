//! Local invariants of a multiple fibre `m F'`: torsion orders of
//! `O_{nF'}(F')`, jumping values of `h^0(O_{nF'})`, and the canonical
//! coefficients a wild fibre may carry.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// Torsion orders `o_1..o_m` of `O_{nF'}(F')` and the jumping values of
/// `h^0(O_{nF'})` up to `n = m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JumpProfile {
    #[serde(skip)]
    pub p: u32,
    #[serde(skip)]
    pub nu: u64,
    pub orders: Vec<u64>,
    pub jumps: Vec<u64>,
}

impl JumpProfile {
    /// `h^0(O_{nF'}) = 1 + #{jumps <= n}`.
    pub fn h0(&self, n: u64) -> u64 {
        1 + self.jumps.iter().filter(|&&j| j <= n).count() as u64
    }

    /// Number of jumps up to `m`, i.e. the torsion length this profile models.
    pub fn torsion_length(&self) -> u32 {
        self.jumps.len() as u32
    }

    /// Checks every local rule; used to validate generated profiles.
    pub fn is_consistent(&self) -> bool {
        let p = self.p as u64;
        let nu = self.nu;
        if self.orders.first() != Some(&nu) {
            return false;
        }
        let jump_set: BTreeSet<u64> = self.jumps.iter().copied().collect();
        if jump_set.len() != self.jumps.len() || self.jumps.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        for (k, w) in self.orders.windows(2).enumerate() {
            let n = k as u64 + 2;
            if w[1] != w[0] && w[1] != p * w[0] {
                return false;
            }
            if w[1] == p * w[0] && !jump_set.contains(&n) {
                return false;
            }
        }
        let m = self.orders.len() as u64;
        if self
            .jumps
            .iter()
            .any(|&j| j < 2 || j > m || (j - 1) % nu != 0)
        {
            return false;
        }
        if m > nu && self.jumps.first() != Some(&(nu + 1)) {
            return false;
        }
        if let Some(&second) = self.jumps.get(1) {
            let grew = self.orders[nu as usize] == p * nu;
            let expected = if grew { (p + 1) * nu + 1 } else { 2 * nu + 1 };
            if second != expected {
                return false;
            }
        }
        true
    }
}

/// Canonical coefficients compatible with the local data, with a flag set
/// when no sharper rule than `nu | a + 1` is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientSet {
    pub values: BTreeSet<u64>,
    pub imprecise: bool,
}

fn check_local(m: u64, nu: u64, p: u32, t: u32) -> Result<()> {
    let inconsistent = || Error::InconsistentFibre { m, nu, p };
    if m < 2 || nu == 0 || m % nu != 0 {
        return Err(inconsistent());
    }
    if t == 0 {
        if nu != m {
            return Err(inconsistent());
        }
        return Ok(());
    }
    if p == 0 {
        return Err(inconsistent());
    }
    let mut q = m / nu;
    if q < p as u64 {
        return Err(inconsistent());
    }
    while q % p as u64 == 0 {
        q /= p as u64;
    }
    if q != 1 {
        return Err(inconsistent());
    }
    Ok(())
}

/// The coefficients `a` allowed for a fibre with torsion length `t`.
///
/// `h1_at_most_one` applies the restriction valid when `h^1(O_S) <= 1`.
pub fn admissible_coefficients(
    m: u64,
    nu: u64,
    p: u32,
    t: u32,
    h1_at_most_one: bool,
) -> Result<CoefficientSet> {
    check_local(m, nu, p, t)?;
    let top = m as i64 - 1;
    let nu_i = nu as i64;
    let offsets: Vec<i64> = match t {
        0 => vec![0],
        _ if t == 1 || h1_at_most_one => vec![0, nu_i],
        2 => vec![0, nu_i, 2 * nu_i, (p as i64 + 1) * nu_i],
        _ => {
            let values = (0..m).filter(|a| (a + 1) % nu == 0).collect();
            return Ok(CoefficientSet {
                values,
                imprecise: true,
            });
        }
    };
    let values = offsets
        .iter()
        .map(|o| top - o)
        .filter(|&a| a >= 0)
        .map(|a| a as u64)
        .collect();
    Ok(CoefficientSet {
        values,
        imprecise: false,
    })
}

/// `{2 nu + 1, (p + 1) nu + 1}`: the second jumping value without and with
/// growth of the torsion order at the first jump.
pub fn second_jump_candidates(nu: u64, p: u32) -> BTreeSet<u64> {
    [2 * nu + 1, (p as u64 + 1) * nu + 1].into_iter().collect()
}

/// Jumps occur only at `n = 1 mod nu`, the first at `nu + 1`, so a wild fibre
/// has torsion length at most `floor((m - 1) / nu)`.
pub fn max_torsion_length(m: u64, nu: u64) -> u64 {
    (m - 1) / nu
}

pub fn torsion_length_realizable(m: u64, nu: u64, t: u32) -> bool {
    t >= 1 && t as u64 <= max_torsion_length(m, nu)
}

/// Every profile of length `m` allowed by the local rules:
/// `o_n` is `o_{n-1}` or `p o_{n-1}`, growth happens only at a jump, a jump at
/// `n` needs `O_{F'}((n-1)F')` trivial (so `nu | n - 1`), `nu + 1` is the first
/// jump and the second one sits at `2 nu + 1` or `(p + 1) nu + 1` according to
/// whether the order grew at `nu + 1`.
pub fn enumerate_jump_profiles(m: u64, nu: u64, p: u32) -> Result<Vec<JumpProfile>> {
    if p == 0 || nu == 0 {
        return Err(Error::InconsistentFibre { m, nu, p });
    }
    check_local(m, nu, p, 1)?;
    let mut out = Vec::new();
    let mut orders = vec![nu];
    let mut jumps = Vec::new();
    extend_profile(m, nu, p as u64, &mut orders, &mut jumps, &mut out);
    Ok(out)
}

fn extend_profile(
    m: u64,
    nu: u64,
    p: u64,
    orders: &mut Vec<u64>,
    jumps: &mut Vec<u64>,
    out: &mut Vec<JumpProfile>,
) {
    let n = orders.len() as u64 + 1;
    if n > m {
        out.push(JumpProfile {
            p: p as u32,
            nu,
            orders: orders.clone(),
            jumps: jumps.clone(),
        });
        return;
    }
    let last = *orders.last().unwrap();
    let may_jump = (n - 1) % nu == 0
        && match jumps.len() {
            0 => true,
            1 => {
                let grew = orders[nu as usize] == p * nu;
                n == if grew { (p + 1) * nu + 1 } else { 2 * nu + 1 }
            }
            _ => true,
        };
    let must_jump = n == nu + 1;

    if !must_jump {
        orders.push(last);
        extend_profile(m, nu, p, orders, jumps, out);
        orders.pop();
    }
    if may_jump {
        jumps.push(n);
        for next in [last, p * last] {
            orders.push(next);
            extend_profile(m, nu, p, orders, jumps, out);
            orders.pop();
        }
        jumps.pop();
    }
}
