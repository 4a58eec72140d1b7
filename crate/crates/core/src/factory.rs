//! Fibrations over `P^1` built from abelian Galois covers of the line.
//!
//! A `G`-cover `C -> P^1` branched at `r` points with local monodromies
//! `g_1..g_r` (summing to zero and generating `G`) gives, after taking the
//! quotient of `E x C` by a diagonal action, an elliptic fibration whose
//! multiple fibres have the orders of the `g_j` as multiplicities.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FibrationNumericalType;

/// Groups larger than this are not materialised for the generation check.
pub const MAX_GROUP_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupData {
    /// `G = Z/d_1 + ... + Z/d_k`.
    pub invariant_factors: Vec<u64>,
    /// One residue tuple per branch point.
    pub monodromies: Vec<Vec<u64>>,
}

impl AbelianGroupData {
    /// Reduces residues and checks the cover conditions.
    pub fn new(invariant_factors: Vec<u64>, monodromies: Vec<Vec<u64>>) -> Result<Self> {
        if invariant_factors.is_empty() || invariant_factors.iter().any(|&d| d < 2) {
            return Err(Error::InvalidGroupData(
                "invariant factors must be >= 2".into(),
            ));
        }
        let monodromies = monodromies
            .into_iter()
            .map(|g| {
                if g.len() != invariant_factors.len() {
                    return Err(Error::InvalidGroupData(format!(
                        "element {:?} has {} components, group has {}",
                        g,
                        g.len(),
                        invariant_factors.len()
                    )));
                }
                Ok(g.iter()
                    .zip(&invariant_factors)
                    .map(|(x, d)| x % d)
                    .collect())
            })
            .collect::<Result<Vec<Vec<u64>>>>()?;
        let data = AbelianGroupData {
            invariant_factors,
            monodromies,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn element_order(&self, g: &[u64]) -> u64 {
        g.iter()
            .zip(&self.invariant_factors)
            .fold(1u64, |acc, (&x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.invariant_factors)
            .map(|((a, b), d)| (a + b) % d)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.monodromies.is_empty() {
            return Err(Error::InvalidGroupData("no branch points".into()));
        }
        let zero = vec![0u64; self.invariant_factors.len()];
        if self.monodromies.contains(&zero) {
            return Err(Error::InvalidGroupData("trivial local monodromy".into()));
        }
        let sum = self
            .monodromies
            .iter()
            .fold(zero.clone(), |acc, g| self.add(&acc, g));
        if sum != zero {
            return Err(Error::InvalidGroupData(format!(
                "monodromies sum to {sum:?}, not 0"
            )));
        }
        if self.order() > MAX_GROUP_ORDER {
            return Err(Error::InvalidGroupData(format!(
                "group order {} too large",
                self.order()
            )));
        }
        let mut seen = BTreeSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(x) = queue.pop_front() {
            for g in &self.monodromies {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        if seen.len() as u64 != self.order() {
            return Err(Error::InvalidGroupData(format!(
                "monodromies generate a subgroup of order {} in a group of order {}",
                seen.len(),
                self.order()
            )));
        }
        Ok(())
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.monodromies
            .iter()
            .map(|g| self.element_order(g))
            .collect()
    }

    /// Primes dividing `|G|`, where the cover may acquire bad reduction.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut n = self.order();
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                primes.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        primes
    }
}

/// The tame characteristic-zero type over `P^1` with `chi = 0` whose
/// multiplicities are the orders of the local monodromies.
pub fn cover_to_type(data: &AbelianGroupData) -> Result<FibrationNumericalType> {
    FibrationNumericalType::tame_over_p1(&data.multiplicities())
}

/// Genus of the cover from `2g - 2 = |G| (-2 + sum (1 - 1/m_j))`.
pub fn riemann_hurwitz_genus(data: &AbelianGroupData) -> Result<u64> {
    let order = data.order() as i64;
    let twice_g_minus_two = -2 * order
        + data
            .multiplicities()
            .iter()
            .map(|&m| order - order / m as i64)
            .sum::<i64>();
    if twice_g_minus_two < -2 || twice_g_minus_two % 2 != 0 {
        return Err(Error::InvalidGroupData(format!(
            "Riemann-Hurwitz gives 2g - 2 = {twice_g_minus_two}"
        )));
    }
    Ok(((twice_g_minus_two + 2) / 2) as u64)
}
