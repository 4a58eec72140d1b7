//! Numerical data of a relatively minimal (quasi-)elliptic fibration and the
//! plurigenera it determines.
//!
//! The canonical bundle formula writes `K_S` numerically as `d F + sum a_i F'_i`
//! with `d = 2g - 2 + chi(O_S) + length(T)`. Everything here is a function of
//! that record; no floating point is involved.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::congruence::floor_sum;
use crate::error::{Error, Result};

/// Exact rational used for slopes and per-period increments.
pub type Rational = Ratio<i128>;

/// Characteristic of the ground field; `0` stands for characteristic zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Characteristic(u32);

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic(0);

    pub fn new(p: u32) -> Result<Self> {
        if p == 0 || is_prime(p) {
            Ok(Characteristic(p))
        } else {
            Err(Error::InvalidCharacteristic(p))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl TryFrom<u32> for Characteristic {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Characteristic::new(p)
    }
}

impl From<Characteristic> for u32 {
    fn from(p: Characteristic) -> u32 {
        p.0
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// One multiple fibre `m F'` with its canonical coefficient `a`, the torsion
/// order `nu` of `O_{F'}(F')`, the exponent `e` in `m = nu * p^e` and the
/// length `t` of the torsion sheaf at the point (zero for tame fibres).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibreDatum {
    pub m: u64,
    pub a: u64,
    pub nu: u64,
    pub e: u32,
    pub t: u32,
}

impl FibreDatum {
    /// A tame fibre: `nu = m`, `e = 0`, `a = m - 1`.
    pub fn tame(m: u64) -> Result<Self> {
        let fibre = FibreDatum {
            m,
            a: m.saturating_sub(1),
            nu: m,
            e: 0,
            t: 0,
        };
        fibre.check_structure()?;
        Ok(fibre)
    }

    /// A wild fibre with `m = nu * p^e`.
    pub fn wild(p: Characteristic, nu: u64, e: u32, t: u32, a: u64) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::MalformedFibre(
                "wild fibre in characteristic 0".into(),
            ));
        }
        let m = (p.get() as u64)
            .checked_pow(e)
            .and_then(|q| q.checked_mul(nu))
            .ok_or_else(|| Error::MalformedFibre("multiplicity overflows".into()))?;
        let fibre = FibreDatum { m, a, nu, e, t };
        fibre.check_structure()?;
        Ok(fibre)
    }

    /// Shape checks whose failure means the record is not a fibre at all.
    pub fn check_structure(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::MalformedFibre(format!(
                "multiplicity {} < 2",
                self.m
            )));
        }
        if self.a >= self.m {
            return Err(Error::MalformedFibre(format!(
                "coefficient a = {} not below m = {}",
                self.a, self.m
            )));
        }
        if self.nu == 0 {
            return Err(Error::MalformedFibre("torsion order nu = 0".into()));
        }
        Ok(())
    }

    pub fn is_wild(&self) -> bool {
        self.t > 0
    }

    /// Canonical sort key `(m, nu, t, a)`; `e` breaks the (impossible) tie.
    pub fn sort_key(&self) -> (u64, u64, u32, u64, u32) {
        (self.m, self.nu, self.t, self.a, self.e)
    }

    fn label(&self) -> String {
        if self.is_wild() {
            format!("{}[nu={},a={},t={}]", self.m, self.nu, self.a, self.t)
        } else if self.a + 1 == self.m && self.nu == self.m {
            self.m.to_string()
        } else {
            format!("{}[nu={},a={}]", self.m, self.nu, self.a)
        }
    }
}

impl PartialOrd for FibreDatum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FibreDatum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// `P_n` together with whether it is the exact value or a guaranteed lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlurigenusValue {
    pub n: u64,
    pub value: u64,
    pub exact: bool,
}

/// The complete numeric record of a relatively minimal fibration of Kodaira
/// dimension one. Fibres are kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawType")]
pub struct FibrationNumericalType {
    pub p: Characteristic,
    pub g: u32,
    pub chi: i64,
    pub quasi_elliptic: bool,
    pub fibres: Vec<FibreDatum>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub existence_unknown: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawType {
    p: Characteristic,
    g: u32,
    chi: i64,
    #[serde(default)]
    quasi_elliptic: bool,
    #[serde(default)]
    fibres: Vec<FibreDatum>,
    #[serde(default)]
    existence_unknown: bool,
}

impl TryFrom<RawType> for FibrationNumericalType {
    type Error = Error;

    fn try_from(raw: RawType) -> Result<Self> {
        let mut ty =
            FibrationNumericalType::new(raw.p, raw.g, raw.chi, raw.quasi_elliptic, raw.fibres)?;
        ty.existence_unknown = raw.existence_unknown;
        Ok(ty)
    }
}

impl FibrationNumericalType {
    /// Builds a type, checking fibre shapes and sorting fibres canonically.
    /// Admissibility is a separate question, see
    /// [`crate::verifier::is_admissible`].
    pub fn new(
        p: Characteristic,
        g: u32,
        chi: i64,
        quasi_elliptic: bool,
        mut fibres: Vec<FibreDatum>,
    ) -> Result<Self> {
        for fibre in &fibres {
            fibre.check_structure()?;
        }
        fibres.sort();
        Ok(FibrationNumericalType {
            p,
            g,
            chi,
            quasi_elliptic,
            fibres,
            existence_unknown: false,
        })
    }

    /// Characteristic-zero type over `P^1` with `chi = 0` and tame fibres.
    pub fn tame_over_p1(multiplicities: &[u64]) -> Result<Self> {
        let fibres = multiplicities
            .iter()
            .map(|&m| FibreDatum::tame(m))
            .collect::<Result<_>>()?;
        Self::new(Characteristic::ZERO, 0, 0, false, fibres)
    }

    /// `t = length(T)`, the sum of the local torsion lengths.
    pub fn torsion_length(&self) -> i64 {
        self.fibres.iter().map(|f| f.t as i64).sum()
    }

    /// Degree of the base divisor `delta`: `2g - 2 + chi + t`.
    pub fn delta_degree(&self) -> i64 {
        2 * self.g as i64 - 2 + self.chi + self.torsion_length()
    }

    /// `d + sum a_i / m_i`; positive exactly when `n K_S` grows linearly.
    pub fn slope(&self) -> Rational {
        self.fibres.iter().fold(
            Rational::from_integer(self.delta_degree() as i128),
            |acc, f| acc + Rational::new(f.a as i128, f.m as i128),
        )
    }

    /// `lcm` of the multiplicities (1 without multiple fibres).
    pub fn period(&self) -> u64 {
        self.fibres.iter().fold(1u64, |acc, f| acc.lcm(&f.m))
    }

    /// `p_g = max(0, d + 1)`, valid over the projective line only.
    pub fn geometric_genus(&self) -> Result<i64> {
        if self.g != 0 {
            return Err(Error::Unsupported(format!(
                "geometric genus from numerical data needs base genus 0, got g = {}",
                self.g
            )));
        }
        Ok((self.delta_degree() + 1).max(0))
    }

    /// `h^1(O_S) = 1 - chi + p_g` over `P^1`.
    pub fn irregularity_h1(&self) -> Option<i64> {
        self.geometric_genus().ok().map(|pg| 1 - self.chi + pg)
    }

    /// The quasi-linear function that gives `P_n` (base genus 0) or its
    /// guaranteed lower bound (positive base genus).
    pub fn formula(&self) -> PluriFormula {
        formula_for(self.g, self.chi, self.torsion_length(), &self.fibres)
    }

    /// Exact `P_n` over `P^1`, otherwise the guaranteed lower bound (flagged).
    pub fn plurigenus(&self, n: u64) -> PlurigenusValue {
        if n == 0 {
            return PlurigenusValue {
                n,
                value: 1,
                exact: true,
            };
        }
        PlurigenusValue {
            n,
            value: self.formula().value(n),
            exact: self.g == 0,
        }
    }

    pub fn plurigenera_series(&self, n_max: u64) -> Vec<PlurigenusValue> {
        (0..=n_max).map(|n| self.plurigenus(n)).collect()
    }

    /// Branch bounds that hold without knowing the fibre-by-fibre structure.
    pub fn generic_lower_bound(&self, n: u64) -> Result<i64> {
        let rest = self.chi + self.torsion_length();
        let formula = if self.g >= 1 {
            self.formula()
        } else if rest >= 3 {
            PluriFormula::affine(1, 1)
        } else if rest == 2 {
            PluriFormula {
                constant: 1,
                linear: 0,
                terms: self.fibres.iter().map(|f| (f.a, f.m)).collect(),
            }
        } else {
            return Err(Error::Unsupported(format!(
                "no generic bound over P^1 with chi + t = {rest}; use the exact plurigenus"
            )));
        };
        Ok(formula.eval(n).max(0))
    }

    /// Compact human-readable form, e.g. `(2,6,6)` or `(2,8[nu=2,a=1,t=2])`.
    pub fn label(&self) -> String {
        let inner: Vec<String> = self.fibres.iter().map(FibreDatum::label).collect();
        format!("({})", inner.join(","))
    }
}

/// `P_n` (base genus 0) or its lower bound (positive genus) for fibres of a
/// type with the given `g`, `chi` and total torsion length `t`. The fibre list
/// may be partial: every term is non-negative, so adding fibres can only
/// raise the value.
pub fn formula_for(g: u32, chi: i64, t: i64, fibres: &[FibreDatum]) -> PluriFormula {
    let terms = || fibres.iter().map(|f| (f.a, f.m)).collect();
    let g = g as i64;
    if g == 0 {
        PluriFormula {
            constant: 1,
            linear: 2 * g - 2 + chi + t,
            terms: terms(),
        }
    } else if chi + t >= 1 {
        // h^0(O_C(n delta)) >= g + n - 1
        PluriFormula::affine(g - 1, 1)
    } else if g >= 2 {
        // (2n - 1)(g - 1)
        PluriFormula::affine(-(g - 1), 2 * (g - 1))
    } else {
        PluriFormula {
            constant: 0,
            linear: 0,
            terms: terms(),
        }
    }
}

impl fmt::Display for FibrationNumericalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} g={} chi={} ", self.p, self.g, self.chi)?;
        if self.quasi_elliptic {
            write!(f, "quasi ")?;
        }
        write!(f, "{}", self.label())
    }
}

/// `n -> constant + n * linear + sum_j floor(n * a_j / m_j)`, clamped at zero
/// when read as a plurigenus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluriFormula {
    pub constant: i64,
    pub linear: i64,
    pub terms: Vec<(u64, u64)>,
}

impl PluriFormula {
    pub fn affine(constant: i64, linear: i64) -> Self {
        PluriFormula {
            constant,
            linear,
            terms: Vec::new(),
        }
    }

    /// Unclamped value.
    pub fn eval(&self, n: u64) -> i64 {
        self.constant + self.linear * n as i64 + floor_sum(n, &self.terms) as i64
    }

    pub fn value(&self, n: u64) -> u64 {
        self.eval(n).max(0) as u64
    }

    pub fn slope(&self) -> Rational {
        self.terms.iter().fold(
            Rational::from_integer(self.linear as i128),
            |acc, &(a, m)| acc + Rational::new(a as i128, m as i128),
        )
    }

    pub fn period(&self) -> u64 {
        self.terms.iter().fold(1u64, |acc, &(_, m)| acc.lcm(&m))
    }

    /// Smallest `n` with `value(n) < target` among `n >= threshold`, decided
    /// exactly. `eval(n + M) = eval(n) + M * slope` with `M` the period, and
    /// `eval(n) >= constant + n * slope - sum (m_j - 1)/m_j`, so only
    /// `[threshold, threshold + min(M, cutoff))` has to be scanned.
    pub fn first_failure_from(&self, threshold: u64, target: i64) -> Option<u64> {
        if target <= 0 {
            return None;
        }
        let slope = self.slope();
        let period = self.period();
        let scan_end = if slope < Rational::from_integer(0) {
            // Eventually negative: a failure exists, find the first one.
            let mut n = threshold;
            loop {
                if (self.value(n) as i64) < target {
                    return Some(n);
                }
                n += 1;
            }
        } else if slope == Rational::from_integer(0) {
            threshold + period
        } else {
            let slack = self
                .terms
                .iter()
                .fold(Rational::from_integer(0), |acc, &(_, m)| {
                    acc + Rational::new(m as i128 - 1, m as i128)
                });
            let needed = (Rational::from_integer((target - self.constant) as i128) + slack) / slope;
            let cutoff = needed.ceil().to_integer().max(0) as u64;
            threshold + period.min(cutoff.saturating_sub(threshold))
        };
        (threshold..scan_end).find(|&n| (self.value(n) as i64) < target)
    }

    pub fn holds_from(&self, threshold: u64, target: i64) -> bool {
        self.first_failure_from(threshold, target).is_none()
    }
}
