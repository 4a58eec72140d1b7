use serde::{Deserialize, Serialize};

use super::admissibility::is_admissible;
use crate::error::Result;
use crate::fibre::{admissible_coefficients, max_torsion_length};
use crate::model::{Characteristic, FibrationNumericalType, FibreDatum};

/// Largest local torsion length enumerated; no coefficient rule is known
/// beyond it.
pub const MAX_LOCAL_TORSION: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnumerationBounds {
    pub max_mult: u64,
    pub max_fibres: usize,
    pub max_chi_plus_t: u32,
    pub characteristics: Vec<u32>,
    pub include_wild: bool,
    pub include_quasi_elliptic: bool,
    /// Largest base genus tried. Values off `P^1` are lower bounds only.
    pub max_genus: u32,
    /// Skip subtrees whose every completion provably satisfies all four
    /// statements with early witnesses (see the sweep).
    pub prune_dominated: bool,
}

impl Default for EnumerationBounds {
    fn default() -> Self {
        EnumerationBounds {
            max_mult: 30,
            max_fibres: 8,
            max_chi_plus_t: 4,
            characteristics: vec![0, 2, 3, 5, 7],
            include_wild: true,
            include_quasi_elliptic: true,
            max_genus: 2,
            prune_dominated: true,
        }
    }
}

impl EnumerationBounds {
    /// Tame, characteristic 0, `g = chi = t = 0`: the classical case.
    pub fn tame_case4(max_mult: u64, max_fibres: usize) -> Self {
        EnumerationBounds {
            max_mult,
            max_fibres,
            max_chi_plus_t: 0,
            characteristics: vec![0],
            include_wild: false,
            include_quasi_elliptic: false,
            max_genus: 0,
            prune_dominated: false,
        }
    }

    /// Validated characteristics, sorted and without repeats.
    pub fn characteristics(&self) -> Result<Vec<Characteristic>> {
        let mut ps = self
            .characteristics
            .iter()
            .map(|&p| Characteristic::new(p))
            .collect::<Result<Vec<_>>>()?;
        ps.sort();
        ps.dedup();
        Ok(ps)
    }
}

/// One `(p, g, chi, t)` slice of the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Slice {
    pub p: Characteristic,
    pub g: u32,
    pub chi: i64,
    pub t: u32,
}

impl Slice {
    pub fn quasi_flags(&self, bounds: &EnumerationBounds) -> &'static [bool] {
        if bounds.include_quasi_elliptic && matches!(self.p.get(), 2 | 3) {
            &[false, true]
        } else {
            &[false]
        }
    }
}

pub(crate) fn slices(bounds: &EnumerationBounds) -> Result<Vec<Slice>> {
    let mut out = Vec::new();
    for p in bounds.characteristics()? {
        let wild = bounds.include_wild && !p.is_zero();
        for g in 0..=bounds.max_genus {
            for chi in 0..=bounds.max_chi_plus_t {
                let max_t = if wild { bounds.max_chi_plus_t - chi } else { 0 };
                for t in 0..=max_t {
                    out.push(Slice {
                        p,
                        g,
                        chi: chi as i64,
                        t,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Every fibre the enumeration may use in characteristic `p`, in canonical
/// order: tame fibres, and wild fibres over all `(nu, e, t_j, a)` with
/// `t_j <= min(max_t, 2)`.
pub fn fibre_kinds(p: Characteristic, bounds: &EnumerationBounds, max_t: u32) -> Vec<FibreDatum> {
    let mut kinds: Vec<FibreDatum> = (2..=bounds.max_mult)
        .filter_map(|m| FibreDatum::tame(m).ok())
        .collect();
    if bounds.include_wild && !p.is_zero() {
        let q = p.get() as u64;
        let mut power = q;
        let mut e = 1;
        while power <= bounds.max_mult {
            for nu in 1..=bounds.max_mult / power {
                let m = nu * power;
                let top_t = max_torsion_length(m, nu).min(max_t.min(MAX_LOCAL_TORSION) as u64);
                for t in 1..=top_t as u32 {
                    let Ok(set) = admissible_coefficients(m, nu, p.get(), t, false) else {
                        continue;
                    };
                    kinds.extend(set.values.iter().map(|&a| FibreDatum { m, a, nu, e, t }));
                }
            }
            power *= q;
            e += 1;
        }
    }
    kinds.sort();
    kinds
}

/// The configuration whose existence the hand argument leaves open: base
/// `P^1`, `chi = 0` and a single multiple fibre, wild with `t_j = 2`.
pub(crate) fn existence_unknown(ty: &FibrationNumericalType) -> bool {
    ty.g == 0 && ty.chi == 0 && matches!(ty.fibres.as_slice(), [x] if x.t == 2)
}

/// Builds the type for a fibre multiset and returns it when admissible.
pub(crate) fn admissible_type(
    slice: &Slice,
    quasi: bool,
    fibres: Vec<FibreDatum>,
) -> Option<FibrationNumericalType> {
    let mut ty = FibrationNumericalType::new(slice.p, slice.g, slice.chi, quasi, fibres).ok()?;
    if !is_admissible(&ty).admissible {
        return None;
    }
    ty.existence_unknown = existence_unknown(&ty);
    Some(ty)
}

/// Lazy stream of admissible types, ordered by `(p, g, chi, t, r, fibres)`
/// with elliptic before quasi-elliptic.
pub struct TypeStream {
    bounds: EnumerationBounds,
    slices: Vec<Slice>,
    slice: usize,
    kinds: Vec<FibreDatum>,
    r: usize,
    /// Current non-decreasing index tuple; `None` before the first one.
    tuple: Option<Vec<usize>>,
    pending: Vec<FibrationNumericalType>,
}

impl TypeStream {
    fn load_slice(&mut self) {
        if let Some(s) = self.slices.get(self.slice) {
            self.kinds = fibre_kinds(s.p, &self.bounds, s.t);
        }
        self.r = 0;
        self.tuple = None;
    }

    /// Advances to the next index tuple of the current length, or returns
    /// false when exhausted.
    fn advance(&mut self) -> bool {
        let k = self.kinds.len();
        let r = self.r;
        match &mut self.tuple {
            None => {
                if r > 0 && k == 0 {
                    return false;
                }
                self.tuple = Some(vec![0; r]);
                true
            }
            Some(tuple) => {
                let mut pos = r;
                while pos > 0 && tuple[pos - 1] + 1 == k {
                    pos -= 1;
                }
                if pos == 0 {
                    return false;
                }
                let v = tuple[pos - 1] + 1;
                for x in tuple.iter_mut().skip(pos - 1) {
                    *x = v;
                }
                true
            }
        }
    }
}

impl Iterator for TypeStream {
    type Item = FibrationNumericalType;

    fn next(&mut self) -> Option<FibrationNumericalType> {
        loop {
            if let Some(ty) = self.pending.pop() {
                return Some(ty);
            }
            let slice = *self.slices.get(self.slice)?;
            if !self.advance() {
                self.r += 1;
                self.tuple = None;
                if self.r > self.bounds.max_fibres {
                    self.slice += 1;
                    self.load_slice();
                }
                continue;
            }
            let tuple = self.tuple.as_ref().expect("advanced");
            let t_sum: u32 = tuple.iter().map(|&i| self.kinds[i].t).sum();
            if t_sum != slice.t {
                continue;
            }
            let fibres: Vec<FibreDatum> = tuple.iter().map(|&i| self.kinds[i]).collect();
            // Popped from the back, so push quasi-elliptic first.
            for &quasi in slice.quasi_flags(&self.bounds).iter().rev() {
                if let Some(ty) = admissible_type(&slice, quasi, fibres.clone()) {
                    self.pending.push(ty);
                }
            }
        }
    }
}

/// Every admissible type within the bounds, once each, in canonical order.
pub fn enumerate_types(bounds: &EnumerationBounds) -> Result<TypeStream> {
    let slices = slices(bounds)?;
    let mut stream = TypeStream {
        bounds: bounds.clone(),
        slices,
        slice: 0,
        kinds: Vec::new(),
        r: 0,
        tuple: None,
        pending: Vec::new(),
    };
    stream.load_slice();
    Ok(stream)
}
