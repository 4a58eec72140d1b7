//! Exact plurigenera of relatively minimal elliptic and quasi-elliptic
//! fibrations of Kodaira dimension one, computed from their numerical data.
//!
//! The crate is organised around [`FibrationNumericalType`], the numeric
//! record of a fibration (characteristic, base genus, `chi(O_S)` and the
//! multiple fibres). From it we get the degree of the base divisor in the
//! canonical bundle formula, the slope of `n K_S`, exact plurigenera over the
//! projective line and guaranteed lower bounds over higher genus bases.
//!
//! On top of that sit the local theory of wild fibres ([`fibre`]), the
//! congruence condition `U_i` ([`congruence`]), admissibility checks,
//! an exhaustive enumerator and the growth checker ([`verifier`]), the
//! `P_12` decision table ([`classifier`]) and abelian cover data ([`factory`]).

pub mod classifier;
pub mod congruence;
pub mod error;
pub mod factory;
pub mod fibre;
pub mod model;
pub mod verifier;

pub use error::{Error, Result};
pub use model::{
    Characteristic, FibrationNumericalType, FibreDatum, PluriFormula, PlurigenusValue,
};
