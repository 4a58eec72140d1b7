//! Admissibility of numerical types, the statements about `P_n` checked on
//! each type, and sweeps over bounded families of types.

mod admissibility;
pub mod cases;
mod enumerate;
mod sweep;
mod theorem;

pub use admissibility::{is_admissible, AdmissibilityReport, Violation};
pub use cases::{assign_case, case_bound, replay_case_bound, CaseBound, CaseReplay, GrowthCase};
pub use enumerate::{enumerate_types, fibre_kinds, EnumerationBounds, TypeStream};
pub use sweep::{
    find_sharp_cases, verify_all, Counterexample, Extremes, SharpPredicate, SweepReport,
};
pub use theorem::{
    first_n_reaching, main_theorem_statements, verify_main_theorem, verify_tail, MainTheoremReport,
    SERIES_CAP,
};
