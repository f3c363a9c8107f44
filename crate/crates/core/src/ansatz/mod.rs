//! The separated solution: coefficients, profiles, coefficient functions
//! and the evaluators for `f`, `U`, `u` and `φ`.

mod admissibility;
mod coords;
mod eval;
mod functions;
mod profile;
mod spec;

pub use admissibility::{check_admissibility, AdmissibilityReport, Verdict};
pub use coords::{CoordinatePoint, Window};
pub use eval::{eval_U, eval_f, eval_phi, eval_u, phi_log_form, Evaluation, PointStatus, ProfileJets};
pub(crate) use eval::assemble_f;
pub use functions::{CoefficientFunctions, TimeForm, TimeFunction};
pub use profile::{
    CustomProfile, ExpTerm, Profile, ProfileFamily, INSTANTON_POLE_MARGIN, TAN_POLE_MARGIN,
};
pub use spec::{SeparationCoefficients, Sign, SolutionSpec};
