//! Entropy utilities and the β-bound calculators.
//!
//! Every calculator drops the `o(1)` terms (reports carry
//! `asymptotic: true`). Self-referential inequalities are solved for their
//! largest consistent value.

mod entropy;
mod ineq3;
mod interval;
mod pipeline;
mod solve;

pub use entropy::{binary_entropy, entropy_half_bound_check};
pub use ineq3::{
    ineq3_rederived, ineq3_value, revalidate_certificate, verify_ineq3, CertificateHeader, CertificateLine,
    Ineq3Certificate, Ineq3Constants, Ineq3Mode, Ineq3Options, Ineq3Outcome, Ineq3Sweep, NearZeroEnvelope,
};
pub use interval::Interval;
pub use pipeline::{
    best_bound, classic_bound, classic_report, main_bound, main_route, optimize_rho, warmup_bound, warmup_route,
    BoundMethod, BoundReport, MainOptions, RateParams, MAIN_CERTIFIED_MAX_EPSILON,
};
pub use solve::{golden_section_min, largest_fixed_point, quadratic_fixed_point};
