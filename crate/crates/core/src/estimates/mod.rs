//! Numerical evaluation of the a priori estimates on solved instances: trace
//! identities, exponential and maximum-principle bounds, the integral chain
//! of the zeroth-order estimate, and the third-order quantity.

pub mod jet;
pub mod moser;
pub mod pointwise;
pub mod report;

pub use jet::ComplexJet;
pub use moser::{gradient_two_form, i_alpha, moser_chain, poincare_ratio, MoserTrace, MOSER_EXPONENTS};
pub use pointwise::{
    exponential_bound, exponential_frontier, fit_pair, good_term_check, good_term_slack, key_inequality,
    third_order_field, third_order_quantity, verify_trace_identity, KeyInequalityFields,
};
pub use report::{relative_change, EstimateReport, Verdict};
