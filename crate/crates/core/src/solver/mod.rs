//! Continuity-method solver for the Calabi–Yau equation `ω̃ⁿ = e^F ωⁿ` on
//! the flat torus, and the uniqueness wedge identity.

pub mod continuity;
pub mod krylov;
pub mod ma;
pub mod potential;
pub mod uniqueness;

pub use continuity::{
    continuity_resume, continuity_solve, newton_step, solve_at, CYProblem, CYSolution, ContinuityState,
    NewtonUpdate, StepRecord,
};
pub use ma::{c_of_t, ma_residual, normalize_density, target_density, MongeAmpere};
pub use potential::{recover_potential, solve_metric_poisson_gmres};
pub use uniqueness::{uniqueness_wedge_identity, WedgeIdentity};
