//! Harmonic-map quantities for the identity map between two metrics and the
//! monotonicity of ball energies.

pub mod balls;
pub mod maps;

pub use balls::{
    a_grid, ball_transform, decay_and_l1, epsilon_regularity_probe, monotonicity_scan, monotonicity_scan_mollified,
    BallFamily, BallIntegrator, CenterScan, EpsilonPoint, L1Chain, MonotonicityReport, DEFAULT_R0, RATIO_TOLERANCE,
};
pub use maps::{
    christoffel_symbols, energy_density, identity_error_term, map_laplacian, stationarity_residual,
    stationarity_sides, IdentityErrorTerm, StationaritySides, TorusMap,
};
