use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("axis {axis} out of range for real dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("field is under-resolved: top spectral band holds {fraction:.3e} of the energy (limit {limit:.1e})")]
    UnderResolved { fraction: f64, limit: f64 },

    #[error("{what} is not positive definite (minimum eigenvalue {min_eigenvalue:.3e} at point {point})")]
    NotPositiveDefinite {
        what: &'static str,
        min_eigenvalue: f64,
        point: usize,
    },

    #[error("2-form does not tame J (margin {margin:.3e} at point {point})")]
    TamingViolation { margin: f64, point: usize },

    #[error("J*J + I has max-norm {defect:.3e}; not an almost complex structure")]
    NotAlmostComplex { defect: f64 },

    #[error("form degree {0} exceeds the real dimension")]
    DegreeOverflow(usize),

    #[error("degenerate frame at point {point}")]
    DegenerateFrame { point: usize },

    #[error("positivity of the solved form lost (min eigenvalue {min_eigenvalue:.3e})")]
    PositivityLost { min_eigenvalue: f64 },

    #[error("linear solve stalled: relative residual {residual:.3e} after {iterations} iterations")]
    LinearSolveFailed { residual: f64, iterations: usize },

    #[error("damping floor reached at residual {residual:.3e}")]
    DampingFloor { residual: f64 },

    #[error("continuity path stalled; last converged t = {last_good_t}")]
    ScheduleExhausted { last_good_t: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("radius {radius} exceeds the embedding cap {cap}")]
    RadiusTooLarge { radius: f64, cap: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("container error: {0}")]
    Container(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
