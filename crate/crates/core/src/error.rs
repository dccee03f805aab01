use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid configuration: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("wave functions live on different grids")]
    GridMismatch,

    #[error("non-transverse restriction: continuity residual {residual:.3e} exceeds {tol:.1e}")]
    NonTransverse { residual: f64, tol: f64 },

    #[error("gauge-singular test function: longitudinal part grows by {growth:.3e} as the cone band shrinks")]
    GaugeSingular { growth: f64 },

    #[error("test-function support not covered by the grid shell: {0}")]
    SupportOutsideGrid(String),

    #[error("static current has no time-localized radiation field")]
    StaticCurrent,

    #[error("singular integrand: {0}")]
    SingularIntegrand(String),

    #[error("coupling functionals violate s(fx1,fx1) + s(fx2,fx2) <= 1 (got {norm:.6})")]
    CouplingNorm { norm: f64 },

    #[error("inconsistent kernel: Gram min eigenvalue {min_eig:.3e} vs max {max_eig:.3e}")]
    InconsistentKernel { min_eig: f64, max_eig: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
