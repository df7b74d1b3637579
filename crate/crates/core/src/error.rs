use thiserror::Error;

/// Errors raised by operator construction, analysis and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("matrix is not symmetric: asymmetry {asymmetry:.3e} exceeds {threshold:.3e}")]
    NotSymmetric { asymmetry: f64, threshold: f64 },

    #[error("eigen-solver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid number of intervals n = {0} (need n >= 2)")]
    InvalidN(usize),

    #[error("grid with n = {n} is too small for an order-{order} operator (need n >= {min})")]
    GridTooSmall { n: usize, order: usize, min: usize },

    #[error("unsupported interior order {0} (expected 2, 4 or 6)")]
    UnsupportedOrder(usize),

    #[error("the order-6 second-derivative operator needs a value for alpha")]
    MissingAlpha,

    #[error("the order-6 first-derivative operator needs its free parameter")]
    MissingParameter,

    #[error("closure system is inconsistent: residual {residual:.3e}")]
    InconsistentSystem { residual: f64 },

    #[error("beta calibration is ambiguous: {0}")]
    CalibrationAmbiguous(String),

    #[error("interior block is numerically singular (pivot {pivot:.3e}, threshold {threshold:.3e})")]
    SingularInterior { pivot: f64, threshold: f64 },

    #[error("Sylvester transform residual {residual:.3e} exceeds {threshold:.3e}")]
    TransformResidual { residual: f64, threshold: f64 },

    #[error("D1 and D2 use different norms (max difference {0:.3e})")]
    NormMismatch(f64),

    #[error("no compatibility crossing for alpha <= {alpha_max}")]
    NoCrossing { alpha_max: f64 },

    #[error("borrowing capacity unavailable: interior block is singular")]
    BorrowingUnavailable,

    #[error("invalid penalty factor phi = {0} (need phi >= 1)")]
    InvalidPhi(f64),

    #[error("steady system is singular: {0}")]
    SingularSystem(String),

    #[error("time step {dt:.3e} exceeds the stability bound {limit:.3e}")]
    TimeStepTooLarge { dt: f64, limit: f64 },

    #[error("time integration became unstable at t = {time:.6e} (error {error:.3e})")]
    UnstableStep {
        time: f64,
        error: f64,
        /// Error history (time, H-norm error) up to and including the failing step.
        history: Vec<(f64, f64)>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("I/O failure: {0}")]
    Io(String),

    #[error("serialization failure: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
