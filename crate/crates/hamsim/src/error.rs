use thiserror::Error;

/// Errors surfaced by the library's validated operations.
#[derive(Debug, Error)]
pub enum HamsimError {
    #[error("matrix is not Hermitian: max |m - m^H| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not special orthogonal: {reason}")]
    NotSpecialOrthogonal { reason: String },
    #[error("spectrum is not sorted decreasingly")]
    UnsortedSpectrum,
    #[error("spectrum does not sum to zero: sum = {sum:e}")]
    NonZeroTrace { sum: f64 },
    #[error("coefficients violate canonical order h1 >= h2 >= |h3|: {h:?}")]
    NotCanonical { h: [f64; 3] },
    #[error(
        "target is not majorized by source: prefix inequality k={index} fails by {violation:e}"
    )]
    NotMajorized { index: usize, violation: f64 },
    #[error("requested factor s={requested} exceeds the optimum {optimal}")]
    FactorTooLarge { requested: f64, optimal: f64 },
    #[error("simulation factor is zero: {0}")]
    ZeroFactor(String),
    #[error("operator is not Bell-diagonal: max off-diagonal {deviation:e}")]
    NotBellDiagonal { deviation: f64 },
    #[error("{0}")]
    Domain(String),
    #[error("protocol reconstruction residual {residual:e} exceeds tolerance {tolerance:e}")]
    BadReconstruction { residual: f64, tolerance: f64 },
}
