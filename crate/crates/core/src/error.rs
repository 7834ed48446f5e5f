//! Error taxonomy shared across the crate.

use alloc::string::String;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("singular matrix (relative pivot {pivot:.3e} below threshold {tol:.3e})")]
    SingularMatrix { pivot: f64, tol: f64 },
    #[error("matrix is not nilpotent to working precision (residual {0:.3e})")]
    NilpotencyViolation(f64),
    #[error("element is not in the open cell (margin {0:.3e})")]
    NotInBigCell(f64),
    #[error("kernel argument lies outside the domain")]
    NotInDomain,
    #[error("orbit classification ambiguous: coefficient {coeff:.3e} within margin of threshold {tol:.3e}")]
    AmbiguousOrbit { coeff: f64, tol: f64 },
    #[error("parameter constraint violated: {0}")]
    ParameterConstraint(String),
    #[error("unknown descriptor id: {0}")]
    UnknownDescriptor(String),
    #[error("descriptor validation failed: {0}")]
    DescriptorInvalid(String),
    #[error("invalid subspace input: {0}")]
    InvalidSubspace(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("convergence failure: {0}")]
    NoConvergence(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
