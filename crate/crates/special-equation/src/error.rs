//! Error taxonomy of the inverse parametrization.

use algebra_core::AlgebraError;
use scalar_reduction::ReductionError;
use thiserror::Error;

/// Everything that can go wrong while assembling a special Fuchsian
/// equation or evaluating its Hamiltonians.
#[derive(Debug, Error)]
pub enum EquationError {
    /// No sign reading of the factorial-basis expansion reproduces the
    /// prescribed exponents as indicial roots.
    #[error("indicial sign resolution failed at {place}: defect {defect:.3e}")]
    SignResolutionFailed { place: String, defect: f64 },

    /// Two apparent singularities (or one of them and a pole) collide.
    #[error("coordinate collision: |{a} - {b}| = {dist:.3e}")]
    CoordinateCollision {
        a: num_complex::Complex64,
        b: num_complex::Complex64,
        dist: f64,
    },

    /// The linear system for the polynomial coefficients is singular —
    /// the data sits outside the generic stratum.
    #[error("singular linear system: {detail}")]
    SingularSystem { detail: String },

    /// Coordinate/exponent dimensions are inconsistent.
    #[error("dimension mismatch: {detail}")]
    DimensionMismatch { detail: String },

    /// A closed-form oracle was called outside its domain.
    #[error("oracle restricted to (m,n)=({m_want},{n_want}), got ({m},{n})")]
    OracleDomain {
        m: usize,
        n: usize,
        m_want: usize,
        n_want: usize,
    },

    /// Malformed input outside the other categories.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Propagated algebra failure.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    /// Propagated reduction failure.
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}
