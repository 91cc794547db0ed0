//! Error taxonomy shared by the numerical kernels.

use thiserror::Error;

/// Errors produced by the polynomial, rational-function and linear-algebra
/// kernels.
///
/// Every downstream crate converts these into its own error type, so the
/// variants carry enough structure (indices, orders) for callers to react
/// programmatically rather than by string matching.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    /// A constant polynomial was passed where positive degree is required.
    #[error("polynomial has degree zero")]
    DegreeZero,

    /// An iterative refinement failed to reach the requested tolerance.
    #[error("ill-conditioned problem: {detail}")]
    IllConditioned {
        /// Human-readable description of which residual failed and by how much.
        detail: String,
    },

    /// A pole of higher order than the caller allowed was met during residue
    /// or Laurent-coefficient extraction.
    #[error("pole order {actual} exceeds allowed order {allowed}")]
    PoleOrderExceeded {
        /// The pole order actually detected.
        actual: usize,
        /// The maximal order the caller permitted.
        allowed: usize,
    },

    /// Gaussian elimination met a vanishing pivot.
    #[error("matrix is numerically singular at pivot column {pivot_index}")]
    Singular {
        /// Zero-based column index of the failing pivot.
        pivot_index: usize,
    },

    /// Structural misuse: mismatched dimensions, empty input, and the like.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
