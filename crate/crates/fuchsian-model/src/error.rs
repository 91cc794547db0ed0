//! Errors for system construction and phase-space operations.

use thiserror::Error;

/// Errors raised by the Fuchsian-system model.
#[derive(Debug, Clone, Error)]
pub enum ModelError {
    /// Matrix size / pole count outside the supported range.
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// Two poles were closer than the separation tolerance.
    #[error("poles {i} and {j} collide (distance {dist:.3e})")]
    PoleCollision {
        /// First pole index (zero-based).
        i: usize,
        /// Second pole index (zero-based).
        j: usize,
        /// Observed distance.
        dist: f64,
    },

    /// Structural misuse (dimension mismatch, bad index, …).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A random draw never passed validation within the retry budget.
    #[error("generation failed after {attempts} attempts")]
    GenerationFailed {
        /// Number of draws tried.
        attempts: usize,
    },

    /// A user-supplied functional errored on a perturbed system during
    /// bracket evaluation.
    #[error("functional evaluation failed: {0}")]
    EvaluationFailure(String),

    /// An underlying numerical kernel failed.
    #[error(transparent)]
    Algebra(#[from] algebra_core::AlgebraError),
}
