//! Error type for the reduction pipeline.

use num_complex::Complex64;
use thiserror::Error;

/// Failures of the system → scalar-equation reduction and of coordinate
/// extraction.
#[derive(Debug, Clone, Error)]
pub enum ReductionError {
    /// The chosen reduction row fails the genericity condition
    /// `Σ_k u_k (A_k)_{row,j} ≠ 0` for all `j ≠ row`.
    #[error("row {row} violates the reduction condition: {detail}")]
    RowConditionViolated { row: usize, detail: String },

    /// The apparent-singularity polynomial does not have the expected
    /// degree — the system sits outside the generic stratum where the
    /// coordinates are defined.
    #[error(
        "apparent-singularity polynomial is degenerate: expected degree \
         {expected}, found {actual:?} ({detail})"
    )]
    DegenerateDelta {
        expected: usize,
        actual: Option<usize>,
        detail: String,
    },

    /// Two apparent singularities collide (or one collides with a pole of
    /// the system).
    #[error("apparent singularities {a} and {b} are only {dist:.3e} apart")]
    MultipleRoot { a: Complex64, b: Complex64, dist: f64 },

    /// A coefficient has a higher-order pole at an apparent singularity than
    /// the theory permits; signals a degenerate reduction.
    #[error("coefficient has a pole of order {order} at apparent singularity {point}")]
    PoleAtApparent { point: Complex64, order: usize },

    /// Interpolation of a numerator polynomial left a tail above its degree
    /// budget — the computed data is inconsistent with the structure theory.
    #[error("interpolating {what} left a relative tail {tail:.3e} above the degree budget")]
    Interpolation { what: &'static str, tail: f64 },

    /// Malformed input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Failure bubbled up from polynomial / linear algebra.
    #[error(transparent)]
    Algebra(#[from] algebra_core::AlgebraError),

    /// Failure bubbled up from the system model.
    #[error(transparent)]
    Model(#[from] fuchsian_model::ModelError),
}
