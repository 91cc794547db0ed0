//! Data model for Fuchsian systems `dΦ/dz = Σ_k A_k/(z−u_k) · Φ` and the
//! structures that live on their phase space.
//!
//! The crate owns:
//!
//! * [`FuchsianSystem`] with its genericity validation ([`GenericityReport`])
//!   and exponent bookkeeping ([`ExponentTable`]),
//! * seeded random generic ensembles for testing and exploration,
//! * the Schlesinger vector field `∂A_i/∂u_k` and the matrix-form
//!   Hamiltonians `H_k = Σ_{l≠k} tr(A_k A_l)/(u_k−u_l)`,
//! * a finite-difference realization of the Lie–Poisson bracket on the full
//!   (unreduced) space of residue matrices.

pub mod bracket;
pub mod error;
pub mod random;
pub mod schlesinger;
pub mod system;

pub use bracket::{poisson_bracket_gram, poisson_bracket_numeric};
pub use error::ModelError;
pub use random::{random_generic, random_generic_traceless, RandomConfig};
pub use schlesinger::{hamiltonian_matrix, schlesinger_rhs};
pub use system::{phase_dimension, ExponentTable, FuchsianSystem, GenericityReport};

/// Convenient result alias for this crate.
pub type Result<T> = std::result::Result<T, ModelError>;
