//! Forward reduction of a Fuchsian system `φ' = Σ_k A_k/(z−u_k)·φ` to the
//! scalar equation satisfied by one component `y = φ_row`, and extraction of
//! the isomonodromic Darboux coordinates `(q, p)`.
//!
//! The reduction eliminates the other components of `φ` through derivative
//! tables kept in cancellation-free polynomial form; the elimination
//! determinant `Δ(z)` is a polynomial of degree `g = m(m−1)(n−1)/2 − (m−1)`
//! whose roots are the *apparent singularities* `q_s` of the scalar
//! equation. Together with the residues
//! `p_s = Res_{q_s}[d_{m−2} + ½d_{m−1}²]` they coordinatize the space of
//! systems with fixed poles and exponents.
//!
//! Main entry points:
//! * [`reduce`] — the scalar equation as a [`ScalarReduction`];
//! * [`extract_coordinates`] — the [`IsomonodromicCoordinates`];
//! * [`extract_coordinates_relaxed`] — a perturbation-tolerant variant for
//!   finite-difference sweeps that leave the diagonal-at-infinity stratum;
//! * [`audit`] — indicial polynomials at every singularity, for exponent
//!   verification.

pub mod audit;
pub mod coordinates;
pub mod error;
mod recursion;
pub mod reduction;

pub use coordinates::{
    apparent_singularities, extract_coordinates, extract_coordinates_relaxed, momenta,
    select_row, IsomonodromicCoordinates,
};
pub use error::ReductionError;
pub use reduction::{delta_leading_ratio, reduce, ScalarReduction};

/// Convenient result alias for this crate.
pub type Result<T> = std::result::Result<T, ReductionError>;
