//! Complex-arithmetic foundation for the isomonodromy toolkit.
//!
//! This crate provides the numerical kernels every higher-level module is
//! built on:
//!
//! * dense univariate [`Polynomial`]s over ℂ with root-finding, interpolation
//!   and Taylor/Laurent machinery,
//! * [`RationalFunction`]s normalized by cancelling matched root pairs, with
//!   exact residue extraction,
//! * a complex Hessenberg + shifted-QR eigensolver (used both for companion
//!   matrices and for spectra of residue matrices),
//! * partially pivoted LU solves with a 1-norm condition estimate.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here is safe to call concurrently on independent inputs.

pub mod eigen;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod roots;

pub use error::AlgebraError;
pub use linalg::{solve_linear, CMat, CVec, Lu};
pub use poly::Polynomial;
pub use rational::RationalFunction;
pub use roots::poly_roots;

/// The ambient scalar field: double-precision complex numbers.
pub type Scalar = num_complex::Complex64;

/// Shorthand constructor for a [`Scalar`].
#[inline]
pub fn cx(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

/// Convenient result alias for fallible kernel operations.
pub type Result<T> = std::result::Result<T, AlgebraError>;
