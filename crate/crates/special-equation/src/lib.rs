//! Inverse parametrization of isomonodromic coordinates.
//!
//! The forward direction ([`scalar_reduction`]) turns a Fuchsian system
//! into a scalar equation and reads off coordinate pairs `(q, p)` from the
//! extra (apparent) singularities of that equation. This crate inverts the
//! step: from coordinates alone — positions `q`, momenta `p`, poles `u` and
//! an exponent table — it rebuilds the unique *special Fuchsian equation*
//! with those invariants:
//!
//! * order `m`, Fuchsian, with the prescribed exponents at `u_1..u_n, ∞`;
//! * extra singularities exactly at the `q_s`, each apparent (local
//!   exponents `0, 1, .., m−2, m`, no logarithms);
//! * residue of the subleading coefficient equal to `+1` at every `q_s`.
//!
//! The construction ([`assemble_equation`]) writes each coefficient as a
//! partial fraction over `Δ·R^k` (`Δ = Π(z−q_s)`, `R = Π(z−u_i)`) whose
//! unknowns — local expansion data `α_j^{(s)}` and correction polynomials
//! `P_k` — satisfy a linear chain driven by Calogero-like interaction
//! matrices ([`calogero_matrix`]). Counting degrees of freedom, the
//! correction coefficients number exactly the phase-space dimension `g`,
//! and the no-logarithm conditions close the system.
//!
//! On top of the equation the crate computes the canonical Hamiltonians
//! `𝓗_k` generating the isomonodromic flow in the coordinates
//! ([`canonical_hamiltonians`]), both as residues of the equation
//! coefficients and in closed form, plus an independent fully-expanded
//! benchmark for the smallest non-trivial case
//! ([`hamiltonians_m3n3_oracle`]).

pub mod assemble;
pub mod beta;
pub mod calogero;
pub mod error;
pub mod hamiltonians;
pub mod oracle_m3n3;

pub use assemble::{assemble_equation, log_free_defect, SpecialFuchsianEquation};
pub use beta::{beta_coefficients, BetaTable};
pub use calogero::calogero_matrix;
pub use error::EquationError;
pub use hamiltonians::{canonical_hamiltonians, HamiltonianValues};
pub use oracle_m3n3::{hamiltonians_m3n3_oracle, OracleM3N3};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, EquationError>;
