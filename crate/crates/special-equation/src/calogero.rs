//! The interaction matrices of the coordinate chain.
//!
//! Eliminating the local solution data at the apparent singularities
//! couples the coordinate pairs through the `g×g` matrices
//!
//! ```text
//! M^{(l)}_{ij} = (p_i + (m−l)·R′(q_i)/R(q_i))·δ_ij
//!              − (1−δ_ij)·R(q_j)^{m−l} / (R(q_i)^{m−l}·(q_i−q_j)),
//! ```
//!
//! `l = 1..m−1` — a Lax-type pairwise-interaction shape: diagonal momenta
//! shifted by logarithmic derivatives of `R`, off-diagonal Calogero-like
//! couplings weighted by powers of `R`.

use algebra_core::{cx, CMat, Polynomial, Scalar};
use scalar_reduction::IsomonodromicCoordinates;

use crate::error::EquationError;

/// Minimum pairwise separation (relative to the coordinate scale) under
/// which the interaction matrices are considered degenerate.
const COLLISION_TOL: f64 = 1e-10;

/// Builds `M^{(l)}` for `l = 1..m−1`.
///
/// # Errors
/// * [`EquationError::InvalidInput`] — `l` outside `1..m−1`;
/// * [`EquationError::CoordinateCollision`] — two positions coincide, or a
///   position sits on a pole of the system (`R(q_i) = 0`).
pub fn calogero_matrix(
    l: usize,
    coords: &IsomonodromicCoordinates,
) -> Result<CMat, EquationError> {
    let m = coords.m();
    if l == 0 || l >= m {
        return Err(EquationError::InvalidInput(format!(
            "interaction matrix defined for 1 ≤ l ≤ {}, got {l}",
            m - 1
        )));
    }
    let q = coords.q();
    let p = coords.p();
    let g = q.len();
    let r = Polynomial::from_roots(Scalar::ONE, coords.u());
    let r_prime = r.derivative();

    let scale = q
        .iter()
        .chain(coords.u())
        .map(|z| z.norm())
        .fold(1.0_f64, f64::max);
    for i in 0..g {
        for j in (i + 1)..g {
            let dist = (q[i] - q[j]).norm();
            if dist < COLLISION_TOL * scale {
                return Err(EquationError::CoordinateCollision {
                    a: q[i],
                    b: q[j],
                    dist,
                });
            }
        }
        for &uk in coords.u() {
            let dist = (q[i] - uk).norm();
            if dist < COLLISION_TOL * scale {
                return Err(EquationError::CoordinateCollision {
                    a: q[i],
                    b: uk,
                    dist,
                });
            }
        }
    }

    let pow = (m - l) as u32;
    let r_at: Vec<Scalar> = q.iter().map(|&qi| r.eval(qi)).collect();
    let mut out = CMat::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            out[(i, j)] = if i == j {
                p[i] + cx((m - l) as f64, 0.0) * r_prime.eval(q[i]) / r_at[i]
            } else {
                -r_at[j].powu(pow) / (r_at[i].powu(pow) * (q[i] - q[j]))
            };
        }
    }
    Ok(out)
}
