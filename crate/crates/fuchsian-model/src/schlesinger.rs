//! The Schlesinger vector field and the matrix-form Hamiltonians.

use algebra_core::CMat;
use num_complex::Complex64;

use crate::error::ModelError;
use crate::system::{FuchsianSystem, TOL_SEP_REL};

/// Fails when two poles sit closer than the separation tolerance.
fn check_pole_separation(sys: &FuchsianSystem) -> Result<(), ModelError> {
    let scale = sys
        .poles()
        .iter()
        .map(|u| u.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    for i in 0..sys.n() {
        for j in (i + 1)..sys.n() {
            let dist = (sys.poles()[i] - sys.poles()[j]).norm();
            if dist <= TOL_SEP_REL * scale {
                return Err(ModelError::PoleCollision { i, j, dist });
            }
        }
    }
    Ok(())
}

/// All partial derivatives `∂A_i/∂u_k` of the deformation equations:
///
/// ```text
/// ∂A_i/∂u_k = [A_i, A_k]/(u_i − u_k)            (k ≠ i)
/// ∂A_i/∂u_i = −Σ_{j≠i} [A_i, A_j]/(u_i − u_j)
/// ```
///
/// returned as `rhs[i][k]`. Column sums `Σ_i ∂A_i/∂u_k` vanish identically
/// (the residue at infinity is a first integral), and every entry is
/// trace-free because commutators are.
///
/// # Errors
/// [`ModelError::PoleCollision`] when two poles nearly coincide.
pub fn schlesinger_rhs(sys: &FuchsianSystem) -> Result<Vec<Vec<CMat>>, ModelError> {
    check_pole_separation(sys)?;
    let n = sys.n();
    let m = sys.m();
    let u = sys.poles();
    // Precompute the commutator ladder [A_i, A_j]/(u_i − u_j).
    let mut ladder = vec![vec![CMat::zeros(m, m); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let com = sys.residue(i) * sys.residue(j) - sys.residue(j) * sys.residue(i);
                ladder[i][j] = com / (u[i] - u[j]);
            }
        }
    }
    let mut rhs = vec![vec![CMat::zeros(m, m); n]; n];
    for i in 0..n {
        for k in 0..n {
            if i == k {
                let mut acc = CMat::zeros(m, m);
                for j in 0..n {
                    if j != i {
                        acc -= &ladder[i][j];
                    }
                }
                rhs[i][i] = acc;
            } else {
                rhs[i][k] = ladder[i][k].clone();
            }
        }
    }
    Ok(rhs)
}

/// The matrix-form Hamiltonian `H_k = Σ_{l≠k} tr(A_k·A_l)/(u_k − u_l)`
/// generating the flow in `u_k` (zero-based `k`).
///
/// # Errors
/// [`ModelError::PoleCollision`] when two poles nearly coincide;
/// [`ModelError::InvalidInput`] for an out-of-range index.
pub fn hamiltonian_matrix(sys: &FuchsianSystem, k: usize) -> Result<Complex64, ModelError> {
    if k >= sys.n() {
        return Err(ModelError::InvalidInput(format!(
            "Hamiltonian index {k} out of range for {} poles",
            sys.n()
        )));
    }
    check_pole_separation(sys)?;
    let u = sys.poles();
    let mut h = Complex64::ZERO;
    for l in 0..sys.n() {
        if l != k {
            let prod = sys.residue(k) * sys.residue(l);
            h += prod.trace() / (u[k] - u[l]);
        }
    }
    Ok(h)
}

/// All `n` Hamiltonian values at once.
///
/// # Errors
/// Same as [`hamiltonian_matrix`].
pub fn hamiltonian_values(sys: &FuchsianSystem) -> Result<Vec<Complex64>, ModelError> {
    (0..sys.n()).map(|k| hamiltonian_matrix(sys, k)).collect()
}
