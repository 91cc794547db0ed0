//! Finite-difference Lie–Poisson bracket on the space of residue matrices.
//!
//! The bracket of two scalar functionals `F`, `G` of a system is
//!
//! ```text
//! {F, G} = Σ_p Σ  ∂F/∂(A_p)_ij · ∂G/∂(A_p)_kl · (δ_il·(A_p)_kj − δ_kj·(A_p)_il)
//! ```
//!
//! with gradients taken entry-wise by central differences. Perturbations hit
//! single matrix entries and therefore leave the residue at infinity free —
//! the bracket lives on the full unreduced space, and functionals passed in
//! must tolerate mildly non-generic systems.

use algebra_core::CMat;
use num_complex::Complex64;

use crate::error::ModelError;
use crate::system::FuchsianSystem;

/// A scalar functional of a system, as used by the bracket.
pub type Functional<'a> = dyn Fn(&FuchsianSystem) -> Result<Complex64, ModelError> + 'a;

/// Entry-wise gradient `∂F/∂(A_p)_ij` for holomorphic-in-the-entries `F`,
/// by the central-difference Wirtinger average
/// `∂F/∂a = ½(∂F/∂x − i·∂F/∂y)` at step `h·max(1, |entries|)`.
///
/// Averaging the real- and imaginary-axis differences instead of using one
/// axis alone cancels the leading non-holomorphic error term introduced by
/// downstream root-sorting and matching heuristics.
fn gradient(
    f: &Functional<'_>,
    sys: &FuchsianSystem,
    h: f64,
) -> Result<Vec<CMat>, ModelError> {
    let m = sys.m();
    let step = h * sys.residue_scale().max(1.0);
    let mut grads = Vec::with_capacity(sys.n());
    for p in 0..sys.n() {
        let mut grad = CMat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let base = sys.residue(p)[(i, j)];
                let eval = |delta: Complex64| -> Result<Complex64, ModelError> {
                    let mut a = sys.residue(p).clone();
                    a[(i, j)] = base + delta;
                    f(&sys.with_residue(p, a)).map_err(|e| {
                        ModelError::EvaluationFailure(format!(
                            "functional failed at perturbed residue {p} entry ({i},{j}): {e}"
                        ))
                    })
                };
                let fx_p = eval(Complex64::new(step, 0.0))?;
                let fx_m = eval(Complex64::new(-step, 0.0))?;
                let fy_p = eval(Complex64::new(0.0, step))?;
                let fy_m = eval(Complex64::new(0.0, -step))?;
                let dx = (fx_p - fx_m) / (2.0 * step);
                let dy = (fy_p - fy_m) / (2.0 * step);
                grad[(i, j)] = (dx - Complex64::new(0.0, 1.0) * dy) / 2.0;
            }
        }
        grads.push(grad);
    }
    Ok(grads)
}

/// Numerical Lie–Poisson bracket `{F, G}` at `sys` with relative
/// finite-difference step `h`.
///
/// # Errors
/// [`ModelError::EvaluationFailure`] if either functional errors on a
/// perturbed system.
pub fn poisson_bracket_numeric(
    f: &Functional<'_>,
    g: &Functional<'_>,
    sys: &FuchsianSystem,
    h: f64,
) -> Result<Complex64, ModelError> {
    let grad_f = gradient(f, sys, h)?;
    let grad_g = gradient(g, sys, h)?;
    let m = sys.m();
    let mut bracket = Complex64::ZERO;
    for p in 0..sys.n() {
        let a = sys.residue(p);
        let df = &grad_f[p];
        let dg = &grad_g[p];
        // Σ_{ijk} ∂F_ij ∂G_ki (A)_kj − Σ_{ijl} ∂F_ij ∂G_jl (A)_il
        for i in 0..m {
            for j in 0..m {
                let fij = df[(i, j)];
                if fij.norm() == 0.0 {
                    continue;
                }
                for k in 0..m {
                    bracket += fij * dg[(k, i)] * a[(k, j)];
                    bracket -= fij * dg[(j, k)] * a[(i, k)];
                }
            }
        }
    }
    Ok(bracket)
}

/// A vector-valued functional of a system (a whole coordinate family at
/// once).
pub type VectorFunctional<'a> =
    dyn Fn(&FuchsianSystem) -> Result<Vec<Complex64>, ModelError> + 'a;

/// All pairwise brackets `{F_a, F_b}` of the components of a vector-valued
/// functional, computed with a *single* finite-difference sweep over the
/// matrix entries (each perturbed system is evaluated once for every
/// component, which is what makes coordinate-family Gram matrices
/// affordable).
///
/// Returns the antisymmetric matrix `B[a][b] = {F_a, F_b}`.
///
/// # Errors
/// [`ModelError::EvaluationFailure`] if the functional errors on a perturbed
/// system or changes its output length.
pub fn poisson_bracket_gram(
    f: &VectorFunctional<'_>,
    sys: &FuchsianSystem,
    h: f64,
) -> Result<CMat, ModelError> {
    let m = sys.m();
    let dim = f(sys)
        .map_err(|e| ModelError::EvaluationFailure(format!("functional failed at base: {e}")))?
        .len();
    let step = h * sys.residue_scale().max(1.0);
    // grads[c][p] is the gradient matrix of component c w.r.t. residue p.
    let mut grads = vec![vec![CMat::zeros(m, m); sys.n()]; dim];
    for p in 0..sys.n() {
        for i in 0..m {
            for j in 0..m {
                let base = sys.residue(p)[(i, j)];
                let eval = |delta: Complex64| -> Result<Vec<Complex64>, ModelError> {
                    let mut a = sys.residue(p).clone();
                    a[(i, j)] = base + delta;
                    let out = f(&sys.with_residue(p, a)).map_err(|e| {
                        ModelError::EvaluationFailure(format!(
                            "functional failed at perturbed residue {p} entry ({i},{j}): {e}"
                        ))
                    })?;
                    if out.len() != dim {
                        return Err(ModelError::EvaluationFailure(format!(
                            "component count changed from {dim} to {} under perturbation",
                            out.len()
                        )));
                    }
                    Ok(out)
                };
                let fx_p = eval(Complex64::new(step, 0.0))?;
                let fx_m = eval(Complex64::new(-step, 0.0))?;
                let fy_p = eval(Complex64::new(0.0, step))?;
                let fy_m = eval(Complex64::new(0.0, -step))?;
                for (c, grad) in grads.iter_mut().enumerate() {
                    let dx = (fx_p[c] - fx_m[c]) / (2.0 * step);
                    let dy = (fy_p[c] - fy_m[c]) / (2.0 * step);
                    grad[p][(i, j)] = (dx - Complex64::new(0.0, 1.0) * dy) / 2.0;
                }
            }
        }
    }
    let mut gram = CMat::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let mut bracket = Complex64::ZERO;
            for p in 0..sys.n() {
                let mat = sys.residue(p);
                let df = &grads[a][p];
                let dg = &grads[b][p];
                for i in 0..m {
                    for j in 0..m {
                        let fij = df[(i, j)];
                        if fij.norm() == 0.0 {
                            continue;
                        }
                        for k in 0..m {
                            bracket += fij * dg[(k, i)] * mat[(k, j)];
                            bracket -= fij * dg[(j, k)] * mat[(i, k)];
                        }
                    }
                }
            }
            gram[(a, b)] = bracket;
        }
    }
    Ok(gram)
}
