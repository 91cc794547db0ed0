//! Polynomial root-finding: companion-matrix eigenvalues refined by Newton
//! polishing, with a residual-based acceptance test.

use num_complex::Complex64;

use crate::eigen::eigenvalues;
use crate::error::AlgebraError;
use crate::linalg::CMat;
use crate::poly::Polynomial;

/// Default residual tolerance for [`poly_roots`]: each root `r` must satisfy
/// `|p(r)| ≤ tol·max|coeff|·max(1,|r|)^deg`.
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// All roots of `p` with multiplicity, in no particular order.
///
/// Exact zero roots are deflated first; degrees one and two use closed
/// forms; everything else goes through balanced companion-matrix
/// eigenvalues followed by up to eight Newton steps per root (a step is
/// kept only if it reduces `|p|`, so multiple roots degrade gracefully to
/// the eigenvalue estimate).
///
/// A constant polynomial yields an empty sequence.
///
/// # Errors
/// [`AlgebraError::InvalidInput`] for the zero polynomial;
/// [`AlgebraError::IllConditioned`] when some root fails the scaled residual
/// test `|p(r)| ≤ tol·max|coeff|·max(1,|r|)^deg`.
pub fn poly_roots(p: &Polynomial, tol: f64) -> Result<Vec<Complex64>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::InvalidInput(
            "roots of the zero polynomial".into(),
        ));
    }
    let full_degree = p.degree().expect("nonzero polynomial");
    let scale = p.max_coeff_norm();

    // Deflate exact zero roots so that z^k factors do not perturb the
    // companion matrix.
    let mut coeffs = p.coeffs().to_vec();
    let mut roots = Vec::with_capacity(full_degree);
    while coeffs.len() > 1 && coeffs[0].norm() == 0.0 {
        roots.push(Complex64::ZERO);
        coeffs.remove(0);
    }
    let reduced = Polynomial::new(coeffs);
    let deg = reduced.degree().unwrap_or(0);

    match deg {
        0 => {}
        1 => roots.push(-reduced.coeff(0) / reduced.coeff(1)),
        2 => roots.extend(quadratic_roots(
            reduced.coeff(2),
            reduced.coeff(1),
            reduced.coeff(0),
        )),
        _ => {
            let monic = reduced.monic();
            let companion = CMat::from_fn(deg, deg, |i, j| {
                if j + 1 == deg {
                    -monic.coeff(i)
                } else if i == j + 1 {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            });
            let raw = eigenvalues(&companion)?;
            let dp = reduced.derivative();
            roots.extend(raw.into_iter().map(|r| polish(&reduced, &dp, r)));
        }
    }

    // Residual acceptance test against the *original* polynomial.
    let mut worst = 0.0f64;
    for &r in &roots {
        let bound = tol * scale * r.norm().max(1.0).powi(full_degree as i32);
        let resid = p.eval(r).norm();
        if resid > bound {
            worst = worst.max(resid / bound);
        }
    }
    if worst > 0.0 {
        return Err(AlgebraError::IllConditioned {
            detail: format!("root residual exceeds tolerance by factor {worst:.3e}"),
        });
    }
    Ok(roots)
}

/// Stable quadratic formula: the larger root by the non-cancelling branch,
/// the smaller via the product of roots.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Pick the sign that maximizes |b ∓ disc| to avoid cancellation.
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q.norm() == 0.0 {
        [Complex64::ZERO, Complex64::ZERO]
    } else {
        [q / a, c / q]
    }
}

/// Newton refinement that never accepts a step increasing `|p|`.
fn polish(p: &Polynomial, dp: &Polynomial, mut r: Complex64) -> Complex64 {
    let mut best = r;
    let mut best_resid = p.eval(r).norm();
    for _ in 0..8 {
        let d = dp.eval(r);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval(r) / d;
        r -= step;
        let resid = p.eval(r).norm();
        if resid < best_resid {
            best_resid = resid;
            best = r;
        }
        if step.norm() <= 1e-16 * r.norm().max(1.0) {
            break;
        }
    }
    best
}
