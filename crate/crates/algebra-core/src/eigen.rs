//! Dense complex eigensolver: balancing, Householder Hessenberg reduction,
//! and explicitly shifted QR iteration with Wilkinson shifts.
//!
//! nalgebra ships real Schur decompositions only, so this crate carries its
//! own complex solver. It serves two distinct masters: companion matrices of
//! monic polynomials (root-finding) and spectra of residue matrices. Sizes
//! stay modest (≤ ~30), so the O(n³) explicit-shift sweep is more than fast
//! enough and much easier to audit than an implicit double-shift chase.

use num_complex::Complex64;

use crate::error::AlgebraError;
use crate::linalg::{CMat, CVec, Lu};

/// Maximum QR sweeps per eigenvalue before giving up.
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Diagonal similarity scaling by powers of two (Parlett–Reinsch), bringing
/// row and column norms close together; exact in floating point and often
/// worth several digits for companion matrices with uneven coefficient
/// scales.
fn balance(a: &mut CMat) {
    let n = a.nrows();
    let radix = 2.0f64;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut row_norm = 0.0;
            let mut col_norm = 0.0;
            for j in 0..n {
                if j != i {
                    row_norm += a[(i, j)].norm();
                    col_norm += a[(j, i)].norm();
                }
            }
            if row_norm == 0.0 || col_norm == 0.0 {
                continue;
            }
            let mut factor = 1.0;
            let mut col = col_norm;
            let mut row = row_norm;
            let target = 0.95 * (col_norm + row_norm);
            while col < row / radix {
                factor *= radix;
                col *= radix;
                row /= radix;
            }
            while col > row * radix {
                factor /= radix;
                col /= radix;
                row *= radix;
            }
            if col + row < target && factor != 1.0 {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= factor;
                }
                for j in 0..n {
                    a[(j, i)] *= factor;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut CMat) {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        // Build the reflector annihilating column k below the subdiagonal.
        let mut norm2 = 0.0;
        for i in (k + 1)..n {
            norm2 += a[(i, k)].norm_sqr();
        }
        let alpha = a[(k + 1, k)];
        let norm = norm2.sqrt();
        if norm == 0.0 {
            continue;
        }
        // Choose the sign that avoids cancellation.
        let phase = if alpha.norm() == 0.0 {
            Complex64::ONE
        } else {
            alpha / alpha.norm()
        };
        let beta = -phase * norm;
        let mut v = CVec::zeros(n);
        for i in (k + 1)..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= beta;
        let vnorm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← (I − 2vv*/v*v) A (I − 2vv*/v*v), applied as two rank-1 updates.
        let scale = 2.0 / vnorm2;
        for j in 0..n {
            let mut dot = Complex64::ZERO;
            for i in (k + 1)..n {
                dot += v[i].conj() * a[(i, j)];
            }
            dot *= scale;
            for i in (k + 1)..n {
                let vi = v[i];
                a[(i, j)] -= vi * dot;
            }
        }
        for i in 0..n {
            let mut dot = Complex64::ZERO;
            for j in (k + 1)..n {
                dot += a[(i, j)] * v[j];
            }
            dot *= scale;
            for j in (k + 1)..n {
                a[(i, j)] -= dot * v[j].conj();
            }
        }
        a[(k + 1, k)] = beta;
        for i in (k + 2)..n {
            a[(i, k)] = Complex64::ZERO;
        }
    }
}

/// Wilkinson shift: the eigenvalue of the trailing 2×2 block closest to the
/// bottom-right entry.
fn wilkinson_shift(h: &CMat, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let e1 = (tr + disc) / 2.0;
    let e2 = (tr - disc) / 2.0;
    if (e1 - d).norm() < (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// Eigenvalues of a square complex matrix, in no particular order.
///
/// # Errors
/// [`AlgebraError::InvalidInput`] for non-square input;
/// [`AlgebraError::IllConditioned`] if the QR iteration fails to deflate.
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>, AlgebraError> {
    if a.nrows() != a.ncols() {
        return Err(AlgebraError::InvalidInput(format!(
            "eigenvalues of a {}×{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);

    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1; // active block is rows/cols 0..=hi
    let mut sweeps_since_deflation = 0usize;
    let norm_scale: f64 = h.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);

    while eigs.len() < n {
        if hi == 0 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // Deflate any negligible subdiagonal entry at the bottom of the block.
        let sub = h[(hi, hi - 1)].norm();
        let local = h[(hi, hi)].norm() + h[(hi - 1, hi - 1)].norm();
        if sub <= f64::EPSILON * local.max(norm_scale * 1e-3) {
            eigs.push(h[(hi, hi)]);
            hi -= 1;
            sweeps_since_deflation = 0;
            continue;
        }
        if sweeps_since_deflation >= MAX_SWEEPS_PER_EIGENVALUE {
            return Err(AlgebraError::IllConditioned {
                detail: format!("QR iteration stalled with {} eigenvalues left", n - eigs.len()),
            });
        }
        // Find the top of the unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo, lo - 1)].norm();
            let loc = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if s <= f64::EPSILON * loc.max(norm_scale * 1e-3) {
                h[(lo, lo - 1)] = Complex64::ZERO;
                break;
            }
            lo -= 1;
        }
        // Occasional exceptional shift to break symmetry-induced stalls.
        let shift = if sweeps_since_deflation > 0 && sweeps_since_deflation % 12 == 0 {
            h[(hi, hi)] + Complex64::new(sub * 1.1, sub * 0.9)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_sweep(&mut h, lo, hi, shift);
        sweeps_since_deflation += 1;
    }
    Ok(eigs)
}

/// One explicit shifted QR sweep on the active Hessenberg block `lo..=hi`:
/// factor `H − σI = QR` with Givens rotations, then form `RQ + σI`.
fn qr_sweep(h: &mut CMat, lo: usize, hi: usize, shift: Complex64) {
    let n = h.ncols();
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    // Store the rotation (c, s) used at each step; the sweep applies them
    // from the left, then from the right in the same order.
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (1.0.into(), Complex64::ZERO)
        } else {
            (x.conj() / r, y.conj() / r)
        };
        // Rows k, k+1 ← rotation applied from the left.
        for j in k..n {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c * a + s * b;
            h[(k + 1, j)] = -s.conj() * a + c.conj() * b;
        }
        rotations.push((c, s));
    }
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        // Columns k, k+1 ← rotation applied from the right.
        let top = 0;
        for i in top..=(k + 1).min(hi) {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c.conj() + b * s.conj();
            h[(i, k + 1)] = -a * s + b * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Eigenvalues together with (right) eigenvectors obtained by inverse
/// iteration, column `j` of the returned matrix matching `values[j]`.
///
/// Intended for matrices with well-separated eigenvalues (the generic
/// situation everywhere in this toolkit); clustered spectra may yield nearly
/// dependent columns.
///
/// # Errors
/// Propagates [`eigenvalues`] failures.
pub fn eigen_pairs(a: &CMat) -> Result<(Vec<Complex64>, CMat), AlgebraError> {
    let values = eigenvalues(a)?;
    let n = a.nrows();
    let scale: f64 = a.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    let mut vectors = CMat::zeros(n, n);
    for (j, &lambda) in values.iter().enumerate() {
        // Shift slightly off the eigenvalue so the solve stays finite; two
        // iterations are ample at this separation.
        let eps = scale * 1e-11 * (1.0 + j as f64 * 0.37);
        let shifted = a - CMat::identity(n, n) * (lambda + Complex64::new(eps, eps / 3.0));
        let lu = match Lu::factor(&shifted, 0.0) {
            Ok(lu) => lu,
            Err(_) => {
                // Extremely defective shift: nudge harder.
                let shifted =
                    a - CMat::identity(n, n) * (lambda + Complex64::new(eps * 1e3, -eps * 1e3));
                Lu::factor(&shifted, 0.0).map_err(|_| AlgebraError::IllConditioned {
                    detail: "inverse iteration could not factor shifted matrix".into(),
                })?
            }
        };
        let mut v = CVec::from_fn(n, |i, _| {
            Complex64::new(
                (1.0 + i as f64 * 0.83 + j as f64 * 0.29).sin(),
                (2.0 + i as f64 * 0.57 - j as f64 * 0.41).cos(),
            )
        });
        for _ in 0..3 {
            v = lu.solve_vec(&v);
            let norm = v.norm();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            v /= Complex64::new(norm, 0.0);
        }
        vectors.set_column(j, &v);
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sort_by_re_im(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .expect("finite eigenvalues")
        });
        v
    }

    #[test]
    fn diagonal_matrix_spectrum() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0)]));
        let eigs = sort_by_re_im(eigenvalues(&a).unwrap());
        let want = sort_by_re_im(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0)]);
        for (e, w) in eigs.iter().zip(&want) {
            assert!((e - w).norm() < 1e-12, "{e} vs {w}");
        }
    }

    #[test]
    fn conjugated_spectrum_is_preserved() {
        // S·diag(λ)·S⁻¹ has the same spectrum; S is a fixed invertible matrix.
        let lambda = [c(2.0, 1.0), c(-1.0, -1.0), c(0.5, 3.0), c(-2.5, 0.0)];
        let d = CMat::from_diagonal(&CVec::from_vec(lambda.to_vec()));
        let s = CMat::from_fn(4, 4, |i, j| {
            c(
                1.0 / (1.0 + (i + 2 * j) as f64),
                ((i * j) as f64 * 0.31).sin(),
            )
        });
        let s_inv = s.clone().try_inverse().expect("invertible test matrix");
        let a = &s * d * s_inv;
        let eigs = sort_by_re_im(eigenvalues(&a).unwrap());
        let want = sort_by_re_im(lambda.to_vec());
        for (e, w) in eigs.iter().zip(&want) {
            assert!((e - w).norm() < 1e-9, "{e} vs {w}");
        }
    }

    #[test]
    fn eigen_pairs_satisfy_definition() {
        let a = CMat::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(2.0, -1.0),
                c(0.0, 0.5),
                c(0.0, 1.0),
                c(-1.0, 0.0),
                c(1.0, 1.0),
                c(0.3, 0.0),
                c(0.0, 0.0),
                c(2.0, 2.0),
            ],
        );
        let (vals, vecs) = eigen_pairs(&a).unwrap();
        for (j, &lambda) in vals.iter().enumerate() {
            let v = vecs.column(j).into_owned();
            let resid = (&a * &v - &v * lambda).norm();
            assert!(resid < 1e-8, "eigenpair residual {resid}");
        }
    }

    #[test]
    fn handles_multiple_eigenvalues_gracefully() {
        // Jordan-like matrix: eigenvalue 2 with algebraic multiplicity 3.
        let mut a = CMat::identity(3, 3) * c(2.0, 0.0);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 2)] = c(1.0, 0.0);
        let eigs = eigenvalues(&a).unwrap();
        for e in eigs {
            assert!((e - c(2.0, 0.0)).norm() < 1e-4, "defective eigenvalue {e}");
        }
    }
}
