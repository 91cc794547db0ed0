//! Independent correctness oracles for the reduction.
//!
//! * Solution-substitution: power-series solutions of the first-order
//!   system give exact derivative jets of `y = φ_row`; substituting them
//!   into the produced scalar equation must annihilate the residual.
//! * Numerator identity: an independently built derivative ladder (without
//!   the back-substitution of `y`-terms) must satisfy a pure polynomial
//!   identity against `Δ` and the stored numerators.

use algebra_core::{cx, CMat, CVec, Polynomial, Scalar};
use fuchsian_model::{random_generic, FuchsianSystem};
use scalar_reduction::{reduce, ScalarReduction};

/// Power-series coefficients (vector-valued) of the solution of
/// `φ' = A(z)φ` around an ordinary point `z0` with `φ(z0) = init`,
/// up to and including order `terms−1`.
fn series_solution(sys: &FuchsianSystem, z0: Scalar, init: CVec, terms: usize) -> Vec<CVec> {
    let m = sys.m();
    // A(z) = Σ_j A^{(j)} (z−z0)^j with A^{(j)} = −Σ_k A_k/(u_k−z0)^{j+1}.
    let mut a_jets: Vec<CMat> = Vec::with_capacity(terms);
    for j in 0..terms {
        let mut acc = CMat::zeros(m, m);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        for k in 0..sys.n() {
            let d = z0 - sys.poles()[k];
            let coef = cx(sign, 0.0) / d.powu(j as u32 + 1);
            acc += sys.residue(k) * coef;
        }
        a_jets.push(acc);
    }
    let mut c: Vec<CVec> = vec![init];
    for k in 0..terms - 1 {
        let mut next = CVec::zeros(m);
        for j in 0..=k {
            next += &a_jets[j] * &c[k - j];
        }
        c.push(next * cx(1.0 / (k as f64 + 1.0), 0.0));
    }
    c
}

/// Sample points at a safe distance from every pole and apparent
/// singularity.
fn safe_points(sys: &FuchsianSystem, red: &ScalarReduction, count: usize) -> Vec<Scalar> {
    let centroid: Scalar = sys.poles().iter().sum::<Scalar>() / cx(sys.n() as f64, 0.0);
    let mut bad: Vec<Scalar> = sys.poles().to_vec();
    bad.extend(
        algebra_core::poly_roots(red.delta(), 1e-6)
            .unwrap_or_default()
            .into_iter(),
    );
    let mut picked = Vec::new();
    let mut t = 0usize;
    while picked.len() < count && t < 200 {
        let ang = 0.7 + t as f64 * 2.399963; // golden-angle sweep
        let rad = 0.4 + 0.17 * (t % 7) as f64;
        let z = centroid + cx(rad * ang.cos(), rad * ang.sin());
        if bad.iter().all(|&b| (z - b).norm() > 0.35) {
            picked.push(z);
        }
        t += 1;
    }
    assert!(picked.len() == count, "could not place sample points");
    picked
}

/// Substituting exact series jets of system solutions into the scalar
/// equation annihilates it.
#[test]
fn series_solutions_satisfy_the_scalar_equation() {
    for (m, n, seed) in [(2usize, 3usize, 101u64), (3, 3, 102), (3, 4, 103), (2, 4, 104)] {
        let sys = random_generic(m, n, seed, 0.5).unwrap();
        let red = reduce(&sys, 0).unwrap();
        for z0 in safe_points(&sys, &red, 4) {
            for init_idx in 0..m {
                let mut init = CVec::zeros(m);
                init[init_idx] = Scalar::ONE;
                let jets = series_solution(&sys, z0, init, m + 1);
                // y^(l)(z0) = l! · (component `row` of jet l).
                let mut fact = 1.0;
                let mut derivs = Vec::with_capacity(m + 1);
                for (l, jet) in jets.iter().enumerate() {
                    if l > 0 {
                        fact *= l as f64;
                    }
                    derivs.push(jet[red.row()] * cx(fact, 0.0));
                }
                let lhs = derivs[m];
                let rhs = red.apply(z0, &derivs[..m]);
                let scale = derivs
                    .iter()
                    .map(|d| d.norm())
                    .fold(1.0_f64, f64::max);
                assert!(
                    (lhs - rhs).norm() <= 1e-7 * scale,
                    "(m,n)=({m},{n}) seed {seed} z0={z0} init {init_idx}: \
                     residual {:.3e} (scale {scale:.3e})",
                    (lhs - rhs).norm()
                );
            }
        }
    }
}

/// Independent derivative ladder: with `Ñ_l` the vector of polynomials
/// `R^l · (row of the l-th derivative operator)`, built without any
/// elimination, the stored reduction must satisfy
/// `Δ·Ñ_m = Σ_l f_l·Ñ_l` identically.
#[test]
fn numerator_identity_holds_pointwise() {
    for (m, n, seed) in [(2usize, 3usize, 111u64), (3, 3, 112), (3, 4, 113)] {
        let sys = random_generic(m, n, seed, 0.5).unwrap();
        let red = reduce(&sys, 0).unwrap();

        let r = Polynomial::from_roots(Scalar::ONE, sys.poles());
        let r_prime = r.derivative();
        let n_mat: Vec<Vec<Polynomial>> = (0..m)
            .map(|s| {
                (0..m)
                    .map(|t| {
                        let mut acc = Polynomial::zero();
                        for k in 0..sys.n() {
                            let others: Vec<Scalar> = (0..sys.n())
                                .filter(|&x| x != k)
                                .map(|x| sys.poles()[x])
                                .collect();
                            let cof = Polynomial::from_roots(sys.residue(k)[(s, t)], &others);
                            acc = &acc + &cof;
                        }
                        acc
                    })
                    .collect()
            })
            .collect();

        // ladder[l][t] = R^l · (operator sending φ to y^(l)), as polynomials.
        let mut ladder: Vec<Vec<Polynomial>> = Vec::with_capacity(m + 1);
        let mut first = vec![Polynomial::zero(); m];
        first[0] = Polynomial::one(); // row 0 is the reduction row here
        ladder.push(first);
        for l in 0..m {
            let prev = &ladder[l];
            let lw = cx(l as f64, 0.0);
            let next: Vec<Polynomial> = (0..m)
                .map(|t| {
                    let mut acc = &(&r * &prev[t].derivative()) - &(&r_prime * &prev[t]).scale(lw);
                    for (s, prev_s) in prev.iter().enumerate() {
                        acc = &acc + &(prev_s * &n_mat[s][t]);
                    }
                    acc
                })
                .collect();
            ladder.push(next);
        }

        let spread = sys
            .poles()
            .iter()
            .map(|u| u.norm())
            .fold(0.0_f64, f64::max);
        for t in 0..m {
            for point in 0..20 {
                let ang = point as f64 * 0.31415 + 0.1;
                let z = cx((2.0 * spread + 1.0) * ang.cos(), (2.0 * spread + 1.0) * ang.sin());
                let lhs = red.delta().eval(z) * ladder[m][t].eval(z);
                let mut rhs = Scalar::ZERO;
                let mut scale = lhs.norm();
                for l in 0..m {
                    let term = red.numerators()[l].eval(z) * ladder[l][t].eval(z);
                    rhs += term;
                    scale = scale.max(term.norm());
                }
                assert!(
                    (lhs - rhs).norm() <= 1e-9 * scale.max(1.0),
                    "(m,n)=({m},{n}) component {t} at z={z}: defect {:.3e} of {scale:.3e}",
                    (lhs - rhs).norm()
                );
            }
        }
    }
}
