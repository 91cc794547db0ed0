//! Exponent audits of reduced equations against the source system.
//!
//! A correct reduction is invisible at the original poles: the indicial
//! roots there must reproduce the residue spectra exactly, the roots at
//! infinity must show the expected unit shifts away from the reduction row,
//! and every apparent singularity must carry the integer spectrum
//! `{0, …, m−2, m}` of a log-free extra zero of the Wronskian.

use algebra_core::{cx, poly_roots, Scalar};
use fuchsian_model::random_generic;
use scalar_reduction::audit::{
    fuchs_relation_defect, indicial_at_apparent, indicial_at_infinity, indicial_at_pole,
};
use scalar_reduction::{apparent_singularities, reduce};

const SIZES: [(usize, usize, u64); 4] = [(2, 3, 301), (3, 3, 302), (3, 4, 303), (2, 4, 304)];

fn sort_key(z: &Scalar) -> (f64, f64) {
    (z.re, z.im)
}

fn assert_same_set(mut got: Vec<Scalar>, mut want: Vec<Scalar>, tol: f64, what: &str) {
    assert_eq!(got.len(), want.len(), "{what}: cardinality");
    got.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
    want.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
    for (g, w) in got.iter().zip(&want) {
        assert!(
            (g - w).norm() < tol,
            "{what}: root {g} vs expected {w} (all got {got:?}, want {want:?})"
        );
    }
}

/// Indicial roots at each finite pole reproduce the residue eigenvalues.
#[test]
fn finite_indicial_roots_match_residue_spectra() {
    for (m, n, seed) in SIZES {
        let sys = random_generic(m, n, seed, 0.5).unwrap();
        let red = reduce(&sys, 0).unwrap();
        for k in 0..n {
            let t = indicial_at_pole(&red, k).unwrap();
            let roots = poly_roots(&t, 1e-10).unwrap();
            assert_same_set(
                roots,
                red.exponents().finite[k].clone(),
                1e-7,
                &format!("(m,n)=({m},{n}) pole {k}"),
            );
        }
    }
}

/// Indicial roots at infinity: the reduction row keeps its exponent, every
/// other row is shifted up by one.
#[test]
fn infinity_indicial_roots_show_unit_shifts() {
    for (m, n, seed) in SIZES {
        let sys = random_generic(m, n, seed, 0.5).unwrap();
        let row = 0;
        let red = reduce(&sys, row).unwrap();
        let t = indicial_at_infinity(&red);
        let roots = poly_roots(&t, 1e-10).unwrap();
        let want: Vec<Scalar> = red
            .exponents()
            .infinity
            .iter()
            .enumerate()
            .map(|(j, &lam)| if j == row { lam } else { lam + Scalar::ONE })
            .collect();
        assert_same_set(roots, want, 1e-7, &format!("(m,n)=({m},{n}) infinity"));
    }
}

/// Apparent singularities are log-free: indicial roots `{0,…,m−2,m}` and a
/// unit residue of the top coefficient `d_{m−1}`.
#[test]
fn apparent_singularities_are_log_free() {
    for (m, n, seed) in SIZES {
        let sys = random_generic(m, n, seed, 0.5).unwrap();
        let red = reduce(&sys, 0).unwrap();
        let q = apparent_singularities(&red).unwrap();
        let want: Vec<Scalar> = (0..m - 1)
            .chain(std::iter::once(m))
            .map(|v| cx(v as f64, 0.0))
            .collect();
        for &qs in &q {
            let t = indicial_at_apparent(&red, qs).unwrap();
            let roots = poly_roots(&t, 1e-10).unwrap();
            assert_same_set(
                roots,
                want.clone(),
                1e-7,
                &format!("(m,n)=({m},{n}) apparent {qs}"),
            );
            let (order, coeffs) = red.coefficients()[m - 1].laurent_at(qs, 2).unwrap();
            assert_eq!(order, 1, "(m,n)=({m},{n}): top coefficient pole order");
            assert!(
                (coeffs[0] - Scalar::ONE).norm() < 1e-7,
                "(m,n)=({m},{n}): residue of d_(m-1) at {qs} is {}",
                coeffs[0]
            );
        }
    }
}

/// The exponent sums across all singular points satisfy the Fuchs relation.
#[test]
fn fuchs_relation_holds() {
    for (m, n, seed) in SIZES {
        let sys = random_generic(m, n, seed, 0.5).unwrap();
        let red = reduce(&sys, 0).unwrap();
        let q = apparent_singularities(&red).unwrap();
        let defect = fuchs_relation_defect(&red, &q).unwrap();
        assert!(
            defect.norm() < 1e-8,
            "(m,n)=({m},{n}): Fuchs defect {defect}"
        );
    }
}

/// `d_{m−1}` is a bare partial-fraction sum: unit residues at the apparent
/// singularities and residues `σ₁^{(i)} − m(m−1)/2` at the poles, with no
/// polynomial part.
#[test]
fn top_coefficient_has_the_expected_partial_fractions() {
    for (m, n, seed) in SIZES {
        let sys = random_generic(m, n, seed, 0.5).unwrap();
        let red = reduce(&sys, 0).unwrap();
        let q = apparent_singularities(&red).unwrap();
        let shift = (m * (m - 1)) as f64 / 2.0;
        let b1: Vec<Scalar> = (0..n)
            .map(|i| red.exponents().sigma(i, 1) - cx(shift, 0.0))
            .collect();
        // Compare pointwise on a probe set away from all singularities.
        for t in 0..8 {
            let ang = 0.7 + t as f64;
            let z = cx(1.9 * ang.cos(), 1.9 * ang.sin()) + cx(0.31, 0.17);
            let mut expected = Scalar::ZERO;
            for &qs in &q {
                expected += (z - qs).inv();
            }
            for (i, &ui) in red.poles().iter().enumerate() {
                expected += b1[i] / (z - ui);
            }
            let got = red.coefficients()[m - 1].eval(z);
            assert!(
                (got - expected).norm() < 1e-7 * expected.norm().max(1.0),
                "(m,n)=({m},{n}) at z={z}: {got} vs {expected}"
            );
        }
    }
}

/// The constant Laurent term of `d_{m−1}` at each apparent singularity
/// matches its closed form through `Δ` and the pole residues.
#[test]
fn top_coefficient_constant_terms_close() {
    for (m, n, seed) in SIZES {
        let sys = random_generic(m, n, seed, 0.5).unwrap();
        let red = reduce(&sys, 0).unwrap();
        let q = apparent_singularities(&red).unwrap();
        let shift = (m * (m - 1)) as f64 / 2.0;
        let dp = red.delta().derivative();
        let dpp = dp.derivative();
        for &qs in &q {
            let (order, coeffs) = red.coefficients()[m - 1].laurent_at(qs, 2).unwrap();
            assert_eq!(order, 1);
            let got = coeffs[1];
            let mut expected = cx(0.5, 0.0) * dpp.eval(qs) / dp.eval(qs);
            for (i, &ui) in red.poles().iter().enumerate() {
                let b1 = red.exponents().sigma(i, 1) - cx(shift, 0.0);
                expected += b1 / (qs - ui);
            }
            assert!(
                (got - expected).norm() < 1e-6 * expected.norm().max(1.0),
                "(m,n)=({m},{n}) at q={qs}: {got} vs {expected}"
            );
        }
    }
}
