//! Indicial polynomials and exponent bookkeeping for a reduced equation.
//!
//! At a finite regular singular point `z₀` the substitution
//! `y = (z−z₀)^λ` in `y^(m) = Σ d_l y^(l)` yields the indicial polynomial
//!
//! ```text
//! T(λ) = [λ]_m + Σ_{j=1..m} b_j·[λ]_{m−j},    b_j = −lim (z−z₀)^j d_{m−j},
//! ```
//!
//! in the falling factorials `[λ]_k = λ(λ−1)⋯(λ−k+1)`. At infinity the
//! substitution `y = z^{−λ}` gives the rising-factorial version
//!
//! ```text
//! T∞(λ) = ⟨λ⟩_m + Σ_{j=1..m} (−1)^j·b_j(∞)·⟨λ⟩_{m−j},
//!         b_j(∞) = −lim z^j d_{m−j},   ⟨λ⟩_k = λ(λ+1)⋯(λ+k−1).
//! ```
//!
//! Both limits are exact coefficient ratios of the stored numerators, so no
//! numerical limiting is involved.

use algebra_core::{cx, Polynomial, Scalar};

use crate::error::ReductionError;
use crate::reduction::ScalarReduction;

/// Falling factorial `[λ]_k` as a polynomial in `λ`.
pub fn falling_factorial(k: usize) -> Polynomial {
    let roots: Vec<Scalar> = (0..k).map(|i| cx(i as f64, 0.0)).collect();
    Polynomial::from_roots(Scalar::ONE, &roots)
}

/// Rising factorial `⟨λ⟩_k` as a polynomial in `λ`.
pub fn rising_factorial(k: usize) -> Polynomial {
    let roots: Vec<Scalar> = (0..k).map(|i| cx(-(i as f64), 0.0)).collect();
    Polynomial::from_roots(Scalar::ONE, &roots)
}

/// Indicial polynomial at the finite pole `u_k` of the source system.
pub fn indicial_at_pole(red: &ScalarReduction, k: usize) -> Result<Polynomial, ReductionError> {
    let m = red.m();
    if k >= red.n() {
        return Err(ReductionError::InvalidInput(format!(
            "pole index {k} out of range for {} poles",
            red.n()
        )));
    }
    let u = red.poles()[k];
    let delta_at = red.delta().eval(u);
    let r_prime_at = red.pole_polynomial().derivative().eval(u);
    if delta_at.norm() == 0.0 || r_prime_at.norm() == 0.0 {
        return Err(ReductionError::InvalidInput(
            "degenerate configuration at the pole".into(),
        ));
    }
    let mut t = falling_factorial(m);
    for j in 1..=m {
        // b_j = −lim (z−u)^j d_{m−j};  d_{m−j} = f_{m−j}/(Δ·R^j) and the
        // j-fold pole sits entirely in R^j.
        let bj = -red.numerators()[m - j].eval(u) / (delta_at * r_prime_at.powu(j as u32));
        t = &t + &falling_factorial(m - j).scale(bj);
    }
    Ok(t)
}

/// Indicial polynomial at infinity.
pub fn indicial_at_infinity(red: &ScalarReduction) -> Polynomial {
    let m = red.m();
    let n = red.n();
    let deg_delta = red.delta().degree().unwrap_or(0);
    let mut t = rising_factorial(m);
    for j in 1..=m {
        // b_j(∞) = −lim z^j d_{m−j}: the coefficient of f_{m−j} at its
        // budget degree, downshifted by the monic Δ and R powers.
        let budget = deg_delta + (n - 1) * j;
        let bj = -red.numerators()[m - j].coeff(budget);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        t = &t + &rising_factorial(m - j).scale(bj * cx(sign, 0.0));
    }
    t
}

/// Indicial polynomial at an apparent singularity `q` (simple root of `Δ`).
pub fn indicial_at_apparent(
    red: &ScalarReduction,
    q: Scalar,
) -> Result<Polynomial, ReductionError> {
    let m = red.m();
    let mut t = falling_factorial(m);
    for j in 1..=m {
        let (order, coeffs) = red.coefficients()[m - j].laurent_at(q, 1)?;
        if order > j {
            return Err(ReductionError::PoleAtApparent { point: q, order });
        }
        // −lim (z−q)^j d_{m−j} vanishes unless the pole order reaches j.
        if order == j {
            t = &t + &falling_factorial(m - j).scale(-coeffs[0]);
        }
    }
    Ok(t)
}

/// Sum of all local exponents minus the Fuchs-relation value
/// `(g+n−1)·m(m−1)/2`; rounding-level for a true reduction.
///
/// Exponent sums are read off as Vieta coefficient ratios, so no root
/// extraction is involved.
pub fn fuchs_relation_defect(red: &ScalarReduction, q: &[Scalar]) -> Result<Scalar, ReductionError> {
    let m = red.m();
    let n = red.n();
    let g = q.len();
    let vieta_sum = |t: &Polynomial| -> Result<Scalar, ReductionError> {
        let deg = t
            .degree()
            .ok_or_else(|| ReductionError::InvalidInput("zero indicial polynomial".into()))?;
        Ok(-t.coeff(deg - 1) / t.coeff(deg))
    };
    let mut total = Scalar::ZERO;
    for k in 0..n {
        total += vieta_sum(&indicial_at_pole(red, k)?)?;
    }
    total += vieta_sum(&indicial_at_infinity(red))?;
    for &qs in q {
        total += vieta_sum(&indicial_at_apparent(red, qs)?)?;
    }
    let expected = (g + n - 1) as f64 * (m * (m - 1)) as f64 / 2.0;
    Ok(total - cx(expected, 0.0))
}
