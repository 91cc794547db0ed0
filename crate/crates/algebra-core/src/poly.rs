//! Dense univariate polynomials over ℂ, lowest-degree coefficient first.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::AlgebraError;

/// A polynomial `Σ_k coeffs[k]·z^k` with complex coefficients.
///
/// The zero polynomial is stored with an empty coefficient vector; for any
/// other polynomial the leading (last) coefficient is nonzero, so
/// `degree = coeffs.len() − 1`. Construction trims *exact* zeros only;
/// numerically tiny leading coefficients left over from floating-point
/// cancellation must be removed explicitly with [`Polynomial::trim`], because
/// whether they are noise is a statement about the caller's problem, not
/// about the representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming exact
    /// trailing zeros.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// A constant polynomial.
    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·z^k`.
    pub fn monomial(k: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::ZERO; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `Π_i (z − r_i)` scaled by `leading`.
    pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> Self {
        let mut p = Self::constant(leading);
        for &r in roots {
            p = &p * &Self::new(vec![-r, Complex64::ONE]);
        }
        p
    }

    /// `true` iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficient slice (empty for the zero polynomial).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(Complex64::ZERO)
    }

    /// Largest coefficient magnitude (zero for the zero polynomial).
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// First derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::new(coeffs)
    }

    /// Drops trailing coefficients whose magnitude is at most
    /// `tol · max|coeff|`; used to restore the nonzero-leading invariant
    /// after cancellation-prone arithmetic.
    pub fn trim(&self, tol: f64) -> Self {
        let scale = self.max_coeff_norm();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= tol * scale) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Rescales so the leading coefficient becomes exactly `1`.
    ///
    /// Returns the zero polynomial unchanged.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(&lead) => Self::new(self.coeffs.iter().map(|&c| c / lead).collect()),
        }
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Taylor coefficients `p(z0), p'(z0)/1!, …` up to order `n_terms − 1`,
    /// computed by repeated synthetic division (Ruffini–Horner), which is
    /// backward stable.
    pub fn taylor_at(&self, z0: Complex64, n_terms: usize) -> Vec<Complex64> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(n_terms);
        for _ in 0..n_terms {
            if work.is_empty() {
                out.push(Complex64::ZERO);
                continue;
            }
            // One synthetic-division pass leaves the quotient in `work`
            // and the remainder — the next Taylor coefficient — at the end.
            let mut carry = Complex64::ZERO;
            for c in work.iter_mut().rev() {
                carry = carry * z0 + *c;
                *c = carry;
            }
            out.push(work.remove(0));
        }
        out
    }

    /// Quotient and remainder of `self / divisor` with `deg rem < deg divisor`.
    ///
    /// # Errors
    /// [`AlgebraError::InvalidInput`] if `divisor` is the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), AlgebraError> {
        let d_deg = divisor
            .degree()
            .ok_or_else(|| AlgebraError::InvalidInput("division by zero polynomial".into()))?;
        let Some(n_deg) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n_deg < d_deg {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = divisor.coeffs[d_deg];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex64::ZERO; n_deg - d_deg + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + d_deg] / lead;
            quot[k] = q;
            for j in 0..=d_deg {
                rem[k + j] -= q * divisor.coeffs[j];
            }
        }
        rem.truncate(d_deg);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Synthetic division by `(z − r)`: returns the quotient and the
    /// remainder `p(r)`.
    pub fn deflate(&self, r: Complex64) -> (Self, Complex64) {
        if self.coeffs.is_empty() {
            return (Self::zero(), Complex64::ZERO);
        }
        let mut quot = vec![Complex64::ZERO; self.coeffs.len() - 1];
        let mut carry = Complex64::ZERO;
        for k in (0..self.coeffs.len()).rev() {
            carry = carry * r + self.coeffs[k];
            if k > 0 {
                quot[k - 1] = carry;
            }
        }
        (Self::new(quot), carry)
    }

    /// Interpolates through scattered `(node, value)` pairs by Newton divided
    /// differences, then expands to the monomial basis.
    ///
    /// Intended for moderate point counts (tens of nodes); for periodic node
    /// sets prefer [`Polynomial::interpolate_on_circle`], which is perfectly
    /// conditioned.
    ///
    /// # Errors
    /// [`AlgebraError::InvalidInput`] on empty input or coincident nodes.
    pub fn interpolate(points: &[(Complex64, Complex64)]) -> Result<Self, AlgebraError> {
        if points.is_empty() {
            return Err(AlgebraError::InvalidInput(
                "interpolation needs at least one point".into(),
            ));
        }
        let n = points.len();
        // Divided-difference table, updated in place column by column.
        let mut dd: Vec<Complex64> = points.iter().map(|&(_, v)| v).collect();
        for col in 1..n {
            for row in (col..n).rev() {
                let dx = points[row].0 - points[row - col].0;
                if dx.norm() == 0.0 {
                    return Err(AlgebraError::InvalidInput(
                        "coincident interpolation nodes".into(),
                    ));
                }
                dd[row] = (dd[row] - dd[row - 1]) / dx;
            }
        }
        // Horner-style expansion of the Newton form into monomials.
        let mut p = Self::zero();
        for k in (0..n).rev() {
            let factor = Self::new(vec![-points[k].0, Complex64::ONE]);
            p = &(&p * &factor) + &Self::constant(dd[k]);
        }
        Ok(p)
    }

    /// Interpolates a polynomial of degree ≤ `max_degree` from its values at
    /// the equally spaced circle nodes `center + radius·ω^j`, `ω = e^{2πi/n}`,
    /// with `n = values.len() > max_degree`.
    ///
    /// The coefficients in the shifted variable `w = z − center` come from an
    /// inverse discrete Fourier transform (a unitary system, hence no
    /// conditioning loss); the final Taylor shift back to `z` is a stable
    /// Horner-type expansion. Shifted coefficients beyond `max_degree` are
    /// discarded *before* the shift — they are pure rounding noise when the
    /// sampled function really is a polynomial within the budget, and the
    /// shift's binomial weights would otherwise amplify them — and their
    /// largest magnitude relative to the kept coefficients is returned so
    /// callers can audit their degree claim.
    ///
    /// `values[j]` must be the value at node `j`.
    ///
    /// # Errors
    /// [`AlgebraError::InvalidInput`] on empty input or if fewer than
    /// `max_degree + 1` nodes are supplied.
    pub fn interpolate_on_circle(
        center: Complex64,
        radius: f64,
        values: &[Complex64],
        max_degree: usize,
    ) -> Result<(Self, f64), AlgebraError> {
        let n = values.len();
        if n == 0 {
            return Err(AlgebraError::InvalidInput(
                "interpolation needs at least one node".into(),
            ));
        }
        if n < max_degree + 1 {
            return Err(AlgebraError::InvalidInput(format!(
                "{n} nodes cannot determine degree {max_degree}"
            )));
        }
        let mut w_coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = Complex64::ZERO;
            for (j, &v) in values.iter().enumerate() {
                let angle = -2.0 * std::f64::consts::PI * (j * k % n) as f64 / n as f64;
                acc += v * Complex64::from_polar(1.0, angle);
            }
            w_coeffs.push(acc / (n as f64 * radius.powi(k as i32)));
        }
        // Relative size of the discarded tail, measured in the scale-free
        // quantities a_k·r^k (the raw Fourier amplitudes).
        let amplitude = |k: usize| w_coeffs[k].norm() * radius.powi(k as i32);
        let kept_scale = (0..=max_degree).map(amplitude).fold(0.0, f64::max);
        let tail_scale = (max_degree + 1..n).map(amplitude).fold(0.0, f64::max);
        let tail = if kept_scale > 0.0 {
            tail_scale / kept_scale
        } else if tail_scale > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        w_coeffs.truncate(max_degree + 1);
        // p(z) = Σ a_k (z − center)^k, expanded via repeated multiplication.
        let mut p = Self::zero();
        let shift = Self::new(vec![-center, Complex64::ONE]);
        for &a in w_coeffs.iter().rev() {
            p = &(&p * &shift) + &Self::constant(a);
        }
        Ok((p, tail))
    }

    /// The nodes matching [`Polynomial::interpolate_on_circle`].
    pub fn circle_nodes(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                center + Complex64::from_polar(radius, angle)
            })
            .collect()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Complex64::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constructor_trims_exact_zeros() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), Complex64::ZERO]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::new(vec![Complex64::ZERO]).is_zero());
    }

    #[test]
    fn horner_matches_direct_evaluation() {
        // p(z) = 3 + 2z + z², p(2i) = 3 + 4i + (2i)² = -1 + 4i.
        let p = Polynomial::new(vec![c(3.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        let v = p.eval(c(0.0, 2.0));
        assert_abs_diff_eq!(v.re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn derivative_of_cubic() {
        // d/dz (z³ − 2z) = 3z² − 2.
        let p = Polynomial::new(vec![c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let d = p.derivative();
        assert_eq!(d.coeffs(), &[c(-2.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn div_rem_reconstructs_dividend() {
        let num = Polynomial::new(vec![c(1.0, 1.0), c(0.0, -2.0), c(3.0, 0.0), c(1.0, 0.5)]);
        let den = Polynomial::new(vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        let (q, r) = num.div_rem(&den).unwrap();
        let back = &(&q * &den) + &r;
        for k in 0..4 {
            assert_abs_diff_eq!((back.coeff(k) - num.coeff(k)).norm(), 0.0, epsilon = 1e-13);
        }
        assert!(r.degree().map_or(true, |d| d < 1));
    }

    #[test]
    fn taylor_matches_shifted_expansion() {
        // p(z) = (z − 1)³ has Taylor coefficients (0, 0, 0, 1) at z0 = 1.
        let p = Polynomial::from_roots(Complex64::ONE, &[c(1.0, 0.0); 3]);
        let t = p.taylor_at(c(1.0, 0.0), 4);
        for (k, want) in [0.0, 0.0, 0.0, 1.0].iter().enumerate() {
            assert_abs_diff_eq!(t[k].re, *want, epsilon = 1e-12);
            assert_abs_diff_eq!(t[k].im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn deflate_removes_root() {
        let p = Polynomial::from_roots(c(2.0, 0.0), &[c(1.0, 0.0), c(-3.0, 2.0)]);
        let (q, rem) = p.deflate(c(1.0, 0.0));
        assert_abs_diff_eq!(rem.norm(), 0.0, epsilon = 1e-13);
        assert_eq!(q.degree(), Some(1));
        assert_abs_diff_eq!(q.eval(c(-3.0, 2.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn newton_interpolation_recovers_cubic() {
        let p = Polynomial::new(vec![c(1.0, -1.0), c(0.5, 0.0), c(0.0, 2.0), c(1.0, 0.0)]);
        let nodes = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.5), c(2.0, -1.0)];
        let points: Vec<_> = nodes.iter().map(|&z| (z, p.eval(z))).collect();
        let q = Polynomial::interpolate(&points).unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!((q.coeff(k) - p.coeff(k)).norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn circle_interpolation_is_exact_for_high_degree() {
        // Degree 25 with spread-out coefficients: DFT interpolation holds to
        // near machine precision while scattered-node Newton would not.
        let coeffs: Vec<Complex64> = (0..26)
            .map(|k| c((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let p = Polynomial::new(coeffs);
        let center = c(0.3, -0.2);
        let radius = 1.3;
        let nodes = Polynomial::circle_nodes(center, radius, 32);
        let values: Vec<_> = nodes.iter().map(|&z| p.eval(z)).collect();
        let (q, tail) = Polynomial::interpolate_on_circle(center, radius, &values, 25).unwrap();
        assert!(tail < 1e-12, "spurious degree-26..31 content: {tail:.2e}");
        assert_eq!(q.degree(), p.degree());
        for k in 0..26 {
            assert_abs_diff_eq!((q.coeff(k) - p.coeff(k)).norm(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn circle_interpolation_tail_flags_excess_degree() {
        // Sampling a degree-6 polynomial under a degree-4 budget must report
        // an O(1) tail instead of silently mangling coefficients.
        let p = Polynomial::monomial(6, Complex64::ONE);
        let nodes = Polynomial::circle_nodes(Complex64::ZERO, 1.0, 16);
        let values: Vec<_> = nodes.iter().map(|&z| p.eval(z)).collect();
        let (_, tail) =
            Polynomial::interpolate_on_circle(Complex64::ZERO, 1.0, &values, 4).unwrap();
        assert!(tail > 1e6, "degree violation must dominate: {tail:.2e}");
    }
}
