//! Rational functions over ℂ with residue and Laurent-jet extraction.

use num_complex::Complex64;

use crate::error::AlgebraError;
use crate::poly::Polynomial;
use crate::roots::poly_roots;

/// Relative tolerance used when matching a numerator root against a
/// denominator root during normalization: the constructions upstream produce
/// exact cancellations that floating-point arithmetic only approximates.
pub const CANCEL_TOL: f64 = 1e-9;

/// A quotient of two polynomials.
///
/// Stored in a normalized form: paired numerator/denominator roots that agree
/// within [`CANCEL_TOL`] (relative to the root magnitude) are cancelled at
/// construction through [`RationalFunction::new`]. Use
/// [`RationalFunction::new_raw`] to keep a quotient exactly as provided.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds `num/den`, cancelling root pairs shared by both polynomials
    /// (within [`CANCEL_TOL`] relative tolerance).
    ///
    /// # Errors
    /// [`AlgebraError::InvalidInput`] if `den` is zero;
    /// [`AlgebraError::IllConditioned`] if root-finding on either part fails.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        Self::new_with_tol(num, den, CANCEL_TOL)
    }

    /// [`RationalFunction::new`] with an explicit cancellation tolerance.
    ///
    /// # Errors
    /// Same as [`RationalFunction::new`].
    pub fn new_with_tol(num: Polynomial, den: Polynomial, tol: f64) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::InvalidInput(
                "rational function with zero denominator".into(),
            ));
        }
        if num.is_zero() {
            return Ok(Self {
                num,
                den: Polynomial::one(),
            });
        }
        if num.degree() == Some(0) || den.degree() == Some(0) {
            return Ok(Self { num, den });
        }
        let num_roots = poly_roots(&num, 1e-8)?;
        let den_roots = poly_roots(&den, 1e-8)?;
        let mut keep_den = vec![true; den_roots.len()];
        let mut num_out = num.clone();
        let mut den_cancelled = 0usize;
        for &nr in &num_roots {
            let mut best: Option<(usize, f64)> = None;
            for (j, &dr) in den_roots.iter().enumerate() {
                if !keep_den[j] {
                    continue;
                }
                let dist = (nr - dr).norm();
                if best.is_none_or(|(_, d)| dist < d) {
                    best = Some((j, dist));
                }
            }
            if let Some((j, dist)) = best {
                if dist <= tol * nr.norm().max(1.0) {
                    keep_den[j] = false;
                    den_cancelled += 1;
                    // Deflate the matched root from the numerator; the
                    // denominator is rebuilt below from its surviving roots.
                    let (q, _) = num_out.deflate(den_roots[j]);
                    num_out = q;
                }
            }
        }
        if den_cancelled == 0 {
            return Ok(Self { num, den });
        }
        let surviving: Vec<Complex64> = den_roots
            .iter()
            .zip(&keep_den)
            .filter(|(_, keep)| **keep)
            .map(|(&r, _)| r)
            .collect();
        let den_out = Polynomial::from_roots(den.leading(), &surviving);
        Ok(Self {
            num: num_out,
            den: den_out,
        })
    }

    /// Builds `num/den` without any cancellation.
    ///
    /// # Errors
    /// [`AlgebraError::InvalidInput`] if `den` is zero.
    pub fn new_raw(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::InvalidInput(
                "rational function with zero denominator".into(),
            ));
        }
        Ok(Self { num, den })
    }

    /// Numerator.
    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// Denominator.
    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Pointwise evaluation. Returns a large value near poles; callers that
    /// care about poles should use [`RationalFunction::laurent_at`].
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Pole order of the (normalized) function at `z0`: the multiplicity of
    /// `z0` as a denominator root, detected by synthetic division with a
    /// residual threshold scaled to the denominator size.
    pub fn pole_order(&self, z0: Complex64) -> usize {
        let scale = self.den.max_coeff_norm() * z0.norm().max(1.0).powi(
            self.den.degree().unwrap_or(0) as i32,
        );
        let mut work = self.den.clone();
        let mut order = 0;
        loop {
            if work.degree().is_none_or(|d| d == 0) {
                return order;
            }
            let (q, rem) = work.deflate(z0);
            if rem.norm() <= 1e-9 * scale {
                order += 1;
                work = q;
            } else {
                return order;
            }
        }
    }

    /// Laurent expansion at `z0`: returns `(k, coeffs)` where `k` is the pole
    /// order and `coeffs[j]` is the coefficient of `(z−z0)^{j−k}`, for
    /// `j = 0, …, n_terms−1`.
    ///
    /// Exact for rational functions (up to rounding): the denominator factor
    /// `(z−z0)^k` is removed by synthetic division and the remaining Taylor
    /// series are divided termwise.
    ///
    /// # Errors
    /// [`AlgebraError::InvalidInput`] if the reduced denominator still
    /// vanishes at `z0` (a nearly defective cancellation pattern).
    pub fn laurent_at(
        &self,
        z0: Complex64,
        n_terms: usize,
    ) -> Result<(usize, Vec<Complex64>), AlgebraError> {
        let scale = self.den.max_coeff_norm();
        let mut den_red = self.den.clone();
        let mut order = 0usize;
        loop {
            if den_red.degree().is_none_or(|d| d == 0) {
                break;
            }
            let (q, rem) = den_red.deflate(z0);
            if rem.norm() <= 1e-9 * scale * z0.norm().max(1.0).powi(den_red.degree().unwrap() as i32)
            {
                order += 1;
                den_red = q;
            } else {
                break;
            }
        }
        let d0 = den_red.eval(z0);
        if d0.norm() == 0.0 {
            return Err(AlgebraError::InvalidInput(
                "denominator vanishes identically at expansion point".into(),
            ));
        }
        // Taylor jets of numerator and reduced denominator, then a power-series
        // division: c_j solves num_j = Σ_{i≤j} den_i · c_{j−i}.
        let jets = n_terms;
        let num_t = self.num.taylor_at(z0, jets);
        let den_t = den_red.taylor_at(z0, jets);
        let mut series = vec![Complex64::ZERO; jets];
        for j in 0..jets {
            let mut acc = num_t[j];
            for i in 1..=j {
                acc -= den_t[i] * series[j - i];
            }
            series[j] = acc / den_t[0];
        }
        Ok((order, series))
    }

    /// Coefficient of `(z−z0)^{−1}` in the Laurent expansion at `z0`.
    ///
    /// # Errors
    /// [`AlgebraError::PoleOrderExceeded`] if the actual pole order at `z0`
    /// exceeds `order`; [`AlgebraError::InvalidInput`] from
    /// [`RationalFunction::laurent_at`].
    pub fn residue_at(&self, z0: Complex64, order: usize) -> Result<Complex64, AlgebraError> {
        let (actual, series) = self.laurent_at(z0, order.max(1))?;
        if actual > order {
            return Err(AlgebraError::PoleOrderExceeded {
                actual,
                allowed: order,
            });
        }
        if actual == 0 {
            return Ok(Complex64::ZERO);
        }
        Ok(series[actual - 1])
    }
}
