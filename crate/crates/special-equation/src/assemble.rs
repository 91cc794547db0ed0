//! Assembly of the special Fuchsian equation from coordinates.
//!
//! Every coefficient of the target equation `y^(m) = Σ_l d_l(z)·y^(l)` is a
//! partial fraction over `Δ·R^k` (writing `a_k = d_{m−k}`, `Δ = Π_s(z−q_s)`,
//! `R = Π_i(z−u_i)`):
//!
//! ```text
//! a_1 = Σ_s 1/(z−q_s) + Σ_i β_1^{(i)}/(z−u_i),
//! a_k = [ −Σ_s α_{m−k+1}^{(s)} R(q_s)^{k−1}/(z−q_s)
//!         + (−1)^{k−1} Σ_i β_k^{(i)} R′(u_i)^{k−1}/(z−u_i)
//!         + β_k^{(∞)} z^{kn−n−k} + P_k(z) ] / R(z)^{k−1},   k = 2..m.
//! ```
//!
//! The `β` constants come from the exponents alone ([`crate::beta`]). The
//! remaining unknowns are the local expansion data `α_j^{(s)}` (the
//! `ζ^{m−1}`-coefficient of the exponent-`(j−1)` local solution at `q_s`)
//! and the correction polynomials `P_k` of degree `kn−n−k−1`, which carry
//! exactly `g` coefficients in total. Requiring every `q_s` to be apparent
//! (no logarithms) chains the `α`'s together through the interaction
//! matrices `M^{(l)}` of [`crate::calogero`]:
//!
//! ```text
//! α_{m−1} = δ₁ − p,
//! α_{m−k} = M^{(m−k+1)} α_{m−k+1} + f_k(q) + P̂_k(q),   k = 2..m−1,
//! 0       = M^{(1)} α_1 + f_m(q) + P̂_m(q),
//! ```
//!
//! where `δ₁^{(s)}` is the constant Laurent term of `a_1` at `q_s`,
//! `f_k(q_s)` collects the exponent-determined part of `a_k` and
//! `P̂_k(q_s) = P_k(q_s)/R(q_s)^{k−1}`. Unrolling the chain into the final
//! condition leaves one `g×g` linear system for the `P_k` coefficients;
//! everything else is back-substitution.

use algebra_core::{cx, CMat, CVec, Lu, Polynomial, RationalFunction, Scalar};
use fuchsian_model::ExponentTable;
use scalar_reduction::{IsomonodromicCoordinates, ScalarReduction};

use crate::beta::{beta_coefficients, BetaTable};
use crate::calogero::calogero_matrix;
use crate::error::EquationError;

/// A scalar Fuchsian equation with prescribed exponents whose extra
/// singularities sit exactly at the coordinate positions, each apparent.
///
/// Built by [`assemble_equation`]; the accessors expose both the rational
/// coefficients and the intermediate data (local expansion coefficients,
/// correction polynomials) that downstream formulas reuse.
#[derive(Debug, Clone)]
pub struct SpecialFuchsianEquation {
    coords: IsomonodromicCoordinates,
    beta: BetaTable,
    delta1: Vec<Scalar>,
    alpha: Vec<Vec<Scalar>>,
    p_polys: Vec<Polynomial>,
    a: Vec<RationalFunction>,
    delta: Polynomial,
    r: Polynomial,
    closure_defect: f64,
}

impl SpecialFuchsianEquation {
    /// Order of the equation.
    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// Number of finite poles.
    pub fn n(&self) -> usize {
        self.coords.u().len()
    }

    /// The coordinates the equation was assembled from.
    pub fn coords(&self) -> &IsomonodromicCoordinates {
        &self.coords
    }

    /// `β` constants used in the ansatz (distinguished infinity exponent
    /// rotated to the front).
    pub fn beta(&self) -> &BetaTable {
        &self.beta
    }

    /// Constant Laurent terms `δ₁^{(s)}` of `a_1` at each `q_s`.
    pub fn delta1(&self) -> &[Scalar] {
        &self.delta1
    }

    /// Local expansion data: `alpha()[j−1][s] = α_j^{(s)}` for `j = 1..m−1`.
    pub fn alpha(&self) -> &[Vec<Scalar>] {
        &self.alpha
    }

    /// Correction polynomials `P_2..P_m` (index `k−2`).
    pub fn correction_polynomials(&self) -> &[Polynomial] {
        &self.p_polys
    }

    /// Coefficients `a_1..a_m` (index `k−1`); `a_k` multiplies `y^{(m−k)}`.
    pub fn coefficients(&self) -> &[RationalFunction] {
        &self.a
    }

    /// Monic apparent-singularity polynomial `Δ`.
    pub fn delta(&self) -> &Polynomial {
        &self.delta
    }

    /// Monic pole polynomial `R`.
    pub fn pole_polynomial(&self) -> &Polynomial {
        &self.r
    }

    /// Relative residual of the closing chain condition
    /// `M^{(1)}α_1 + f_m(q) + P̂_m(q) = 0` — a built-in consistency check
    /// of the linear solve, at rounding level for well-conditioned data.
    pub fn closure_defect(&self) -> f64 {
        self.closure_defect
    }

    /// Repackages the equation in the reduction layout `d_l = a_{m−l}`,
    /// giving access to the audit toolbox (indicial polynomials, Fuchs
    /// relation) of [`scalar_reduction`].
    pub fn to_reduction(&self) -> ScalarReduction {
        let d: Vec<RationalFunction> = self.a.iter().rev().cloned().collect();
        let f: Vec<Polynomial> = self.a.iter().rev().map(|a| a.numerator().clone()).collect();
        ScalarReduction::from_raw_parts(
            self.coords.row(),
            d,
            self.delta.clone(),
            f,
            self.coords.u().to_vec(),
            self.coords.exponents().clone(),
        )
    }
}

/// Degree of the correction polynomial `P_k`; `None` when `P_k ≡ 0`.
fn correction_degree(k: usize, n: usize) -> Option<usize> {
    (k * n).checked_sub(n + k + 1)
}

/// The exponent-determined part of `a_k` at a point away from the poles:
///
/// `f_k(z) = [(−1)^{k−1} Σ_i β_k^{(i)} R′(u_i)^{k−1}/(z−u_i) + β_k^{(∞)} z^{kn−n−k}] / R(z)^{k−1}`.
fn exponent_part(
    k: usize,
    z: Scalar,
    u: &[Scalar],
    r: &Polynomial,
    r_prime: &Polynomial,
    beta: &BetaTable,
    n: usize,
) -> Scalar {
    let sign = cx(if k % 2 == 0 { -1.0 } else { 1.0 }, 0.0);
    let mut acc = Scalar::ZERO;
    for (i, &ui) in u.iter().enumerate() {
        acc += beta.finite[i][k - 1] * r_prime.eval(ui).powu((k - 1) as u32) / (z - ui);
    }
    acc = sign * acc + beta.infinity[k - 1] * z.powu((k * n - n - k) as u32);
    acc / r.eval(z).powu((k - 1) as u32)
}

/// Exponent table with the distinguished infinity exponent rotated to the
/// front, matching the convention of [`beta_coefficients`].
pub(crate) fn rotate_distinguished(exponents: &ExponentTable, row: usize) -> ExponentTable {
    let mut infinity = Vec::with_capacity(exponents.infinity.len());
    infinity.push(exponents.infinity[row]);
    for (j, &lam) in exponents.infinity.iter().enumerate() {
        if j != row {
            infinity.push(lam);
        }
    }
    ExponentTable {
        finite: exponents.finite.clone(),
        infinity,
    }
}

/// Builds the special Fuchsian equation carried by the given coordinates.
///
/// # Errors
/// * [`EquationError::InvalidInput`] — `m < 2`, empty coordinate set, or an
///   exponent table that violates the zero-sum constraint;
/// * [`EquationError::CoordinateCollision`] — coinciding positions;
/// * [`EquationError::SingularSystem`] — the `g×g` system for the
///   correction coefficients is numerically singular or too ill-conditioned
///   to trust.  This happens for configurations near the stratum boundary,
///   e.g. when one position is very far from the pole cluster; callers
///   drawing random configurations should treat it as a structured refusal,
///   like a degenerate reduction upstream.
pub fn assemble_equation(
    coords: &IsomonodromicCoordinates,
) -> Result<SpecialFuchsianEquation, EquationError> {
    let m = coords.m();
    let n = coords.n();
    let g = coords.g();
    if m < 2 {
        return Err(EquationError::InvalidInput(
            "a scalar equation needs order m ≥ 2".into(),
        ));
    }
    if g == 0 {
        return Err(EquationError::InvalidInput(
            "the coordinate stratum is zero-dimensional (g = 0)".into(),
        ));
    }
    if coords.row() >= m {
        return Err(EquationError::InvalidInput(format!(
            "reduction row {} out of range for m = {m}",
            coords.row()
        )));
    }
    let exponents = coords.exponents();
    let lam_scale = exponents
        .finite
        .iter()
        .flatten()
        .chain(exponents.infinity.iter())
        .map(|z| z.norm())
        .fold(1.0_f64, f64::max);
    let total = exponents.total_sum();
    if total.norm() > 1e-8 * lam_scale * (m * (n + 1)) as f64 {
        return Err(EquationError::InvalidInput(format!(
            "exponent table violates the zero-sum constraint: Σλ = {total}"
        )));
    }

    let beta = beta_coefficients(&rotate_distinguished(exponents, coords.row()))?;
    let q = coords.q();
    let p = coords.p();
    let u = coords.u();
    let r = Polynomial::from_roots(Scalar::ONE, u);
    let r_prime = r.derivative();
    let delta = Polynomial::from_roots(Scalar::ONE, q);

    // Constant Laurent terms of a_1 at the positions.
    let delta1: Vec<Scalar> = (0..g)
        .map(|s| {
            let mut acc = Scalar::ZERO;
            for (t, &qt) in q.iter().enumerate() {
                if t != s {
                    acc += (q[s] - qt).inv();
                }
            }
            for (i, &ui) in u.iter().enumerate() {
                acc += beta.finite[i][0] / (q[s] - ui);
            }
            acc
        })
        .collect();

    // Interaction matrices and their prefix products W_k = M^{(1)}⋯M^{(m−k)}.
    let m_mats: Vec<CMat> = (1..m)
        .map(|l| calogero_matrix(l, coords))
        .collect::<Result<_, _>>()?;
    let mut w = vec![CMat::identity(g, g); m + 1];
    for k in (1..m).rev() {
        w[k] = &w[k + 1] * &m_mats[m - k - 1];
    }

    // Exponent-determined drives f_k(q) and the correction basis vectors.
    let fvec: Vec<CVec> = (2..=m)
        .map(|k| {
            CVec::from_vec(
                q.iter()
                    .map(|&qs| exponent_part(k, qs, u, &r, &r_prime, &beta, n))
                    .collect(),
            )
        })
        .collect();

    let mut main = CMat::zeros(g, g);
    let mut col = 0usize;
    for k in 2..=m {
        let Some(deg) = correction_degree(k, n) else {
            continue;
        };
        for d in 0..=deg {
            let v = CVec::from_vec(
                q.iter()
                    .map(|&qs| qs.powu(d as u32) / r.eval(qs).powu((k - 1) as u32))
                    .collect(),
            );
            let wv = &w[k] * &v;
            main.set_column(col, &wv);
            col += 1;
        }
    }
    if col != g {
        return Err(EquationError::DimensionMismatch {
            detail: format!("{col} correction coefficients for a {g}-dimensional stratum"),
        });
    }

    let pd: CVec = CVec::from_vec((0..g).map(|s| p[s] - delta1[s]).collect());
    let mut rhs = &w[1] * &pd;
    for k in 2..=m {
        rhs -= &w[k] * &fvec[k - 2];
    }

    // Row/column equilibration before the solve.  Each row is the chain
    // condition at one position and each column one monomial coefficient;
    // when a position drifts far from the pole cluster (toward the stratum
    // boundary where it escapes to infinity) their natural scales spread
    // over many orders of magnitude, which partial pivoting alone does not
    // absorb.
    let mut row_scale = vec![1.0_f64; g];
    for s in 0..g {
        let norm: f64 = (0..g).map(|j| main[(s, j)].norm()).sum();
        if norm > 0.0 {
            row_scale[s] = norm;
            for j in 0..g {
                main[(s, j)] /= cx(norm, 0.0);
            }
        }
    }
    let mut col_scale = vec![1.0_f64; g];
    for j in 0..g {
        let norm: f64 = (0..g).map(|s| main[(s, j)].norm()).sum();
        if norm > 0.0 {
            col_scale[j] = norm;
            for s in 0..g {
                main[(s, j)] /= cx(norm, 0.0);
            }
        }
    }
    let rhs = CVec::from_vec(
        (0..g)
            .map(|s| rhs[s] / cx(row_scale[s], 0.0))
            .collect::<Vec<_>>(),
    );

    let lu = Lu::factor(&main, 1e-13).map_err(|e| EquationError::SingularSystem {
        detail: format!("correction-coefficient system: {e}"),
    })?;
    let scaled = lu.solve_vec(&rhs);
    let coeffs = CVec::from_vec(
        (0..g)
            .map(|j| scaled[j] / cx(col_scale[j], 0.0))
            .collect::<Vec<_>>(),
    );
    let cond = algebra_core::linalg::norm1(&main) * lu.inverse_norm1_estimate();
    if !coeffs.iter().all(|c| c.is_finite()) || !cond.is_finite() || cond > 1e13 {
        return Err(EquationError::SingularSystem {
            detail: format!(
                "correction-coefficient system is too ill-conditioned to trust \
                 (cond ≈ {cond:.3e}); the configuration sits near the stratum boundary"
            ),
        });
    }

    let mut p_polys = Vec::with_capacity(m - 1);
    let mut taken = 0usize;
    for k in 2..=m {
        match correction_degree(k, n) {
            Some(deg) => {
                let cs: Vec<Scalar> = (0..=deg).map(|d| coeffs[taken + d]).collect();
                taken += deg + 1;
                p_polys.push(Polynomial::new(cs));
            }
            None => p_polys.push(Polynomial::zero()),
        }
    }

    // Correction values P̂_k(q_s) = P_k(q_s)/R(q_s)^{k−1}.
    let phat: Vec<CVec> = (2..=m)
        .map(|k| {
            CVec::from_vec(
                q.iter()
                    .map(|&qs| p_polys[k - 2].eval(qs) / r.eval(qs).powu((k - 1) as u32))
                    .collect(),
            )
        })
        .collect();

    // Back-substitute the chain α_{m−1} → α_1 and form the closing residual.
    let mut alpha_vecs: Vec<CVec> = vec![CVec::zeros(g); m - 1];
    alpha_vecs[m - 2] = CVec::from_vec((0..g).map(|s| delta1[s] - p[s]).collect());
    for k in 2..=m - 1 {
        alpha_vecs[m - k - 1] = &m_mats[m - k] * &alpha_vecs[m - k] + &fvec[k - 2] + &phat[k - 2];
    }
    let residual = &m_mats[0] * &alpha_vecs[0] + &fvec[m - 2] + &phat[m - 2];
    let chain_scale = (&m_mats[0] * &alpha_vecs[0])
        .iter()
        .chain(fvec[m - 2].iter())
        .chain(phat[m - 2].iter())
        .map(|z| z.norm())
        .fold(1.0_f64, f64::max);
    let closure_defect = residual.iter().map(|z| z.norm()).fold(0.0_f64, f64::max) / chain_scale;

    // Assemble the rational coefficients over Δ·R^k.
    let delta_s: Vec<Polynomial> = (0..g)
        .map(|s| {
            let others: Vec<Scalar> = q
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != s)
                .map(|(_, &z)| z)
                .collect();
            Polynomial::from_roots(Scalar::ONE, &others)
        })
        .collect();
    let r_i: Vec<Polynomial> = (0..n)
        .map(|i| {
            let others: Vec<Scalar> = u
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &z)| z)
                .collect();
            Polynomial::from_roots(Scalar::ONE, &others)
        })
        .collect();

    let mut a = Vec::with_capacity(m);
    let mut num1 = Polynomial::zero();
    for ds in &delta_s {
        num1 = &num1 + &(ds * &r);
    }
    for (i, ri) in r_i.iter().enumerate() {
        num1 = &num1 + &(&delta * ri).scale(beta.finite[i][0]);
    }
    a.push(RationalFunction::new_raw(num1, &delta * &r)?);

    let mut den = &delta * &r;
    for k in 2..=m {
        den = &den * &r;
        let mut num = Polynomial::zero();
        for (s, ds) in delta_s.iter().enumerate() {
            let kappa = -alpha_vecs[m - k][s] * r.eval(q[s]).powu((k - 1) as u32);
            num = &num + &(ds * &r).scale(kappa);
        }
        let sign = cx(if k % 2 == 0 { -1.0 } else { 1.0 }, 0.0);
        for (i, ri) in r_i.iter().enumerate() {
            let mu = sign * beta.finite[i][k - 1] * r_prime.eval(u[i]).powu((k - 1) as u32);
            num = &num + &(&delta * ri).scale(mu);
        }
        let pol = &Polynomial::monomial(k * n - n - k, beta.infinity[k - 1]) + &p_polys[k - 2];
        num = &num + &(&pol * &(&delta * &r));
        a.push(RationalFunction::new_raw(num, den.clone())?);
    }

    let alpha: Vec<Vec<Scalar>> = alpha_vecs
        .iter()
        .map(|v| v.iter().copied().collect())
        .collect();

    Ok(SpecialFuchsianEquation {
        coords: coords.clone(),
        beta,
        delta1,
        alpha,
        p_polys,
        a,
        delta,
        r,
        closure_defect,
    })
}

/// No-logarithm defect of a scalar equation at its apparent singularities.
///
/// At each position `q_s` the local solutions with exponents `0..m−2` are
/// truncated to the two-term trials
///
/// ```text
/// y_j(z) = ζ^{j−1}/(j−1)! + c_j^{(s)} ζ^{m−1}/(m−1)!,   ζ = z − q_s,
/// ```
///
/// with `c_j^{(s)} = −Res_{q_s} d_{j−1}` read off the equation itself. For a
/// log-free equation, applying the operator to `y_j` leaves neither a
/// simple-pole nor a constant Laurent term at `q_s`: the pole term checks
/// the residue bookkeeping, while the constant term is exactly the
/// no-logarithm obstruction at the resonant exponent `m`. Both are measured
/// on a small circle and normalized by the largest constituent term, so the
/// returned defect per position is a relative cancellation error
/// (rounding-level for a correctly assembled equation).
pub fn log_free_defect(red: &ScalarReduction) -> Result<Vec<f64>, EquationError> {
    let m = red.m();
    if m < 2 {
        return Err(EquationError::InvalidInput(
            "log-free check needs an equation of order m ≥ 2".into(),
        ));
    }
    let q = scalar_reduction::apparent_singularities(red)?;
    const NODES: usize = 64;
    let mut defects = Vec::with_capacity(q.len());
    for (s, &qs) in q.iter().enumerate() {
        let mut clearance = f64::INFINITY;
        for (t, &qt) in q.iter().enumerate() {
            if t != s {
                clearance = clearance.min((qs - qt).norm());
            }
        }
        for &ui in red.poles() {
            clearance = clearance.min((qs - ui).norm());
        }
        let rho = 0.3 * if clearance.is_finite() { clearance } else { 1.0 };

        // Coefficient values on the circle.
        let nodes: Vec<Scalar> = (0..NODES)
            .map(|t| {
                let ang = 2.0 * std::f64::consts::PI * t as f64 / NODES as f64;
                qs + cx(rho * ang.cos(), rho * ang.sin())
            })
            .collect();
        let d_vals: Vec<Vec<Scalar>> = red
            .coefficients()
            .iter()
            .map(|dl| nodes.iter().map(|&z| dl.eval(z)).collect())
            .collect();

        // Local data c_j = −Res d_{j−1}, via the same circle.
        let c: Vec<Scalar> = (1..m)
            .map(|j| -laurent_low(&d_vals[j - 1], rho).0)
            .collect();

        let mut worst = 0.0_f64;
        for j in 1..m {
            let mut vals = Vec::with_capacity(NODES);
            let mut scale = 1.0_f64;
            for (t, &z) in nodes.iter().enumerate() {
                let zeta = z - qs;
                let mut acc = Scalar::ZERO;
                let mut mag = 0.0_f64;
                for l in 0..m {
                    // y_j^{(l)}(z) for the two-term trial.
                    let mut yl = Scalar::ZERO;
                    if l <= j - 1 {
                        yl += zeta.powu((j - 1 - l) as u32) / cx(factorial(j - 1 - l), 0.0);
                    }
                    yl += c[j - 1] * zeta.powu((m - 1 - l) as u32) / cx(factorial(m - 1 - l), 0.0);
                    let term = d_vals[l][t] * yl;
                    acc += term;
                    mag += term.norm();
                }
                vals.push(acc);
                scale = scale.max(mag);
            }
            let (res, constant) = laurent_low(&vals, rho);
            worst = worst.max((res.norm() / rho).max(constant.norm()) / scale);
        }
        defects.push(worst);
    }
    Ok(defects)
}

/// Laurent coefficients `(a_{−1}, a_0)` from equally spaced circle values.
fn laurent_low(values: &[Scalar], rho: f64) -> (Scalar, Scalar) {
    let k = values.len();
    let mut a_m1 = Scalar::ZERO;
    let mut a_0 = Scalar::ZERO;
    for (t, &v) in values.iter().enumerate() {
        let ang = 2.0 * std::f64::consts::PI * t as f64 / k as f64;
        a_m1 += v * cx(ang.cos(), ang.sin());
        a_0 += v;
    }
    (a_m1 * cx(rho / k as f64, 0.0), a_0 / cx(k as f64, 0.0))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}
