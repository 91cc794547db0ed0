//! The scalar reduction proper: assembling `y^(m) = Σ_l d_l(z) y^(l)`.

use algebra_core::{cx, poly_roots, CMat, CVec, Lu, Polynomial, RationalFunction, Scalar};
use fuchsian_model::{phase_dimension, ExponentTable, FuchsianSystem};

use crate::error::ReductionError;
use crate::recursion::Tables;

/// Result of reducing a Fuchsian system to a scalar equation.
///
/// The equation is `y^(m) = Σ_{l=0}^{m−1} d_l(z)·y^(l)` for `y = φ_row`.
/// Each coefficient is the rational function `d_l = f_l/(Δ·R^{m−l})` with a
/// polynomial numerator `f_l` of degree `(n−1)(m−l) + deg Δ`; the monic
/// polynomial `Δ` carries the apparent singularities introduced by the
/// reduction.
#[derive(Debug, Clone)]
pub struct ScalarReduction {
    row: usize,
    d: Vec<RationalFunction>,
    delta: Polynomial,
    f: Vec<Polynomial>,
    r: Polynomial,
    u: Vec<Scalar>,
    exponents: ExponentTable,
    delta_leading_raw: Scalar,
    interpolation_tails: Vec<f64>,
}

impl ScalarReduction {
    /// Assembles a reduction from explicitly given pieces, without checking
    /// the structural invariants. Intended for synthetic data in tests and
    /// for deserialized input; every field is taken at face value.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw_parts(
        row: usize,
        d: Vec<RationalFunction>,
        delta: Polynomial,
        f: Vec<Polynomial>,
        u: Vec<Scalar>,
        exponents: ExponentTable,
    ) -> ScalarReduction {
        let r = Polynomial::from_roots(Scalar::ONE, &u);
        ScalarReduction {
            row,
            d,
            delta,
            f,
            r,
            u,
            exponents,
            delta_leading_raw: Scalar::ONE,
            interpolation_tails: Vec::new(),
        }
    }

    /// Row used for the reduction (zero-based).
    pub fn row(&self) -> usize {
        self.row
    }

    /// Order of the scalar equation.
    pub fn m(&self) -> usize {
        self.d.len()
    }

    /// Number of finite poles of the source system.
    pub fn n(&self) -> usize {
        self.u.len()
    }

    /// Coefficients `d_0..d_{m−1}` of the scalar equation.
    pub fn coefficients(&self) -> &[RationalFunction] {
        &self.d
    }

    /// Monic apparent-singularity polynomial `Δ(z)`.
    pub fn delta(&self) -> &Polynomial {
        &self.delta
    }

    /// Numerators `f_l = d_l·Δ·R^{m−l}`.
    pub fn numerators(&self) -> &[Polynomial] {
        &self.f
    }

    /// `R(z) = Π_k (z−u_k)`.
    pub fn pole_polynomial(&self) -> &Polynomial {
        &self.r
    }

    /// Finite poles of the source system.
    pub fn poles(&self) -> &[Scalar] {
        &self.u
    }

    /// Exponent table of the source system.
    pub fn exponents(&self) -> &ExponentTable {
        &self.exponents
    }

    /// Leading coefficient of `Δ` before the monic normalization, for the
    /// closed-form leading-coefficient cross-check.
    pub fn delta_leading_raw(&self) -> Scalar {
        self.delta_leading_raw
    }

    /// Relative interpolation tails of the numerators `f_l` above their
    /// degree budgets — all should sit at rounding level.
    pub fn interpolation_tails(&self) -> &[f64] {
        &self.interpolation_tails
    }

    /// Evaluates the right-hand side `Σ_l d_l(z)·y_l` for given derivative
    /// values `y_l` at a point.
    pub fn apply(&self, z: Scalar, derivatives: &[Scalar]) -> Scalar {
        self.d
            .iter()
            .zip(derivatives)
            .map(|(dl, yl)| dl.eval(z) * yl)
            .sum()
    }
}

/// Per-point evaluation of the coefficients `d_l(z)` by eliminating the
/// non-reduction components of `φ` with one small linear solve.
pub(crate) struct PointEvaluator<'a> {
    tables: &'a Tables,
}

impl<'a> PointEvaluator<'a> {
    pub fn new(tables: &'a Tables) -> PointEvaluator<'a> {
        PointEvaluator { tables }
    }

    /// Values `d_0(z), …, d_{m−1}(z)`.
    ///
    /// The elimination matrix has determinant `Δ(z)/R(z)^{m(m−1)/2}`, so the
    /// solve is well posed exactly away from apparent singularities and
    /// system poles.
    pub fn coefficients_at(&self, z: Scalar) -> Result<Vec<Scalar>, ReductionError> {
        let t = self.tables;
        let m = t.m();
        let rv = t.r.eval(z);
        if rv.norm() == 0.0 {
            return Err(ReductionError::InvalidInput(format!(
                "coefficient evaluation at a system pole {z}"
            )));
        }
        let mut r_pow = vec![Scalar::ONE; m + 1];
        for k in 1..=m {
            r_pow[k] = r_pow[k - 1] * rv;
        }
        // 𝒫_{l+1,j}(z) = P̃_{l+1,j}(z)/R(z)^l, 𝒬_{l+1,i}(z) = Q̃_{l+1,i}(z)/R(z)^{l+1−i}.
        let p_at = |l: usize, c: usize| t.p_tilde[l - 1][c].eval(z) / r_pow[l];
        let q_at = |l: usize, i: usize| t.q_tilde[l - 1][i - 1].eval(z) / r_pow[l + 1 - i];

        // Solve Mᵀ η = c with M_{l,c} = 𝒫_{l+1,cols[c]}(z) (l = 1..m−1) and
        // c_c = 𝒫_{m+1,cols[c]}(z); then the elimination of the φ-components
        // dresses the 𝒬-column into the coefficients.
        let dim = m - 1;
        let mut mt = CMat::zeros(dim, dim);
        let mut rhs = CVec::zeros(dim);
        for l in 1..m {
            for c in 0..dim {
                mt[(c, l - 1)] = p_at(l, c);
            }
        }
        for (c, slot) in rhs.iter_mut().enumerate() {
            *slot = p_at(m, c);
        }
        let lu = Lu::factor(&mt, 1e-13).map_err(|e| ReductionError::InvalidInput(format!(
            "elimination solve degenerate at z = {z}: {e}"
        )))?;
        let eta = lu.solve_vec(&rhs);

        let mut d = Vec::with_capacity(m);
        for i in 0..m {
            let mut di = q_at(m, i + 1);
            if i >= 1 {
                di += eta[i - 1];
            }
            for l in (i + 1)..m {
                di -= eta[l - 1] * q_at(l, i + 1);
            }
            d.push(di);
        }
        Ok(d)
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// the first column (sizes here are at most m−1, which stays small).
pub(crate) fn poly_det(mat: &[Vec<Polynomial>]) -> Polynomial {
    let n = mat.len();
    if n == 0 {
        return Polynomial::one();
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut det = Polynomial::zero();
    for r in 0..n {
        if mat[r][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = (0..n)
            .filter(|&rr| rr != r)
            .map(|rr| mat[rr][1..].to_vec())
            .collect();
        let term = &mat[r][0] * &poly_det(&minor);
        det = if r % 2 == 0 { &det + &term } else { &det - &term };
    }
    det
}

/// Predicted leading coefficient of the un-normalized `Δ`: the
/// generalized-Vandermonde product of the infinity exponents over the
/// non-reduction columns times the first-step leading coefficients.
pub(crate) fn predicted_delta_leading(
    exponents: &ExponentTable,
    cols: &[usize],
    row_leads: &[Scalar],
) -> Scalar {
    let mut acc: Scalar = row_leads.iter().product();
    for a in 0..cols.len() {
        for b in (a + 1)..cols.len() {
            acc *= exponents.infinity[cols[a]] - exponents.infinity[cols[b]];
        }
    }
    acc
}

/// Circle of evaluation nodes that keeps clear of the zeros of `Δ·R`.
///
/// For a circle concentric with the pole cloud, the distance from a
/// singularity `b` to the circle is exactly `| |b−center| − radius |`, so
/// clearance can be guaranteed by radius alone. The circle must enclose all
/// poles (so that it lives on the natural scale of the problem), but it
/// should stay as tight as possible: the error of evaluating the
/// interpolated numerators at interior points grows with the ratio between
/// their circle maximum and their interior size, so an unnecessarily wide
/// circle silently costs digits everywhere inside. Apparent singularities
/// can land arbitrarily far out; those are simply left outside the circle.
/// Starting just beyond the outermost pole, the radius is bumped past each
/// blocking singularity until every one of them clears the margin.
fn well_separated_nodes(
    bad: &[Scalar],
    u: &[Scalar],
    count: usize,
) -> Result<(Vec<Scalar>, Scalar, f64), ReductionError> {
    let center: Scalar = u.iter().sum::<Scalar>() / cx(u.len() as f64, 0.0);
    let pole_spread = u
        .iter()
        .map(|ui| (ui - center).norm())
        .fold(0.0_f64, f64::max);
    let rhos: Vec<f64> = bad.iter().map(|b| (b - center).norm()).collect();
    if rhos.iter().any(|r| !r.is_finite()) {
        return Err(ReductionError::InvalidInput(
            "could not place interpolation nodes away from singularities".into(),
        ));
    }
    let margin = (0.1 * pole_spread).max(0.6);
    let mut radius = pole_spread + margin;
    for _ in 0..=rhos.len() {
        match rhos
            .iter()
            .copied()
            .filter(|rho| (rho - radius).abs() < 0.999 * margin)
            .fold(None, |acc: Option<f64>, rho| {
                Some(acc.map_or(rho, |a| a.max(rho)))
            }) {
            Some(blocking) => radius = blocking + margin,
            None => {
                let nodes: Vec<Scalar> = (0..count)
                    .map(|t| {
                        let ang = 2.0 * std::f64::consts::PI * t as f64 / count as f64;
                        center + cx(radius, 0.0) * cx(ang.cos(), ang.sin())
                    })
                    .collect();
                return Ok((nodes, center, radius));
            }
        }
    }
    Err(ReductionError::InvalidInput(
        "could not place interpolation nodes away from singularities".into(),
    ))
}

/// Reduces a Fuchsian system to its `m`-th order scalar equation along the
/// given row.
///
/// Requires the residue at infinity to be diagonal (the generic
/// normalization); use [`crate::extract_coordinates_relaxed`] for systems
/// perturbed off that stratum.
///
/// # Errors
/// * [`ReductionError::RowConditionViolated`] — the chosen row cannot seed
///   the elimination;
/// * [`ReductionError::DegenerateDelta`] — the apparent-singularity
///   polynomial does not reach the generic degree `g`;
/// * [`ReductionError::Interpolation`] — a numerator violates its degree
///   budget (inconsistent data).
pub fn reduce(sys: &FuchsianSystem, row: usize) -> Result<ScalarReduction, ReductionError> {
    let m = sys.m();
    let n = sys.n();
    let g = phase_dimension(m, n)?;

    let ainf = sys.a_infinity();
    let scale = sys.residue_scale().max(1e-300);
    for i in 0..m {
        for j in 0..m {
            if i != j && ainf[(i, j)].norm() > 1e-8 * scale {
                return Err(ReductionError::InvalidInput(format!(
                    "residue at infinity has off-diagonal entry ({i},{j}) of size {:.3e}; \
                     reduce requires the diagonal normalization",
                    ainf[(i, j)].norm()
                )));
            }
        }
    }

    let tables = Tables::build(sys, row)?;
    let exponents = sys.exponents()?;

    // Δ as an exact polynomial determinant of the elimination numerators.
    let delta_rows: Vec<Vec<Polynomial>> = (2..=m)
        .map(|l| tables.p_tilde[l - 2].clone())
        .collect();
    let delta_raw = poly_det(&delta_rows).trim(1e-8);
    match delta_raw.degree() {
        Some(d) if d == g => {}
        other => {
            return Err(ReductionError::DegenerateDelta {
                expected: g,
                actual: other,
                detail: "determinant degree off the generic count".into(),
            })
        }
    }
    let delta_leading_raw = delta_raw.leading();
    let delta = delta_raw.monic();

    // Shared evaluation nodes for every numerator (largest budget first).
    // Both the poles and the Δ roots must stay clear of the node circle.
    let budget = |l: usize| g + (n - 1) * (m - l);
    let node_count = 2 * (budget(0) + 1);
    let mut singular: Vec<Scalar> = sys.poles().to_vec();
    singular.extend(poly_roots(&delta, 1e-6)?);
    let (nodes, center, radius) = well_separated_nodes(&singular, sys.poles(), node_count)?;

    let evaluator = PointEvaluator::new(&tables);
    let mut d_vals: Vec<Vec<Scalar>> = vec![Vec::with_capacity(node_count); m];
    for &z in &nodes {
        let d = evaluator.coefficients_at(z)?;
        for (l, v) in d.into_iter().enumerate() {
            d_vals[l].push(v);
        }
    }

    let mut f = Vec::with_capacity(m);
    let mut tails = Vec::with_capacity(m);
    for l in 0..m {
        let values: Vec<Scalar> = nodes
            .iter()
            .zip(&d_vals[l])
            .map(|(&z, &dv)| {
                let rv = tables.r.eval(z);
                dv * delta.eval(z) * rv.powu((m - l) as u32)
            })
            .collect();
        let (fl, tail) =
            Polynomial::interpolate_on_circle(center, radius, &values, budget(l))?;
        if tail > 1e-5 {
            return Err(ReductionError::Interpolation {
                what: "scalar-equation numerator",
                tail,
            });
        }
        f.push(fl);
        tails.push(tail);
    }

    let mut d: Vec<RationalFunction> = Vec::with_capacity(m);
    for (l, fl) in f.iter().enumerate() {
        let mut den = delta.clone();
        for _ in 0..(m - l) {
            den = &den * &tables.r;
        }
        d.push(RationalFunction::new_raw(fl.clone(), den)?);
    }

    Ok(ScalarReduction {
        row,
        d,
        delta,
        f,
        r: tables.r.clone(),
        u: sys.poles().to_vec(),
        exponents,
        delta_leading_raw,
        interpolation_tails: tails,
    })
}

/// Ratio of the computed leading coefficient of `Δ` to its closed-form
/// prediction; should be `1` on generic systems.
pub fn delta_leading_ratio(sys: &FuchsianSystem, red: &ScalarReduction) -> Result<Scalar, ReductionError> {
    let tables = Tables::build(sys, red.row())?;
    let predicted = predicted_delta_leading(red.exponents(), &tables.cols, &tables.row_leads);
    if predicted.norm() == 0.0 {
        return Err(ReductionError::InvalidInput(
            "leading-coefficient prediction vanishes".into(),
        ));
    }
    Ok(red.delta_leading_raw() / predicted)
}
