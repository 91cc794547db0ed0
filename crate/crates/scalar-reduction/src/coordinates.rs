//! Isomonodromic coordinates `(q, p)` extracted from a reduction.
//!
//! The positions `q_s` are the roots of `Δ`; the momenta are the residues
//!
//! ```text
//! p_s = Res_{z=q_s} [ d_{m−2}(z) + ½ d_{m−1}(z)² ],
//! ```
//!
//! which, with `d_{m−1}` having residue `1` at a simple apparent
//! singularity, is the simple-pole residue of `d_{m−2}` plus the product of
//! the residue and constant Laurent coefficients of `d_{m−1}`.

use algebra_core::{cx, poly_roots, Polynomial, Scalar};
use fuchsian_model::{phase_dimension, ExponentTable, FuchsianSystem};

use crate::error::ReductionError;
use crate::recursion::Tables;
use crate::reduction::{poly_det, reduce, PointEvaluator, ScalarReduction};

/// Darboux coordinates of a Fuchsian system, together with the deformation
/// parameters and exponents that fix the stratum they live on.
#[derive(Debug, Clone)]
pub struct IsomonodromicCoordinates {
    q: Vec<Scalar>,
    p: Vec<Scalar>,
    u: Vec<Scalar>,
    exponents: ExponentTable,
    row: usize,
}

impl IsomonodromicCoordinates {
    /// Assembles coordinates from raw pieces (lengths must agree with the
    /// phase-space dimension implied by the exponent table and poles).
    pub fn new(
        q: Vec<Scalar>,
        p: Vec<Scalar>,
        u: Vec<Scalar>,
        exponents: ExponentTable,
        row: usize,
    ) -> Result<IsomonodromicCoordinates, ReductionError> {
        let m = exponents.infinity.len();
        let g = phase_dimension(m, u.len())?;
        if q.len() != g || p.len() != g {
            return Err(ReductionError::InvalidInput(format!(
                "expected {g} coordinate pairs, got {} positions / {} momenta",
                q.len(),
                p.len()
            )));
        }
        Ok(IsomonodromicCoordinates { q, p, u, exponents, row })
    }

    /// Apparent-singularity positions.
    pub fn q(&self) -> &[Scalar] {
        &self.q
    }

    /// Conjugate momenta.
    pub fn p(&self) -> &[Scalar] {
        &self.p
    }

    /// Deformation parameters (finite poles).
    pub fn u(&self) -> &[Scalar] {
        &self.u
    }

    /// Exponents of the underlying system.
    pub fn exponents(&self) -> &ExponentTable {
        &self.exponents
    }

    /// Reduction row that produced the coordinates.
    pub fn row(&self) -> usize {
        self.row
    }

    /// Phase-space dimension `g`.
    pub fn g(&self) -> usize {
        self.q.len()
    }

    /// Matrix size `m` of the source system.
    pub fn m(&self) -> usize {
        self.exponents.infinity.len()
    }

    /// Number of finite poles.
    pub fn n(&self) -> usize {
        self.u.len()
    }
}

/// Deterministic coordinate order: by real part, ties by imaginary part.
fn sort_key(a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

/// Roots of `Δ`, checked to be simple and away from the system poles,
/// sorted deterministically.
///
/// # Errors
/// [`ReductionError::MultipleRoot`] on a root collision;
/// [`ReductionError::DegenerateDelta`] if a root collides with a pole `u_k`.
pub fn apparent_singularities(red: &ScalarReduction) -> Result<Vec<Scalar>, ReductionError> {
    let mut roots = poly_roots(red.delta(), 1e-8)?;
    roots.sort_by(sort_key);
    let scale = red
        .poles()
        .iter()
        .chain(roots.iter())
        .map(|z| z.norm())
        .fold(1.0_f64, f64::max);
    let tol = 1e-8 * scale;
    for a in 0..roots.len() {
        for b in (a + 1)..roots.len() {
            let dist = (roots[a] - roots[b]).norm();
            if dist < tol {
                return Err(ReductionError::MultipleRoot {
                    a: roots[a],
                    b: roots[b],
                    dist,
                });
            }
        }
        for &u in red.poles() {
            let dist = (roots[a] - u).norm();
            if dist < tol {
                return Err(ReductionError::DegenerateDelta {
                    expected: roots.len(),
                    actual: Some(roots.len()),
                    detail: format!(
                        "apparent singularity {} collides with pole {u} (distance {dist:.3e})",
                        roots[a]
                    ),
                });
            }
        }
    }
    Ok(roots)
}

/// Momenta at the given apparent singularities, from the stored rational
/// coefficients of the reduction.
///
/// The residue and constant Laurent coefficients of the top two equation
/// coefficients are read off by discrete Fourier transforms of values on a
/// small circle around each `q_i`. Because the stored numerators come from
/// a global interpolation, this path carries their interpolation noise
/// (~1e−8 relative in unlucky geometries); [`extract_coordinates`] avoids
/// it by re-evaluating the coefficients pointwise.
///
/// # Errors
/// [`ReductionError::PoleAtApparent`] if `d_{m−2}` or `d_{m−1}` has a pole
/// of order above one at some `q_i`.
pub fn momenta(red: &ScalarReduction, q: &[Scalar]) -> Result<Vec<Scalar>, ReductionError> {
    let m = red.m();
    if m < 2 {
        return Err(ReductionError::InvalidInput(
            "momenta need an equation of order at least two".into(),
        ));
    }
    let d_top = &red.coefficients()[m - 1];
    let d_next = &red.coefficients()[m - 2];
    let mut p = Vec::with_capacity(q.len());
    for (i, &qs) in q.iter().enumerate() {
        for d in [d_next, d_top] {
            let order = d.pole_order(qs);
            if order > 1 {
                return Err(ReductionError::PoleAtApparent { point: qs, order });
            }
        }
        let mut clearance = f64::INFINITY;
        for (t, &qt) in q.iter().enumerate() {
            if t != i {
                clearance = clearance.min((qs - qt).norm());
            }
        }
        for &u in red.poles() {
            clearance = clearance.min((qs - u).norm());
        }
        if clearance <= 0.0 {
            return Err(ReductionError::MultipleRoot { a: qs, b: qs, dist: 0.0 });
        }
        let rho = 0.35 * if clearance.is_finite() { clearance } else { 1.0 };
        const NODES: usize = 48;
        let mut top_vals = Vec::with_capacity(NODES);
        let mut next_vals = Vec::with_capacity(NODES);
        for t in 0..NODES {
            let ang = 2.0 * std::f64::consts::PI * t as f64 / NODES as f64;
            let z = qs + cx(rho, 0.0) * cx(ang.cos(), ang.sin());
            top_vals.push(d_top.eval(z));
            next_vals.push(d_next.eval(z));
        }
        let (res_top, const_top) = laurent_by_circle(&top_vals, rho);
        let (res_next, _) = laurent_by_circle(&next_vals, rho);
        p.push(res_next + res_top * const_top);
    }
    Ok(p)
}

/// Momenta from pointwise coefficient elimination on local circles: the
/// highest-precision path, used by both coordinate extractors.
fn pointwise_momenta(
    evaluator: &PointEvaluator<'_>,
    m: usize,
    q: &[Scalar],
    poles: &[Scalar],
) -> Result<Vec<Scalar>, ReductionError> {
    const NODES: usize = 48;
    let mut p = Vec::with_capacity(q.len());
    for (s, &qs) in q.iter().enumerate() {
        let mut clearance = f64::INFINITY;
        for (t, &qt) in q.iter().enumerate() {
            if t != s {
                clearance = clearance.min((qs - qt).norm());
            }
        }
        for &u in poles {
            clearance = clearance.min((qs - u).norm());
        }
        if clearance == 0.0 {
            return Err(ReductionError::MultipleRoot { a: qs, b: qs, dist: 0.0 });
        }
        let rho = 0.35 * if clearance.is_finite() { clearance } else { 1.0 };
        let mut top_vals = Vec::with_capacity(NODES);
        let mut next_vals = Vec::with_capacity(NODES);
        for t in 0..NODES {
            let ang = 2.0 * std::f64::consts::PI * t as f64 / NODES as f64;
            let z = qs + cx(rho, 0.0) * cx(ang.cos(), ang.sin());
            let d = evaluator.coefficients_at(z)?;
            top_vals.push(d[m - 1]);
            next_vals.push(d[m - 2]);
        }
        let (res_top, const_top) = laurent_by_circle(&top_vals, rho);
        let (res_next, _) = laurent_by_circle(&next_vals, rho);
        p.push(res_next + res_top * const_top);
    }
    Ok(p)
}

/// Full strict extraction: reduce, locate apparent singularities, compute
/// momenta.
///
/// Momenta are taken from pointwise elimination rather than from the
/// interpolated coefficients of the [`ScalarReduction`], which keeps them at
/// full evaluation precision.
pub fn extract_coordinates(
    sys: &FuchsianSystem,
    row: usize,
) -> Result<IsomonodromicCoordinates, ReductionError> {
    let red = reduce(sys, row)?;
    let q = apparent_singularities(&red)?;
    let tables = Tables::build(sys, row)?;
    let evaluator = PointEvaluator::new(&tables);
    let p = pointwise_momenta(&evaluator, sys.m(), &q, sys.poles())?;
    IsomonodromicCoordinates::new(q, p, sys.poles().to_vec(), red.exponents().clone(), row)
}

/// Laurent coefficients `a_{−1}, a_0` of a point-evaluable function around
/// `center`, by discrete Fourier transform on a circle of radius `rho`.
fn laurent_by_circle(
    values: &[Scalar],
    rho: f64,
) -> (Scalar, Scalar) {
    let k = values.len();
    let mut a_m1 = Scalar::ZERO;
    let mut a_0 = Scalar::ZERO;
    for (t, &v) in values.iter().enumerate() {
        let ang = 2.0 * std::f64::consts::PI * t as f64 / k as f64;
        let w = cx(ang.cos(), ang.sin());
        a_m1 += v * w;
        a_0 += v;
    }
    (a_m1 * cx(rho / k as f64, 0.0), a_0 / cx(k as f64, 0.0))
}

/// Coordinate extraction that tolerates systems perturbed off the
/// diagonal-at-infinity stratum, as produced by entry-wise
/// finite-difference sweeps.
///
/// Off the stratum, `Δ` picks up `m−1` extra roots of size growing like an
/// inverse power of the perturbation; the physical coordinates are the `g`
/// bounded roots. With `base` given, roots are matched greedily to the base
/// positions (keeping the output a smooth continuation); otherwise the `g`
/// roots closest to the pole centroid are taken in deterministic order.
/// Momenta come from the same residue formula, evaluated by small-circle
/// Laurent transforms of the pointwise coefficient values (no global
/// interpolation, so the huge spurious roots never enter).
pub fn extract_coordinates_relaxed(
    sys: &FuchsianSystem,
    row: usize,
    base: Option<&[Scalar]>,
) -> Result<IsomonodromicCoordinates, ReductionError> {
    let m = sys.m();
    let n = sys.n();
    let g = phase_dimension(m, n)?;

    let tables = Tables::build(sys, row)?;
    let delta_rows: Vec<Vec<Polynomial>> = (2..=m)
        .map(|l| tables.p_tilde[l - 2].clone())
        .collect();
    let delta = poly_det(&delta_rows).trim(1e-13);
    let deg = delta.degree().unwrap_or(0);
    if !(g..=g + (m - 1)).contains(&deg) {
        return Err(ReductionError::DegenerateDelta {
            expected: g,
            actual: delta.degree(),
            detail: "relaxed reduction allows at most m−1 extra roots".into(),
        });
    }
    let mut roots = poly_roots(&delta, 1e-6)?;

    let q: Vec<Scalar> = if let Some(base) = base {
        if base.len() != g {
            return Err(ReductionError::InvalidInput(format!(
                "base has {} positions, expected {g}",
                base.len()
            )));
        }
        let mut picked = Vec::with_capacity(g);
        for &b in base {
            let (idx, _) = roots
                .iter()
                .enumerate()
                .min_by(|(_, x), (_, y)| {
                    (*x - b)
                        .norm()
                        .partial_cmp(&(*y - b).norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .ok_or_else(|| {
                    ReductionError::InvalidInput("ran out of roots while matching".into())
                })?;
            picked.push(roots.swap_remove(idx));
        }
        picked
    } else {
        let centroid: Scalar = sys.poles().iter().sum::<Scalar>() / cx(n as f64, 0.0);
        roots.sort_by(|x, y| {
            (x - centroid)
                .norm()
                .partial_cmp(&(y - centroid).norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut picked: Vec<Scalar> = roots.into_iter().take(g).collect();
        picked.sort_by(sort_key);
        picked
    };

    // Momenta by local Laurent transforms of the pointwise coefficients.
    let evaluator = PointEvaluator::new(&tables);
    let p = pointwise_momenta(&evaluator, m, &q, sys.poles())?;

    IsomonodromicCoordinates::new(q, p, sys.poles().to_vec(), sys.exponents()?, row)
}

/// First reduction row (zero-based) whose genericity condition holds, trying
/// the first row first.
pub fn select_row(sys: &FuchsianSystem) -> Result<usize, ReductionError> {
    for row in 0..sys.m() {
        if Tables::build(sys, row).is_ok() {
            return Ok(row);
        }
    }
    Err(ReductionError::RowConditionViolated {
        row: 0,
        detail: "no row satisfies the reduction condition".into(),
    })
}
