//! Canonical Hamiltonians of the isomonodromic flows.
//!
//! For a special Fuchsian equation written as
//! `y⁽ᵐ⁾ = d_{m−1} y⁽ᵐ⁻¹⁾ + … + d₀ y`, the Hamiltonian attached to the
//! essential pole `u_k` is the residue
//!
//! ```text
//!   H_k = −Res_{z=u_k} ( d_{m−2}(z) + ½ d_{m−1}(z)² ).
//! ```
//!
//! This is the same combination whose residues at the apparent
//! singularities `q_s` define the conjugate momenta `p_s`, so the full set
//! of residues of `d_{m−2} + ½ d_{m−1}²` encodes the entire symplectic
//! side of the correspondence: momenta at the `q`'s, Hamiltonians at the
//! `u`'s.  Because the combination decays like `z⁻²` at infinity, the
//! residue theorem yields the sum rule `Σ_k H_k = Σ_s p_s`, which the unit
//! tests pin down.
//!
//! [`canonical_hamiltonians`] evaluates the residues twice: once
//! numerically from the assembled coefficients (Laurent expansion at each
//! pole), and once through a closed-form expression in the coordinate data
//! `(q, p, u, β)` obtained by expanding the partial-fraction ansatz around
//! `u_k`.  The two routes share no intermediate code, so their agreement is
//! a meaningful internal consistency check and is exposed to callers.

use algebra_core::{cx, RationalFunction, Scalar};

use crate::assemble::SpecialFuchsianEquation;
use crate::error::EquationError;

/// Hamiltonian values at every essential pole, computed along two
/// independent routes.
#[derive(Debug, Clone)]
pub struct HamiltonianValues {
    /// Residue route: `h[k] = −Res_{u_k}(d_{m−2} + ½ d_{m−1}²)` extracted
    /// from the Laurent expansions of the assembled coefficients.
    pub h: Vec<Scalar>,
    /// Closed-form route: the same residues expressed directly in
    /// `(q, p, u)` and the exponent data, without touching the assembled
    /// rational functions.
    pub closed_form: Vec<Scalar>,
}

impl HamiltonianValues {
    /// Largest relative disagreement between the two routes.
    pub fn route_disagreement(&self) -> f64 {
        let scale = self
            .h
            .iter()
            .chain(self.closed_form.iter())
            .map(|v| v.norm())
            .fold(1.0_f64, f64::max);
        self.h
            .iter()
            .zip(self.closed_form.iter())
            .map(|(a, b)| (a - b).norm() / scale)
            .fold(0.0_f64, f64::max)
    }
}

/// Computes the canonical Hamiltonians `H_k` of an assembled equation at
/// each essential pole `u_k`.
///
/// # Errors
///
/// [`EquationError::Algebra`] if a Laurent expansion fails (defective
/// cancellation at a pole), which for a validly assembled equation would
/// indicate catastrophic coefficient collisions.
pub fn canonical_hamiltonians(
    eq: &SpecialFuchsianEquation,
) -> Result<HamiltonianValues, EquationError> {
    let coords = eq.coords();
    let u = coords.u();
    let n = eq.n();

    // --- Residue route -----------------------------------------------------
    // d_{m−1} = a₁ and d_{m−2} = a₂.  The square of a₁ is formed on raw
    // numerator/denominator pairs; `laurent_at` removes the matched pole
    // factors itself, so no normalization is required beforehand.
    let a1 = &eq.coefficients()[0];
    let a2 = &eq.coefficients()[1];
    let a1_sq = RationalFunction::new_raw(
        a1.numerator() * a1.numerator(),
        a1.denominator() * a1.denominator(),
    )?;

    let mut h = Vec::with_capacity(n);
    for &uk in u {
        let res_a2 = residue(a2, uk)?;
        let res_a1_sq = residue(&a1_sq, uk)?;
        h.push(-(res_a2 + res_a1_sq.scale(0.5)));
    }

    // --- Closed-form route --------------------------------------------------
    // Around u_k write a₁ = B_k/ζ + E_k + O(ζ) and a₂ = N(z)/R(z) with N
    // carrying a simple pole of strength −β₂^{(k)} R′(u_k).  Expanding both
    // factors to first order in ζ = z − u_k gives
    //
    //   −Res a₂       = [ Σ_s (δ₁−p)_s R(q_s)/(u_k−q_s)
    //                     + Σ_{i≠k} β₂^{(i)} R′(u_i)/(u_k−u_i)
    //                     − ½ β₂^{(k)} R″(u_k)
    //                     − β₂^{(∞)} u_k^{n−2} − P₂(u_k) ] / R′(u_k),
    //   −½ Res a₁²    = −B_k E_k .
    let q = coords.q();
    let p = coords.p();
    let g = coords.g();
    let beta = eq.beta();
    let delta1 = eq.delta1();
    let r = eq.pole_polynomial();
    let r_prime = r.derivative();
    let r_second = r_prime.derivative();
    let p2 = &eq.correction_polynomials()[0];

    let mut closed_form = Vec::with_capacity(n);
    for (k, &uk) in u.iter().enumerate() {
        let rp_k = r_prime.eval(uk);
        let b_k = beta.finite[k][0];

        let mut bracket = Scalar::ZERO;
        for s in 0..g {
            bracket += (delta1[s] - p[s]) * r.eval(q[s]) / (uk - q[s]);
        }
        for (i, &ui) in u.iter().enumerate() {
            if i != k {
                bracket += beta.finite[i][1] * r_prime.eval(ui) / (uk - ui);
            }
        }
        bracket -= beta.finite[k][1] * r_second.eval(uk).scale(0.5);
        bracket -= beta.infinity[1] * uk.powu((n - 2) as u32);
        bracket -= p2.eval(uk);

        let mut regular = Scalar::ZERO;
        for s in 0..g {
            regular += cx(1.0, 0.0) / (uk - q[s]);
        }
        for (i, &ui) in u.iter().enumerate() {
            if i != k {
                regular += beta.finite[i][0] / (uk - ui);
            }
        }

        closed_form.push(bracket / rp_k - b_k * regular);
    }

    Ok(HamiltonianValues { h, closed_form })
}

/// Residue of `f` at `z0`, tolerant of denominators that vanish to higher
/// order than the function itself (matched factors are cancelled by the
/// Laurent machinery).
fn residue(f: &RationalFunction, z0: Scalar) -> Result<Scalar, EquationError> {
    let order = f.pole_order(z0);
    if order == 0 {
        return Ok(Scalar::ZERO);
    }
    let (actual, coeffs) = f.laurent_at(z0, order + 1)?;
    if actual == 0 {
        return Ok(Scalar::ZERO);
    }
    Ok(coeffs[actual - 1])
}
