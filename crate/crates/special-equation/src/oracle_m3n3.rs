//! Fully explicit Hamiltonians for the third-order, three-pole case.
//!
//! For `m = 3`, `n = 3` with traceless residue spectra the general
//! construction collapses to closed formulas: the four apparent
//! singularities admit explicit shifted-momentum combinations, the
//! correction polynomials `P₂ = h` (a constant) and `P₃ = a z² + b z + c`
//! solve a single 4×4 linear system, and each Hamiltonian is an explicit
//! rational expression in `(q, p, u)` and the exponent data.
//!
//! Everything here is written against scalar formulas only — no
//! partial-fraction assembly, no chain over the Calogero-type matrices, no
//! Laurent expansions — precisely so that it can serve as an independent
//! oracle for [`canonical_hamiltonians`](crate::hamiltonians::canonical_hamiltonians).
//! The two implementations share nothing beyond the β-coefficient table.
//!
//! Notation used throughout (all per apparent singularity `s` or pole `i`):
//!
//! ```text
//!   p_s^[k]  = p_s + k·R′(q_s)/R(q_s)
//!   p̃_s^[k]  = p_s^[k] − ½·Δ″(q_s)/Δ′(q_s)
//!   M(v)_st  = v_s   if t = s,     1/(q_t − q_s) otherwise
//! ```
//!
//! with `Δ(z) = Π_s (z − q_s)` monic and `R(z) = Π_i (z − u_i)`.

use algebra_core::{cx, CMat, CVec, Lu, Polynomial, Scalar};
use scalar_reduction::coordinates::IsomonodromicCoordinates;

use crate::beta::{beta_coefficients, BetaTable};
use crate::error::EquationError;

/// Relative tolerance for the traceless-spectrum domain check.
const TRACE_TOL: f64 = 1e-9;

/// Output of the explicit `m = 3, n = 3` construction.
#[derive(Debug, Clone)]
pub struct OracleM3N3 {
    /// Hamiltonian at each pole `u_k`, from the explicit formula.
    pub h: Vec<Scalar>,
    /// Constant correction term of the first-derivative coefficient
    /// (the polynomial `P₂`, which is a constant here).
    pub p2_constant: Scalar,
    /// Independent recomputation of [`Self::p2_constant`] through the
    /// weighted residue sum `Σ_s w_s/Δ′(q_s) ÷ Σ_s p̃_s^[2] R(q_s)/Δ′(q_s)`,
    /// which eliminates `P₃` identically.
    pub p2_constant_check: Scalar,
    /// Coefficients `(a, b, c)` of the quadratic correction polynomial
    /// `P₃ = a z² + b z + c` of the zeroth-derivative coefficient.
    pub p3_coefficients: [Scalar; 3],
}

/// Evaluates the explicit closed-form Hamiltonians for `m = 3`, `n = 3`
/// coordinate tuples with traceless residue spectra.
///
/// # Errors
///
/// * [`EquationError::OracleDomain`] when `(m, n) ≠ (3, 3)`;
/// * [`EquationError::InvalidInput`] when a finite spectrum is not
///   traceless (the closed forms hard-code the resulting residue `−3` of
///   the top coefficient at each pole);
/// * [`EquationError::SingularSystem`] when the 4×4 correction system or
///   the weighted residue sum degenerates.
pub fn hamiltonians_m3n3_oracle(
    coords: &IsomonodromicCoordinates,
) -> Result<OracleM3N3, EquationError> {
    let m = coords.m();
    let n = coords.n();
    if m != 3 || n != 3 {
        return Err(EquationError::OracleDomain {
            m,
            n,
            m_want: 3,
            n_want: 3,
        });
    }
    let exponents = coords.exponents();
    let lam_scale = exponents
        .finite
        .iter()
        .flatten()
        .chain(exponents.infinity.iter())
        .map(|l| l.norm())
        .fold(1.0_f64, f64::max);
    for (i, spec) in exponents.finite.iter().enumerate() {
        let trace: Scalar = spec.iter().sum();
        if trace.norm() > TRACE_TOL * lam_scale {
            return Err(EquationError::InvalidInput(format!(
                "spectrum at pole {i} has trace {trace}; the explicit formulas require \
                 traceless spectra"
            )));
        }
    }

    let q = coords.q();
    let p = coords.p();
    let u = coords.u();
    let g = coords.g();

    let beta = beta_for_row(exponents, coords.row())?;
    let b2: Vec<Scalar> = (0..n).map(|i| beta.finite[i][1]).collect();
    let b3: Vec<Scalar> = (0..n).map(|i| beta.finite[i][2]).collect();
    let b2_inf = beta.infinity[1];
    let b3_inf = beta.infinity[2];

    let r = Polynomial::from_roots(Scalar::ONE, u);
    let r_prime = r.derivative();
    let r_second = r_prime.derivative();
    let delta = Polynomial::from_roots(Scalar::ONE, q);
    let delta_prime = delta.derivative();
    let delta_second = delta_prime.derivative();

    let r_at_q: Vec<Scalar> = q.iter().map(|&qs| r.eval(qs)).collect();
    let rp_at_u: Vec<Scalar> = u.iter().map(|&ui| r_prime.eval(ui)).collect();
    // Shifted momenta p^[k] and their centered variants p̃^[k].
    let shift: Vec<Scalar> = q
        .iter()
        .map(|&qs| r_prime.eval(qs) / r.eval(qs))
        .collect();
    let center: Vec<Scalar> = q
        .iter()
        .map(|&qs| delta_second.eval(qs) / delta_prime.eval(qs) * cx(0.5, 0.0))
        .collect();
    let p_shifted = |k: f64| -> Vec<Scalar> {
        (0..g).map(|s| p[s] + shift[s].scale(k)).collect()
    };
    let p1 = p_shifted(1.0);
    let p2v = p_shifted(2.0);
    let pt2: Vec<Scalar> = (0..g).map(|s| p2v[s] - center[s]).collect();
    let pt3: Vec<Scalar> = (0..g).map(|s| p[s] + shift[s].scale(3.0) - center[s]).collect();

    // M(v)·diag(R(q)) products, as matrices acting on the right factors.
    let m_of = |v: &[Scalar]| -> CMat {
        CMat::from_fn(g, g, |s, t| {
            if s == t {
                v[s]
            } else {
                cx(1.0, 0.0) / (q[t] - q[s])
            }
        })
    };
    let m2r = {
        let mut mat = m_of(&p2v);
        for t in 0..g {
            let col = mat.column(t) * r_at_q[t];
            mat.set_column(t, &col);
        }
        mat
    };
    let m1r = {
        let mut mat = m_of(&p1);
        for t in 0..g {
            let col = mat.column(t) * r_at_q[t];
            mat.set_column(t, &col);
        }
        mat
    };

    // Exponent parts of the two lower coefficients, cleared of the pole
    // polynomial: f₂ multiplies the first-derivative ansatz, f₃ the
    // zeroth-derivative one.
    let f2 = |z: Scalar| -> Scalar {
        let mut acc = b2_inf * z;
        for (i, &ui) in u.iter().enumerate() {
            acc -= b2[i] * rp_at_u[i] / (z - ui);
        }
        acc
    };
    let f3 = |z: Scalar| -> Scalar {
        let mut acc = b3_inf * z.powu(3);
        for (i, &ui) in u.iter().enumerate() {
            acc += b3[i] * rp_at_u[i] * rp_at_u[i] / (z - ui);
        }
        acc
    };

    // w_s: the double shifted-momentum sum minus the exponent carry-over.
    let pt3_vec = CVec::from_vec(pt3.clone());
    let inner = &m1r * &pt3_vec;
    let outer = &m2r * &inner;
    let f2_at_q = CVec::from_vec(q.iter().map(|&qs| f2(qs)).collect::<Vec<_>>());
    let carry = &m2r * &f2_at_q;
    let w: Vec<Scalar> = (0..g)
        .map(|s| outer[s] - carry[s] - f3(q[s]))
        .collect();

    // The 4×4 correction system: a·q_s² + b·q_s + c + h·(M(p^[2]) R)_s 1 = w_s.
    let row_sums: Vec<Scalar> = (0..g).map(|s| m2r.row(s).sum()).collect();
    let mut sys = CMat::zeros(g, g);
    for s in 0..g {
        sys[(s, 0)] = q[s] * q[s];
        sys[(s, 1)] = q[s];
        sys[(s, 2)] = Scalar::ONE;
        sys[(s, 3)] = row_sums[s];
    }
    let lu = Lu::factor(&sys, 1e-13).map_err(|_| EquationError::SingularSystem {
        detail: "correction system for (P₂, P₃) is numerically singular".into(),
    })?;
    let sol = lu.solve_vec(&CVec::from_vec(w.clone()));
    let (a, b, c, h_const) = (sol[0], sol[1], sol[2], sol[3]);

    // Independent route to the constant h: weighting by 1/Δ′(q_s) kills
    // every polynomial of degree ≤ g−2, hence the whole P₃ block.
    let dp_at_q: Vec<Scalar> = q.iter().map(|&qs| delta_prime.eval(qs)).collect();
    let denom: Scalar = (0..g).map(|s| pt2[s] * r_at_q[s] / dp_at_q[s]).sum();
    if denom.norm() < 1e-12 {
        return Err(EquationError::SingularSystem {
            detail: "weighted residue sum for the constant correction vanishes".into(),
        });
    }
    let numer: Scalar = (0..g).map(|s| w[s] / dp_at_q[s]).sum();
    let p2_constant_check = numer / denom;

    // Hamiltonians: residue of the explicit partial-fraction data at u_k.
    let mut h = Vec::with_capacity(n);
    for (k, &uk) in u.iter().enumerate() {
        let mut bracket = b2_inf * uk + h_const;
        for s in 0..g {
            bracket += pt3[s] * r_at_q[s] / (uk - q[s]);
        }
        for (j, &uj) in u.iter().enumerate() {
            if j != k {
                bracket -= b2[j] * rp_at_u[j] / (uk - uj);
            }
        }
        let ham = -bracket / rp_at_u[k]
            - b2[k] * r_second.eval(uk) / rp_at_u[k].scale(2.0)
            + delta_prime.eval(uk) / delta.eval(uk) * cx(3.0, 0.0)
            - r_second.eval(uk) / rp_at_u[k] * cx(4.5, 0.0);
        h.push(ham);
    }

    Ok(OracleM3N3 {
        h,
        p2_constant: h_const,
        p2_constant_check,
        p3_coefficients: [a, b, c],
    })
}

/// β table for the distinguished-row rotation used everywhere else in the
/// crate: the exponent at infinity selected by `row` is moved to the front
/// before the shifted factorization is expanded.
fn beta_for_row(
    exponents: &fuchsian_model::ExponentTable,
    row: usize,
) -> Result<BetaTable, EquationError> {
    beta_coefficients(&crate::assemble::rotate_distinguished(exponents, row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use algebra_core::cx;
    use fuchsian_model::{random_generic, random_generic_traceless};
    use scalar_reduction::coordinates::extract_coordinates;

    #[test]
    fn wrong_shape_is_out_of_domain() {
        let sys = random_generic(2, 3, 5, 0.5).unwrap();
        let coords = extract_coordinates(&sys, 0).unwrap();
        match hamiltonians_m3n3_oracle(&coords) {
            Err(EquationError::OracleDomain { m, n, .. }) => {
                assert_eq!((m, n), (2, 3));
            }
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn traced_spectra_are_rejected() {
        let sys = random_generic(3, 3, 6, 0.5).unwrap();
        let coords = extract_coordinates(&sys, 0).unwrap();
        match hamiltonians_m3n3_oracle(&coords) {
            Err(EquationError::InvalidInput(msg)) => {
                assert!(msg.contains("traceless"), "unexpected message: {msg}");
            }
            other => panic!("expected trace rejection, got {other:?}"),
        }
    }

    #[test]
    fn both_routes_to_the_constant_correction_agree() {
        for seed in [3_u64, 4, 5] {
            let sys = random_generic_traceless(3, 3, seed, 0.5).unwrap();
            let coords = extract_coordinates(&sys, 0).unwrap();
            let oracle = hamiltonians_m3n3_oracle(&coords).unwrap();
            let scale = oracle.p2_constant.norm().max(1.0);
            assert!(
                (oracle.p2_constant - oracle.p2_constant_check).norm() / scale < 1e-9,
                "seed {seed}: {} vs {}",
                oracle.p2_constant,
                oracle.p2_constant_check
            );
        }
    }

    #[test]
    fn oracle_matches_the_assembled_equation() {
        use crate::assemble::assemble_equation;
        use crate::hamiltonians::canonical_hamiltonians;

        for seed in [7_u64, 8] {
            let sys = random_generic_traceless(3, 3, seed, 0.5).unwrap();
            let coords = extract_coordinates(&sys, 0).unwrap();
            let oracle = hamiltonians_m3n3_oracle(&coords).unwrap();
            let eq = assemble_equation(&coords).unwrap();
            let values = canonical_hamiltonians(&eq).unwrap();

            // Correction polynomials must agree coefficient-wise.
            let p2 = &eq.correction_polynomials()[0];
            let p3 = &eq.correction_polynomials()[1];
            let scale = oracle.p2_constant.norm().max(1.0);
            assert!(
                (p2.coeff(0) - oracle.p2_constant).norm() / scale < 1e-9,
                "seed {seed}: constant correction mismatch"
            );
            for (d, want) in [
                (2, oracle.p3_coefficients[0]),
                (1, oracle.p3_coefficients[1]),
                (0, oracle.p3_coefficients[2]),
            ] {
                let got = p3.coeff(d);
                let scale = want.norm().max(1.0);
                assert!(
                    (got - want).norm() / scale < 1e-9,
                    "seed {seed}: quadratic correction coefficient z^{d} mismatch: \
                     {got} vs {want}"
                );
            }

            // And the Hamiltonians themselves.
            for k in 0..3 {
                let scale = values.h[k].norm().max(1.0);
                assert!(
                    (values.h[k] - oracle.h[k]).norm() / scale < 1e-9,
                    "seed {seed}: H_{k} mismatch: residue {} vs oracle {}",
                    values.h[k],
                    oracle.h[k]
                );
            }
        }
    }

    #[test]
    fn oracle_accepts_detached_coordinate_tuples() {
        // The formulas are functions of (q, p, u, λ) alone; feed a tuple
        // that was never produced by a reduction.
        use fuchsian_model::ExponentTable;
        use scalar_reduction::coordinates::IsomonodromicCoordinates;

        let q = vec![cx(0.3, 0.2), cx(-1.1, 0.4), cx(0.9, -0.8), cx(-0.2, -1.3)];
        let p = vec![cx(0.7, -0.1), cx(-0.4, 0.6), cx(1.2, 0.3), cx(-0.9, -0.5)];
        let u = vec![cx(-1.0, 0.0), cx(0.4, 0.1), cx(1.5, -0.2)];
        let finite = vec![
            vec![cx(0.31, 0.05), cx(-0.14, 0.22), cx(-0.17, -0.27)],
            vec![cx(0.42, -0.11), cx(-0.25, 0.08), cx(-0.17, 0.03)],
            vec![cx(0.12, 0.19), cx(0.23, -0.31), cx(-0.35, 0.12)],
        ];
        let finite_sum: Scalar = finite.iter().flatten().sum();
        let infinity = vec![
            cx(0.55, -0.21),
            cx(-0.30, 0.44),
            -finite_sum - cx(0.55, -0.21) - cx(-0.30, 0.44),
        ];
        let table = ExponentTable { finite, infinity };
        let coords = IsomonodromicCoordinates::new(q, p, u, table, 0).unwrap();
        let oracle = hamiltonians_m3n3_oracle(&coords).unwrap();
        let scale = oracle.p2_constant.norm().max(1.0);
        assert!(
            (oracle.p2_constant - oracle.p2_constant_check).norm() / scale < 1e-9
        );
    }
}
