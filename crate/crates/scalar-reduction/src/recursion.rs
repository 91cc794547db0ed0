//! Derivative tables for the scalar reduction.
//!
//! Writing the system as `φ' = A(z)φ` with `A(z) = Σ_k A_k/(z−u_k)` and
//! `y = φ_row`, successive derivatives of `y` expand as
//!
//! ```text
//! y^(l) = Σ_{j≠row} 𝒫_{l+1,j} φ_j + Σ_{i=1..l} 𝒬_{l+1,i} y^(i−1),
//! ```
//!
//! where 𝒫 and 𝒬 are rational with poles only at the `u_k`. Multiplying by
//! the right power of `R(z) = Π_k (z−u_k)` clears all denominators, so the
//! tables are kept as *polynomials*
//!
//! ```text
//! P̃_{l,j} = R^{l−1}·𝒫_{l,j},     Q̃_{l,i} = R^{l−i}·𝒬_{l,i},
//! ```
//!
//! built from `N_{st} = R·A_{st}` (a polynomial of degree ≤ n−1) by the
//! recursion
//!
//! ```text
//! X_{l+1} = R·X'_l − (pole weight)·R'·X_l + (matrix term),
//! ```
//!
//! which never divides and therefore never introduces cancellation noise.

use algebra_core::{Polynomial, Scalar};
use fuchsian_model::FuchsianSystem;

use crate::error::ReductionError;

/// Polynomial derivative tables of a system for one reduction row.
pub(crate) struct Tables {
    /// Column indices `j ≠ row`, ascending; the column order of `delta_rows`.
    pub cols: Vec<usize>,
    /// `R(z) = Π_k (z−u_k)`, monic.
    pub r: Polynomial,
    /// `N[s][t] = R(z)·A_{st}(z)`.
    #[cfg_attr(not(test), allow(dead_code))]
    pub n_mat: Vec<Vec<Polynomial>>,
    /// `p_tilde[l−2][c]` is `P̃_{l,cols[c]}` for `l = 2..=m+1`.
    pub p_tilde: Vec<Vec<Polynomial>>,
    /// `q_tilde[l−2][i−1]` is `Q̃_{l,i}` for `l = 2..=m+1`, `i = 1..l`.
    pub q_tilde: Vec<Vec<Polynomial>>,
    /// `Σ_k u_k (A_k)_{row,j}` for each `j` in `cols` — the leading
    /// coefficients of the first-row numerators.
    pub row_leads: Vec<Scalar>,
}

impl Tables {
    /// Builds all tables up to the order needed to assemble an `m`-th order
    /// scalar equation.
    ///
    /// # Errors
    /// [`ReductionError::RowConditionViolated`] if some
    /// `Σ_k u_k (A_k)_{row,j}` vanishes (relative to the residue scale):
    /// the first reduction step cannot express `φ_j` through derivatives of
    /// `φ_row`.
    pub fn build(sys: &FuchsianSystem, row: usize) -> Result<Tables, ReductionError> {
        let m = sys.m();
        let n = sys.n();
        if row >= m {
            return Err(ReductionError::InvalidInput(format!(
                "reduction row {row} out of range for size {m}"
            )));
        }
        let cols: Vec<usize> = (0..m).filter(|&j| j != row).collect();

        let r = Polynomial::from_roots(Scalar::ONE, sys.poles());
        let r_prime = r.derivative();

        // N_{st} = Σ_k (A_k)_{st} · Π_{t≠k}(z−u_t).
        let cofactors: Vec<Polynomial> = (0..n)
            .map(|k| {
                let others: Vec<Scalar> = (0..n)
                    .filter(|&t| t != k)
                    .map(|t| sys.poles()[t])
                    .collect();
                Polynomial::from_roots(Scalar::ONE, &others)
            })
            .collect();
        let n_mat: Vec<Vec<Polynomial>> = (0..m)
            .map(|s| {
                (0..m)
                    .map(|t| {
                        let mut acc = Polynomial::zero();
                        for k in 0..n {
                            acc = &acc + &cofactors[k].scale(sys.residue(k)[(s, t)]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();

        let scale = sys.residue_scale().max(1.0)
            * sys.poles().iter().fold(1.0_f64, |a, u| a.max(u.norm()));
        let row_leads: Vec<Scalar> = cols
            .iter()
            .map(|&j| {
                (0..n)
                    .map(|k| sys.poles()[k] * sys.residue(k)[(row, j)])
                    .sum()
            })
            .collect();
        if let Some(pos) = row_leads.iter().position(|v| v.norm() <= 1e-12 * scale) {
            return Err(ReductionError::RowConditionViolated {
                row,
                detail: format!(
                    "Σ_k u_k (A_k)_{{row,{}}} = {:.3e} is numerically zero",
                    cols[pos],
                    row_leads[pos].norm()
                ),
            });
        }

        // Level l = 2: P̃_{2,j} = N_{row,j}, Q̃_{2,1} = N_{row,row}.
        let mut p_tilde: Vec<Vec<Polynomial>> =
            vec![cols.iter().map(|&j| n_mat[row][j].clone()).collect()];
        let mut q_tilde: Vec<Vec<Polynomial>> = vec![vec![n_mat[row][row].clone()]];

        // Levels l+2 from level l+1 (l = 1..m−1): weight l on the R' term.
        for l in 1..m {
            let prev_p = &p_tilde[l - 1];
            let prev_q = &q_tilde[l - 1];
            let lw = Scalar::from(l as f64);

            let step =
                |x: &Polynomial, weight: Scalar| &(&r * &x.derivative()) - &(&r_prime * x).scale(weight);

            let next_p: Vec<Polynomial> = cols
                .iter()
                .enumerate()
                .map(|(tc, &t)| {
                    let mut acc = step(&prev_p[tc], lw);
                    for (sc, &s) in cols.iter().enumerate() {
                        acc = &acc + &(&prev_p[sc] * &n_mat[s][t]);
                    }
                    acc
                })
                .collect();

            let mut next_q: Vec<Polynomial> = Vec::with_capacity(l + 1);
            // i = 1 carries the back-substituted φ-column.
            {
                let mut acc = step(&prev_q[0], lw);
                for (sc, &s) in cols.iter().enumerate() {
                    acc = &acc + &(&prev_p[sc] * &n_mat[s][row]);
                }
                next_q.push(acc);
            }
            // 2 ≤ i ≤ l: weight l+1−i on the R' term, shift from i−1.
            for i in 2..=l {
                let weight = Scalar::from((l + 1 - i) as f64);
                let acc = &step(&prev_q[i - 1], weight) + &prev_q[i - 2];
                next_q.push(acc);
            }
            // i = l+1: pure shift.
            next_q.push(prev_q[l - 1].clone());

            p_tilde.push(next_p);
            q_tilde.push(next_q);
        }

        Ok(Tables {
            cols,
            r,
            n_mat,
            p_tilde,
            q_tilde,
            row_leads,
        })
    }

    /// Size of the system the tables were built from.
    pub fn m(&self) -> usize {
        self.cols.len() + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fuchsian_model::random_generic;

    /// Degree bookkeeping: with a diagonal residue at infinity, the
    /// numerators `P̃_{l,j}` have exact degree `(l−1)(n−1) − 1`.
    #[test]
    fn p_tilde_degrees_follow_the_structure_count() {
        for (m, n, seed) in [(2usize, 3usize, 7u64), (3, 3, 8), (3, 4, 9)] {
            let sys = random_generic(m, n, seed, 0.5).unwrap();
            let tables = Tables::build(&sys, 0).unwrap();
            for (li, level) in tables.p_tilde.iter().enumerate() {
                let l = li + 2;
                for poly in level {
                    let trimmed = poly.trim(1e-9);
                    assert_eq!(
                        trimmed.degree(),
                        Some((l - 1) * (n - 1) - 1),
                        "(m,n)=({m},{n}) level {l}"
                    );
                }
            }
        }
    }

    /// The level-2 identities are definitional: P̃_{2,j} = R·A_{row,j}.
    #[test]
    fn level_two_matches_matrix_entries() {
        let sys = random_generic(3, 3, 17, 0.5).unwrap();
        let tables = Tables::build(&sys, 0).unwrap();
        let z = Scalar::new(0.63, -1.2);
        let rv = tables.r.eval(z);
        for (c, &j) in tables.cols.iter().enumerate() {
            let direct: Scalar = (0..sys.n())
                .map(|k| sys.residue(k)[(0, j)] / (z - sys.poles()[k]))
                .sum();
            let table = tables.p_tilde[0][c].eval(z) / rv;
            assert!((direct - table).norm() < 1e-12);
        }
        let diag: Scalar = (0..sys.n())
            .map(|k| sys.residue(k)[(0, 0)] / (z - sys.poles()[k]))
            .sum();
        assert!((tables.q_tilde[0][0].eval(z) / rv - diag).norm() < 1e-12);
    }

    /// A row that kills the reduction condition is rejected.
    #[test]
    fn zero_row_lead_is_rejected() {
        let sys = random_generic(2, 3, 3, 0.5).unwrap();
        // Zero out the (0,1) entries of every residue: Σ u_k (A_k)_{01} = 0.
        let mut mod_sys = sys.clone();
        for k in 0..mod_sys.n() {
            let mut a = mod_sys.residue(k).clone();
            a[(0, 1)] = Scalar::ZERO;
            mod_sys = mod_sys.with_residue(k, a);
        }
        match Tables::build(&mod_sys, 0) {
            Err(ReductionError::RowConditionViolated { row: 0, .. }) => {}
            Err(other) => panic!("expected row-condition violation, got {other:?}"),
            Ok(_) => panic!("expected row-condition violation, got tables"),
        }
    }
}
