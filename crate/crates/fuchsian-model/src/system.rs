//! The Fuchsian system type, its exponent bookkeeping and genericity checks.

use algebra_core::eigen::eigenvalues;
use algebra_core::CMat;
use num_complex::Complex64;

use crate::error::ModelError;

/// Relative pole-separation tolerance: two poles closer than this times the
/// largest pole magnitude count as colliding.
pub const TOL_SEP_REL: f64 = 1e-8;

/// Relative off-diagonal tolerance for the residue sum at infinity.
pub const TOL_DIAG: f64 = 1e-10;

/// Default tolerance for eigenvalue-difference resonance detection.
pub const RESONANCE_TOL: f64 = 1e-8;

/// A linear system `dΦ/dz = Σ_k A_k/(z−u_k) · Φ` described by its finite
/// poles `u_1..u_n` and residue matrices `A_1..A_n`.
///
/// Construction checks only structural shape (square matrices of equal size,
/// matching pole count). All genericity hypotheses — distinct poles,
/// diagonal residue at infinity, distinct non-resonant eigenvalues, usable
/// reduction rows — are *reported*, not enforced, by
/// [`FuchsianSystem::validate`], because several operations (notably the
/// numeric Poisson bracket) must evaluate on freely perturbed systems that
/// break them on purpose.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianSystem {
    poles: Vec<Complex64>,
    residues: Vec<CMat>,
}

impl FuchsianSystem {
    /// Builds a system from poles and residue matrices.
    ///
    /// # Errors
    /// [`ModelError::InvalidSize`] when counts or matrix shapes disagree.
    pub fn new(poles: Vec<Complex64>, residues: Vec<CMat>) -> Result<Self, ModelError> {
        if poles.is_empty() || poles.len() != residues.len() {
            return Err(ModelError::InvalidSize(format!(
                "{} poles with {} residue matrices",
                poles.len(),
                residues.len()
            )));
        }
        let m = residues[0].nrows();
        if m == 0 {
            return Err(ModelError::InvalidSize("empty residue matrices".into()));
        }
        for (k, a) in residues.iter().enumerate() {
            if a.nrows() != m || a.ncols() != m {
                return Err(ModelError::InvalidSize(format!(
                    "residue {k} is {}×{}, expected {m}×{m}",
                    a.nrows(),
                    a.ncols()
                )));
            }
        }
        Ok(Self { poles, residues })
    }

    /// Matrix size `m`.
    pub fn m(&self) -> usize {
        self.residues[0].nrows()
    }

    /// Number of finite poles `n`.
    pub fn n(&self) -> usize {
        self.poles.len()
    }

    /// Finite pole positions.
    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// Residue matrices at the finite poles.
    pub fn residues(&self) -> &[CMat] {
        &self.residues
    }

    /// Residue matrix at pole `k` (zero-based).
    pub fn residue(&self, k: usize) -> &CMat {
        &self.residues[k]
    }

    /// The residue at infinity, `A_∞ = −Σ_k A_k`.
    pub fn a_infinity(&self) -> CMat {
        let m = self.m();
        let mut acc = CMat::zeros(m, m);
        for a in &self.residues {
            acc += a;
        }
        -acc
    }

    /// Returns a copy with residue `k` replaced (no validation — intended
    /// for finite-difference perturbations on the full unreduced space).
    pub fn with_residue(&self, k: usize, a: CMat) -> Self {
        let mut out = self.clone();
        out.residues[k] = a;
        out
    }

    /// Returns a copy with the poles replaced (no validation).
    pub fn with_poles(&self, poles: Vec<Complex64>) -> Self {
        Self {
            poles,
            residues: self.residues.clone(),
        }
    }

    /// Smallest pairwise distance between finite poles.
    pub fn min_pole_separation(&self) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                min = min.min((self.poles[i] - self.poles[j]).norm());
            }
        }
        min
    }

    /// Largest residue-entry magnitude (a convenient scale for tolerances).
    pub fn residue_scale(&self) -> f64 {
        self.residues
            .iter()
            .flat_map(|a| a.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalue table: spectra of the finite residues (sorted by real part,
    /// then imaginary part, for determinism) and the diagonal of `A_∞` in row
    /// order — row order is meaningful because the reduction row singles out
    /// one entry of the infinity spectrum.
    ///
    /// # Errors
    /// Propagates eigensolver failures.
    pub fn exponents(&self) -> Result<ExponentTable, ModelError> {
        let mut finite = Vec::with_capacity(self.n());
        for a in &self.residues {
            let mut eigs = eigenvalues(a)?;
            eigs.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).expect("finite"));
            finite.push(eigs);
        }
        let ainf = self.a_infinity();
        let infinity = (0..self.m()).map(|i| ainf[(i, i)]).collect();
        Ok(ExponentTable { finite, infinity })
    }

    /// Runs every genericity test and reports the outcome of each.
    ///
    /// `resonance_tol` bounds how close an eigenvalue difference may come to
    /// a nonzero integer before the pole is flagged resonant (and how close
    /// two eigenvalues may come before distinctness fails).
    pub fn validate(&self, resonance_tol: f64) -> GenericityReport {
        let m = self.m();
        let n = self.n();
        let ainf = self.a_infinity();

        let ainf_scale = ainf.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut off_diag = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    off_diag = off_diag.max(ainf[(i, j)].norm());
                }
            }
        }
        let diagonal_ainf = off_diag <= TOL_DIAG * ainf_scale.max(1e-300) || ainf_scale == 0.0;

        let exponents = self.exponents().ok();
        let mut distinct_eigenvalues = exponents.is_some();
        let mut nonresonant_finite = vec![true; n];
        let mut min_eigenvalue_separation = f64::INFINITY;
        let mut nonresonant_infinity = true;
        let mut distinct_infinity = true;
        if let Some(table) = &exponents {
            for (k, eigs) in table.finite.iter().enumerate() {
                let (min_sep, resonant) = spectrum_diagnostics(eigs, resonance_tol);
                min_eigenvalue_separation = min_eigenvalue_separation.min(min_sep);
                if min_sep <= resonance_tol {
                    distinct_eigenvalues = false;
                }
                if resonant {
                    nonresonant_finite[k] = false;
                }
            }
            let (min_sep_inf, resonant_inf) = spectrum_diagnostics(&table.infinity, resonance_tol);
            min_eigenvalue_separation = min_eigenvalue_separation.min(min_sep_inf);
            distinct_infinity = min_sep_inf > resonance_tol;
            nonresonant_infinity = !resonant_inf;
        }

        // Row usability: every off-row entry of the first moment
        // Σ_k u_k·A_k must be nonzero on row j for the reduction from row j
        // to reach full degree.
        let scale = self.residue_scale()
            * self.poles.iter().map(|u| u.norm()).fold(0.0, f64::max).max(1.0);
        let mut row_condition = vec![true; m];
        for j in 0..m {
            for i in 0..m {
                if i == j {
                    continue;
                }
                let mut moment = Complex64::ZERO;
                for (k, a) in self.residues.iter().enumerate() {
                    moment += self.poles[k] * a[(j, i)];
                }
                if moment.norm() <= 1e-10 * scale.max(1e-300) {
                    row_condition[j] = false;
                }
            }
        }

        GenericityReport {
            diagonal_ainf,
            distinct_eigenvalues,
            distinct_infinity,
            nonresonant_finite,
            nonresonant_infinity,
            row_condition,
            min_pole_separation: self.min_pole_separation(),
            min_eigenvalue_separation,
        }
    }
}

/// Smallest pairwise separation within a spectrum together with a resonance
/// flag (some difference within `tol` of a nonzero integer).
fn spectrum_diagnostics(eigs: &[Complex64], tol: f64) -> (f64, bool) {
    let mut min_sep = f64::INFINITY;
    let mut resonant = false;
    for i in 0..eigs.len() {
        for j in (i + 1)..eigs.len() {
            let d = eigs[i] - eigs[j];
            min_sep = min_sep.min(d.norm());
            let nearest = d.re.round();
            if nearest != 0.0 && (d - Complex64::new(nearest, 0.0)).norm() <= tol {
                resonant = true;
            }
        }
    }
    (min_sep, resonant)
}

/// Eigenvalues of every residue matrix, plus the diagonal of `A_∞`.
///
/// The total of all entries vanishes identically (`Σ_k tr A_k + tr A_∞ = 0`
/// by construction of `A_∞`), which doubles as a cheap integrity check after
/// deserialization.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTable {
    /// Per finite pole: the spectrum of `A_k`, sorted by `(re, im)`.
    pub finite: Vec<Vec<Complex64>>,
    /// Diagonal entries of `A_∞` in row order.
    pub infinity: Vec<Complex64>,
}

impl ExponentTable {
    /// Sum of every exponent over all poles including infinity.
    pub fn total_sum(&self) -> Complex64 {
        let finite: Complex64 = self.finite.iter().flatten().sum();
        let infinity: Complex64 = self.infinity.iter().sum();
        finite + infinity
    }

    /// Elementary symmetric function `σ_k` of the spectrum at finite pole
    /// `i` (zero-based), with `σ_0 = 1`.
    pub fn sigma(&self, i: usize, k: usize) -> Complex64 {
        elementary_symmetric(&self.finite[i], k)
    }

    /// Elementary symmetric function `σ_k` of the infinity spectrum.
    pub fn sigma_infinity(&self, k: usize) -> Complex64 {
        elementary_symmetric(&self.infinity, k)
    }
}

/// `σ_k` of a list of values via the stable one-pass recurrence.
pub fn elementary_symmetric(values: &[Complex64], k: usize) -> Complex64 {
    let mut e = vec![Complex64::ZERO; k + 1];
    e[0] = Complex64::ONE;
    for &v in values {
        for j in (1..=k).rev() {
            let prev = e[j - 1];
            e[j] += v * prev;
        }
    }
    e[k]
}

/// Outcome of every genericity test; all failures are flags, never errors.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericityReport {
    /// `A_∞` is diagonal within tolerance.
    pub diagonal_ainf: bool,
    /// Each finite residue has pairwise distinct eigenvalues.
    pub distinct_eigenvalues: bool,
    /// The diagonal entries of `A_∞` are pairwise distinct.
    pub distinct_infinity: bool,
    /// Per finite pole: no eigenvalue pair differs by a nonzero integer.
    pub nonresonant_finite: Vec<bool>,
    /// No `A_∞` diagonal pair differs by a nonzero integer.
    pub nonresonant_infinity: bool,
    /// Per row `j`: every off-row entry of `Σ_k u_k·A_k` on row `j` is
    /// nonzero, so row `j` can drive a full-degree scalar reduction.
    pub row_condition: Vec<bool>,
    /// Smallest pairwise distance between finite poles.
    pub min_pole_separation: f64,
    /// Smallest pairwise eigenvalue distance over all poles and infinity.
    pub min_eigenvalue_separation: f64,
}

impl GenericityReport {
    /// `true` iff every flag passed.
    pub fn all_generic(&self) -> bool {
        self.diagonal_ainf
            && self.distinct_eigenvalues
            && self.distinct_infinity
            && self.nonresonant_finite.iter().all(|&b| b)
            && self.nonresonant_infinity
            && self.row_condition.iter().any(|&b| b)
            && self.min_pole_separation > 0.0
    }

    /// First row whose reduction condition holds, if any (zero-based).
    pub fn usable_row(&self) -> Option<usize> {
        self.row_condition.iter().position(|&b| b)
    }
}

/// Dimension of the space of coordinate pairs `(q, p)` carried by a system
/// of size `m` with `n` finite poles: `g = m(m−1)(n−1)/2 − (m−1)`.
///
/// # Errors
/// [`ModelError::InvalidSize`] unless `m ≥ 2` and `n ≥ 3`.
pub fn phase_dimension(m: usize, n: usize) -> Result<usize, ModelError> {
    if m < 2 || n < 3 {
        return Err(ModelError::InvalidSize(format!(
            "phase dimension needs m ≥ 2 and n ≥ 3, got ({m}, {n})"
        )));
    }
    Ok(m * (m - 1) * (n - 1) / 2 - (m - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag2(a: f64, b: f64) -> CMat {
        CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(a, 0.0), c(b, 0.0)]))
    }

    #[test]
    fn phase_dimension_reference_values() {
        assert_eq!(phase_dimension(3, 3).unwrap(), 4);
        assert_eq!(phase_dimension(2, 3).unwrap(), 1);
        assert_eq!(phase_dimension(3, 4).unwrap(), 7);
        assert!(phase_dimension(1, 3).is_err());
        assert!(phase_dimension(2, 2).is_err());
    }

    #[test]
    fn diagonal_pair_flags_match_expectations() {
        // Two opposite diagonal residues: A_∞ = 0 is diagonal, each finite
        // spectrum is distinct, but no row can drive a reduction.
        let sys = FuchsianSystem::new(
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![diag2(1.0, -1.0), diag2(-1.0, 1.0)],
        )
        .unwrap();
        let report = sys.validate(RESONANCE_TOL);
        assert!(report.diagonal_ainf);
        assert!(report.distinct_eigenvalues);
        assert_eq!(report.row_condition, vec![false, false]);
        assert!(!report.all_generic());
    }

    #[test]
    fn integer_spaced_infinity_spectrum_is_resonant() {
        // A_∞ = diag(0.5, −0.5): difference exactly 1.
        let a1 = CMat::from_row_slice(
            2,
            2,
            &[c(0.2, 0.1), c(0.3, 0.0), c(-0.1, 0.2), c(0.4, -0.3)],
        );
        let ainf = diag2(0.5, -0.5);
        let a2 = -(&ainf) - &a1;
        let sys = FuchsianSystem::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![a1, a2]).unwrap();
        let report = sys.validate(RESONANCE_TOL);
        assert!(!report.nonresonant_infinity);
    }

    #[test]
    fn exponent_table_sums_to_zero() {
        let a1 = CMat::from_row_slice(
            2,
            2,
            &[c(0.2, 0.1), c(0.3, 0.0), c(-0.1, 0.2), c(0.4, -0.3)],
        );
        let a2 = CMat::from_row_slice(
            2,
            2,
            &[c(-0.3, 0.2), c(0.1, 0.1), c(0.2, -0.1), c(0.6, 0.0)],
        );
        let a3 = -(&a1) - &a2 - diag2(0.7, -0.9);
        let sys = FuchsianSystem::new(
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 1.0)],
            vec![a1, a2, a3],
        )
        .unwrap();
        let table = sys.exponents().unwrap();
        assert!(table.total_sum().norm() < 1e-10);
        assert_eq!(table.infinity.len(), 2);
    }

    #[test]
    fn elementary_symmetric_matches_vieta() {
        // Roots of (x−1)(x−2)(x−3): σ₁ = 6, σ₂ = 11, σ₃ = 6.
        let vals = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        assert!((elementary_symmetric(&vals, 1) - c(6.0, 0.0)).norm() < 1e-14);
        assert!((elementary_symmetric(&vals, 2) - c(11.0, 0.0)).norm() < 1e-14);
        assert!((elementary_symmetric(&vals, 3) - c(6.0, 0.0)).norm() < 1e-14);
    }
}
