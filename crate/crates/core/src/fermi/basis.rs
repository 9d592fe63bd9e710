//! Single-particle eigenbases of the post-quench Hamiltonians, expressed in
//! the unperturbed harmonic-oscillator basis.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::hermite::{hermite_table, hermite_zero};
use super::quadrature::GaussHermite;
use super::FermiError;
use crate::numerics::{eigenvalues, eigh, ComplexMatrix};
use crate::tolerances::Tolerances;

/// Eigenpairs of a perturbed single-particle Hamiltonian in the unperturbed
/// oscillator basis.
///
/// `coeffs` holds ⟨ψ_k|φ_m⟩ with the unperturbed index k as the row and the
/// perturbed index m as the column; more rows than columns are kept so that
/// every retained column is complete. Opposite-parity entries are exactly
/// zero: both quenches preserve parity.
#[derive(Debug, Clone)]
pub struct SingleParticleBasis {
    energies: Vec<f64>,
    coeffs: ComplexMatrix,
}

impl SingleParticleBasis {
    pub(crate) fn from_parts(energies: Vec<f64>, coeffs: ComplexMatrix) -> Self {
        debug_assert_eq!(energies.len(), coeffs.cols());
        Self { energies, coeffs }
    }

    /// Perturbed eigenenergies E'_m, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Overlap coefficients ⟨ψ_k|φ_m⟩ (rows k, columns m).
    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    /// Number of retained perturbed orbitals (columns).
    pub fn retained_modes(&self) -> usize {
        self.coeffs.cols()
    }

    /// Number of unperturbed rows kept.
    pub fn rows(&self) -> usize {
        self.coeffs.rows()
    }

    /// |1 - Σ_k |c_km|²| for column m.
    pub fn column_defect(&self, m: usize) -> f64 {
        let s: f64 = (0..self.coeffs.rows()).map(|k| self.coeffs[(k, m)].norm_sqr()).sum();
        (1.0 - s).abs()
    }

    /// |1 - Σ_m |c_km|²| for row k.
    pub fn row_defect(&self, k: usize) -> f64 {
        let s: f64 = self.coeffs.row(k).iter().map(|z| z.norm_sqr()).sum();
        (1.0 - s).abs()
    }

    /// Check that every occupied row k < n is complete to tolerance.
    pub fn check_row_completeness(&self, n: usize, tol: &Tolerances) -> Result<(), FermiError> {
        for k in 0..n.min(self.rows()) {
            let defect = self.row_defect(k);
            if defect > tol.completeness {
                return Err(FermiError::RowTruncation { index: k, defect });
            }
        }
        Ok(())
    }
}

/// Overlap coefficients between the unit-frequency oscillator basis and the
/// frequency-η basis, with default tolerances. See
/// [`trap_overlap_coeffs_with`].
pub fn trap_overlap_coeffs(eta: f64, modes: usize) -> Result<SingleParticleBasis, FermiError> {
    trap_overlap_coeffs_with(eta, modes, &Tolerances::default())
}

/// Overlap coefficients ⟨ψ_k|φ_m⟩ for the trap quench, by high-order
/// Gauss-Hermite quadrature.
///
/// The product ψ_k(x)φ_m(x) is a polynomial times e^{-(1+η)x²/2}; after the
/// substitution x = y·√(2/(1+η)) the rule integrates it exactly, so the
/// coefficients are accurate to roundoff and the completeness checks are
/// self-validating. The number of unperturbed rows grows automatically
/// until every retained column is complete; perturbed energies are
/// E'_m = η(m + 1/2).
pub fn trap_overlap_coeffs_with(
    eta: f64,
    modes: usize,
    tol: &Tolerances,
) -> Result<SingleParticleBasis, FermiError> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(FermiError::InvalidParameter { reason: "eta must be positive and finite" });
    }
    if modes == 0 {
        return Err(FermiError::InvalidParameter { reason: "need at least one mode" });
    }

    // momentum support of phi_m reaches k ~ eta*m
    let mut rows = libm::ceil(eta * modes as f64) as usize + modes / 2 + 32;
    let mut worst = (0usize, 0.0f64);
    for _attempt in 0..4 {
        let basis = trap_quadrature(eta, modes, rows)?;
        worst = (0, 0.0);
        for m in 0..modes {
            let defect = basis.column_defect(m);
            if defect > worst.1 {
                worst = (m, defect);
            }
        }
        if worst.1 <= tol.completeness {
            return Ok(basis);
        }
        rows = rows * 3 / 2 + 16;
    }
    Err(FermiError::Truncation { index: worst.0, defect: worst.1 })
}

fn trap_quadrature(eta: f64, modes: usize, rows: usize) -> Result<SingleParticleBasis, FermiError> {
    let order = (rows + modes) / 2 + 8;
    let rule = GaussHermite::new(order)?;
    let scale = libm::sqrt(2.0 / (1.0 + eta));
    let sqrt_eta = libm::sqrt(eta);
    let eta_quarter = libm::exp(0.25 * libm::log(eta));

    // tables: psi_k(s y_q) and phi_m(s y_q), k-major for contiguous q sums
    let mut unperturbed = vec![0.0; rows * order];
    let mut perturbed = vec![0.0; modes * order];
    let mut buf_u = vec![0.0; rows];
    let mut buf_p = vec![0.0; modes];
    for (q, &y) in rule.nodes().iter().enumerate() {
        let x = scale * y;
        hermite_table(x, &mut buf_u)?;
        for k in 0..rows {
            unperturbed[k * order + q] = buf_u[k];
        }
        hermite_table(sqrt_eta * x, &mut buf_p)?;
        for m in 0..modes {
            perturbed[m * order + q] = eta_quarter * buf_p[m];
        }
    }

    let w = rule.total_weights();
    let mut coeffs = ComplexMatrix::zeros(rows, modes);
    for k in 0..rows {
        let uk = &unperturbed[k * order..(k + 1) * order];
        for m in (k % 2..modes).step_by(2) {
            let pm = &perturbed[m * order..(m + 1) * order];
            // Neumaier-compensated sum: the survival determinant at t = 0
            // multiplies ~N row sums of these coefficients, so their last
            // bits matter
            let mut acc = 0.0f64;
            let mut comp = 0.0f64;
            for q in 0..order {
                let term = w[q] * uk[q] * pm[q];
                let sum = acc + term;
                comp += if acc.abs() >= term.abs() {
                    (acc - sum) + term
                } else {
                    (term - sum) + acc
                };
                acc = sum;
            }
            coeffs[(k, m)] = Complex64::new(scale * (acc + comp), 0.0);
        }
    }

    let energies = (0..modes).map(|m| eta * (m as f64 + 0.5)).collect();
    Ok(SingleParticleBasis::from_parts(energies, coeffs))
}

/// Eigenbasis of the delta-impurity Hamiltonian
/// H = -∇²/2 + x²/2 + Nκ δ(x) in the truncated oscillator basis.
///
/// Odd orbitals have a node at the origin and are untouched (energies
/// exactly n + 1/2); the even sector is diagonalized densely at the cutoff.
/// Eigenvector columns of the even block are the overlap coefficients
/// directly, so the coefficient matrix is exactly orthogonal.
pub fn delta_impurity_basis(
    kappa: f64,
    n_particles: usize,
    cutoff: usize,
) -> Result<SingleParticleBasis, FermiError> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(FermiError::InvalidParameter {
            reason: "kappa must be non-negative and finite",
        });
    }
    if n_particles == 0 || cutoff < n_particles {
        return Err(FermiError::InvalidParameter { reason: "cutoff below particle number" });
    }
    let (energies, coeffs) = delta_diagonalize(n_particles as f64 * kappa, cutoff)?;
    Ok(SingleParticleBasis::from_parts(energies, coeffs))
}

/// Same as [`delta_impurity_basis`] but certifies cutoff convergence: the
/// lowest `n_particles` energies are recomputed at twice the cutoff and the
/// drift must stay below `drift_tol`.
///
/// The delta potential imprints a derivative kink on its eigenfunctions, so
/// the truncated-basis energies converge only like 1/√cutoff; drifts below
/// roughly 1e-2 require cutoffs in the thousands. Callers choose a
/// tolerance appropriate to the observable they need.
pub fn delta_impurity_basis_checked(
    kappa: f64,
    n_particles: usize,
    cutoff: usize,
    drift_tol: f64,
) -> Result<(SingleParticleBasis, f64), FermiError> {
    let basis = delta_impurity_basis(kappa, n_particles, cutoff)?;
    let (doubled, _) = delta_spectrum(n_particles as f64 * kappa, cutoff * 2)?;
    let drift = basis
        .energies()
        .iter()
        .take(n_particles)
        .zip(&doubled)
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
    if drift > drift_tol {
        return Err(FermiError::CutoffDrift { drift, tolerance: drift_tol });
    }
    Ok((basis, drift))
}

/// Merged eigenvalues only (for convergence checks).
fn delta_spectrum(height: f64, cutoff: usize) -> Result<(Vec<f64>, usize), FermiError> {
    let evens: Vec<usize> = (0..cutoff).step_by(2).collect();
    let h = even_block(height, &evens);
    let we = eigenvalues(&h)?;
    let odd: Vec<f64> = (1..cutoff).step_by(2).map(|n| n as f64 + 0.5).collect();
    let mut merged = Vec::with_capacity(cutoff);
    let (mut i, mut j) = (0, 0);
    while i < we.len() || j < odd.len() {
        if j >= odd.len() || (i < we.len() && we[i] <= odd[j]) {
            merged.push(we[i]);
            i += 1;
        } else {
            merged.push(odd[j]);
            j += 1;
        }
    }
    Ok((merged, evens.len()))
}

fn even_block(height: f64, evens: &[usize]) -> ComplexMatrix {
    let p = evens.len();
    let values: Vec<f64> = evens.iter().map(|&n| hermite_zero(n)).collect();
    ComplexMatrix::from_fn(p, p, |i, j| {
        let mut v = height * values[i] * values[j];
        if i == j {
            v += evens[i] as f64 + 0.5;
        }
        Complex64::new(v, 0.0)
    })
}

fn delta_diagonalize(
    height: f64,
    cutoff: usize,
) -> Result<(Vec<f64>, ComplexMatrix), FermiError> {
    let evens: Vec<usize> = (0..cutoff).step_by(2).collect();
    let odds: Vec<usize> = (1..cutoff).step_by(2).collect();
    let h = even_block(height, &evens);
    let decomp = eigh(&h)?;

    // merge even eigenpairs with the untouched odd orbitals by energy
    struct Level {
        energy: f64,
        even_col: Option<usize>,
        odd_row: Option<usize>,
    }
    let mut levels: Vec<Level> = Vec::with_capacity(cutoff);
    let (mut i, mut j) = (0usize, 0usize);
    while i < evens.len() || j < odds.len() {
        let take_even = j >= odds.len()
            || (i < evens.len() && decomp.eigenvalues[i] <= odds[j] as f64 + 0.5);
        if take_even {
            levels.push(Level {
                energy: decomp.eigenvalues[i],
                even_col: Some(i),
                odd_row: None,
            });
            i += 1;
        } else {
            levels.push(Level {
                energy: odds[j] as f64 + 0.5,
                even_col: None,
                odd_row: Some(odds[j]),
            });
            j += 1;
        }
    }

    let mut coeffs = ComplexMatrix::zeros(cutoff, cutoff);
    for (col, level) in levels.iter().enumerate() {
        match (level.even_col, level.odd_row) {
            (Some(ec), None) => {
                for (p, &row) in evens.iter().enumerate() {
                    coeffs[(row, col)] = decomp.eigenvectors[(p, ec)];
                }
            }
            (None, Some(row)) => {
                coeffs[(row, col)] = Complex64::ONE;
            }
            _ => unreachable!(),
        }
    }
    Ok((levels.into_iter().map(|l| l.energy).collect(), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn trap_identity_at_eta_one() {
        let b = trap_overlap_coeffs(1.0, 12).unwrap();
        for k in 0..12 {
            for m in 0..12 {
                let expect = if k == m { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(b.coeffs()[(k, m)].re, expect, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(b.energies()[3], 3.5, epsilon = 1e-15);
    }

    #[test]
    fn trap_parity_selection_is_structural() {
        let b = trap_overlap_coeffs(1.7, 10).unwrap();
        for k in 0..b.rows() {
            for m in 0..10 {
                if (k + m) % 2 == 1 {
                    assert_eq!(b.coeffs()[(k, m)].re, 0.0);
                    assert_eq!(b.coeffs()[(k, m)].im, 0.0);
                }
            }
        }
    }

    #[test]
    fn trap_ground_overlap_matches_closed_form() {
        // |<psi_0|phi_0>|^2 = 2 sqrt(eta) / (1 + eta)
        for eta in [1.2, 1.5, 2.0, 3.0] {
            let b = trap_overlap_coeffs(eta, 8).unwrap();
            let c00 = b.coeffs()[(0, 0)].re;
            let expect = 2.0 * libm::sqrt(eta) / (1.0 + eta);
            assert_abs_diff_eq!(c00 * c00, expect, epsilon = 1e-10);
        }
        // the spec'd spot value at eta = 1.5
        let b = trap_overlap_coeffs(1.5, 8).unwrap();
        let c00 = b.coeffs()[(0, 0)].re;
        assert_abs_diff_eq!(c00 * c00, 0.979796, epsilon = 1e-6);
    }

    #[test]
    fn trap_completeness_both_ways() {
        // occupied rows are only complete when the column range covers the
        // momentum support m ~ eta*k, which the production cutoff guarantees
        let tol = Tolerances::default();
        let n = 16;
        for eta in [1.2, 2.0, 4.0] {
            let cutoff = crate::fermi::TrapQuench::default_basis_cutoff(eta, n);
            let b = trap_overlap_coeffs(eta, cutoff).unwrap();
            for m in 0..cutoff {
                assert!(b.column_defect(m) <= tol.completeness);
            }
            b.check_row_completeness(n, &tol).unwrap();
        }
    }

    #[test]
    fn delta_free_limit_is_identity() {
        let b = delta_impurity_basis(0.0, 4, 20).unwrap();
        for (m, &e) in b.energies().iter().enumerate() {
            assert_eq!(e, m as f64 + 0.5);
        }
        for k in 0..20 {
            for m in 0..20 {
                let expect = if k == m { 1.0 } else { 0.0 };
                assert_eq!(b.coeffs()[(k, m)].re, expect);
            }
        }
    }

    #[test]
    fn delta_odd_levels_exact() {
        let b = delta_impurity_basis(0.8, 6, 40).unwrap();
        // odd oscillator levels keep their energies exactly
        for target in [1.5, 3.5, 5.5, 7.5] {
            assert!(
                b.energies().iter().any(|&e| e == target),
                "missing exact odd level {target}"
            );
        }
        // and even levels move strictly up for a repulsive barrier
        assert!(b.energies()[0] > 0.5);
    }

    #[test]
    fn delta_coeffs_are_orthogonal() {
        let b = delta_impurity_basis(0.5, 5, 30).unwrap();
        for m in 0..30 {
            assert!(b.column_defect(m) < 1e-12);
        }
        b.check_row_completeness(30, &Tolerances::default()).unwrap();
    }

    #[test]
    fn delta_large_barrier_even_ground_approaches_odd() {
        // at Nk = 1000 the even ground level merges with the first odd one;
        // the truncated energies converge like 1/sqrt(cutoff), so use the
        // doubled-cutoff pair to extrapolate
        let e512 = delta_impurity_basis(100.0, 10, 512).unwrap().energies()[0];
        let e1024 = delta_impurity_basis(100.0, 10, 1024).unwrap().energies()[0];
        let extrapolated = e1024 + (e1024 - e512) / (libm::sqrt(2.0) - 1.0);
        assert_abs_diff_eq!(extrapolated, 1.5, epsilon = 1e-2);
    }

    #[test]
    fn checked_variant_reports_drift() {
        let err = delta_impurity_basis_checked(0.5, 10, 64, 1e-9).unwrap_err();
        assert!(matches!(err, FermiError::CutoffDrift { .. }));
        let (_, drift) = delta_impurity_basis_checked(0.5, 10, 64, 0.1).unwrap();
        assert!(drift > 0.0 && drift < 0.1);
    }
}
