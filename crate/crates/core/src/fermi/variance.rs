//! Energy moments of the post-quench Hamiltonian in the Slater-determinant
//! ground state, computed from single-particle matrix elements.

use alloc::vec;
use alloc::vec::Vec;

use super::basis::SingleParticleBasis;
use super::{initial_ground_energy, FermiError};

/// Matrix elements h_{kl} = Σ_m c_{km} E'_m c_{lm} of the (truncated)
/// post-quench one-body Hamiltonian in the unperturbed basis, for rows
/// `row_range` and all columns < `cols`.
fn h_elements(
    basis: &SingleParticleBasis,
    rows: core::ops::Range<usize>,
    cols: core::ops::Range<usize>,
) -> Vec<f64> {
    let modes = basis.retained_modes();
    let c = basis.coeffs();
    let e = basis.energies();
    let mut out = vec![0.0; rows.len() * cols.len()];
    let ncols = cols.len();
    for (i, k) in rows.clone().enumerate() {
        let rk = c.row(k);
        for (j, l) in cols.clone().enumerate() {
            let rl = c.row(l);
            let mut acc = 0.0;
            for m in 0..modes {
                acc += rk[m].re * e[m] * rl[m].re;
            }
            out[i * ncols + j] = acc;
        }
    }
    out
}

/// Standard deviation ΔH_f of the post-quench one-body Hamiltonian in the
/// N-particle Slater ground state.
///
/// For a one-body operator in a Slater determinant the variance is the sum
/// of squared matrix elements between occupied and unoccupied orbitals,
/// Σ_{k<N, l≥N} |⟨k|h_f|l⟩|²; occupied-occupied elements are Pauli-blocked.
/// The unoccupied sum runs to the row cutoff of the basis, which is exactly
/// the variance of the truncated dynamics produced by
/// [`super::survival_series_det`].
pub fn many_body_variance(
    basis: &SingleParticleBasis,
    n_particles: usize,
) -> Result<f64, FermiError> {
    if n_particles == 0 || n_particles > basis.rows() {
        return Err(FermiError::InvalidParameter {
            reason: "particle number must be in 1..=rows",
        });
    }
    let rows = basis.rows();
    let block = h_elements(basis, 0..n_particles, n_particles..rows);
    let var: f64 = block.iter().map(|x| x * x).sum();
    Ok(libm::sqrt(var))
}

/// Work moments of a fermionic quench.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkMoments {
    /// ⟨W⟩ = ⟨Ψ|H_f|Ψ⟩ − E_0^i, the first moment of the work distribution.
    pub mean_work: f64,
    /// Pre-quench many-body ground energy E_0^i = N²/2.
    pub initial_energy: f64,
    /// Post-quench many-body ground energy Σ_{m<N} E'_m.
    pub post_ground_energy: f64,
    /// ⟨Ψ|H_f|Ψ⟩.
    pub mean_post_energy: f64,
}

impl WorkMoments {
    /// Mean energy above the post-quench ground state,
    /// ⟨H_f⟩ − E_0^f.
    pub fn mean_excitation(&self) -> f64 {
        self.mean_post_energy - self.post_ground_energy
    }
}

/// First work moment and related energies from the single-particle basis.
pub fn work_moments(
    basis: &SingleParticleBasis,
    n_particles: usize,
) -> Result<WorkMoments, FermiError> {
    if n_particles == 0
        || n_particles > basis.rows()
        || n_particles > basis.retained_modes()
    {
        return Err(FermiError::InvalidParameter {
            reason: "particle number must be in 1..=cutoff",
        });
    }
    let diag = h_elements(basis, 0..n_particles, 0..n_particles);
    let n = n_particles;
    let mean_post_energy: f64 = (0..n).map(|k| diag[k * n + k]).sum();
    let initial_energy = initial_ground_energy(n);
    let post_ground_energy: f64 = basis.energies().iter().take(n).sum();
    Ok(WorkMoments {
        mean_work: mean_post_energy - initial_energy,
        initial_energy,
        post_ground_energy,
        mean_post_energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermi::{
        delta_h_closed_form, delta_impurity_basis, trap_overlap_coeffs, GaussHermite,
    };
    use approx::assert_abs_diff_eq;

    #[test]
    fn no_quench_has_zero_variance() {
        let b = trap_overlap_coeffs(1.0, 16).unwrap();
        assert_abs_diff_eq!(many_body_variance(&b, 4).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn single_particle_matches_quadrature_oracle() {
        // ΔH for one particle from <x²>, <x⁴> in the ground orbital:
        // h_f - h_i = (η²-1)x²/2, Var = (η²-1)²/4 · (⟨x⁴⟩ - ⟨x²⟩²)
        let eta = 1.5f64;
        let quad = GaussHermite::new(20).unwrap();
        let psi0 = |x: f64| crate::fermi::hermite_function(0, x).unwrap();
        let x2 = quad.integrate(|x| x * x * psi0(x) * psi0(x));
        let x4 = quad.integrate(|x| x * x * x * x * psi0(x) * psi0(x));
        let expect = 0.5 * (eta * eta - 1.0) * libm::sqrt(x4 - x2 * x2);
        let b = trap_overlap_coeffs(eta, 32).unwrap();
        let got = many_body_variance(&b, 1).unwrap();
        assert_abs_diff_eq!(got, expect, epsilon = 1e-9);
        // coincides with the closed form at N = 1
        assert_abs_diff_eq!(got, 0.441942, epsilon = 1e-6);
        assert_abs_diff_eq!(got, delta_h_closed_form(eta, 1).unwrap().exact, epsilon = 1e-9);
    }

    #[test]
    fn trap_variance_matches_pauli_blocked_closed_form() {
        // with exchange cancellation only the two levels straddling the
        // Fermi edge contribute: ΔH = N(η²-1)/(2√2)
        for (eta, n) in [(1.3f64, 3usize), (1.5, 6), (2.0, 10)] {
            let b = trap_overlap_coeffs(eta, 4 * n + 48).unwrap();
            let got = many_body_variance(&b, n).unwrap();
            let expect = n as f64 * (eta * eta - 1.0) / (2.0 * core::f64::consts::SQRT_2);
            assert_abs_diff_eq!(got, expect, epsilon = 1e-8 * expect);
        }
    }

    #[test]
    fn trap_work_moments_closed_forms() {
        // ⟨W⟩ = N²(η²-1)/4 and E_0^f = ηN²/2 for the trap quench
        let eta = 1.5f64;
        let n = 10usize;
        let b = trap_overlap_coeffs(eta, 64).unwrap();
        let w = work_moments(&b, n).unwrap();
        let n2 = (n * n) as f64;
        assert_abs_diff_eq!(w.initial_energy, n2 / 2.0, epsilon = 0.0);
        assert_abs_diff_eq!(w.mean_work, n2 * (eta * eta - 1.0) / 4.0, epsilon = 1e-8);
        assert_abs_diff_eq!(w.post_ground_energy, eta * n2 / 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            w.mean_excitation(),
            n2 * (eta - 1.0) * (eta - 1.0) / 4.0,
            epsilon = 1e-8
        );
    }

    #[test]
    fn impurity_mean_work_is_barrier_times_density() {
        // ⟨W⟩ = Nκ Σ_{k<N} ψ_k(0)² for the delta barrier
        let (kappa, n, m) = (0.5f64, 5usize, 64usize);
        let b = delta_impurity_basis(kappa, n, m).unwrap();
        let w = work_moments(&b, n).unwrap();
        let density: f64 =
            (0..n).map(|k| crate::fermi::hermite_zero(k)).map(|v| v * v).sum();
        assert_abs_diff_eq!(w.mean_work, n as f64 * kappa * density, epsilon = 1e-10);
        assert!(w.mean_excitation() > 0.0);
    }
}
