//! Quench dynamics of the joint impurity-bath state.
//!
//! The initial state is the pre-quench ground state: the bath at its γ = 0
//! ground level times the impurity ground of the -2s_z term, a single
//! basis vector of the collective basis. Spectral weights of that vector
//! under the post-quench Hamiltonian give
//!     χ(t) = Σ_j p_j e^{-i(E_j - E_i)t}.

use alloc::vec::Vec;
use num_complex::Complex64;

use super::model::{build_hamiltonian, ground_info, state_index, LmgSpec};
use super::variance::variance_closed_form;
use super::LmgError;
use crate::numerics::spectral_weights;
use crate::series::SurvivalSeries;

/// Spectral weights below this are dropped when synthesizing χ(t); the
/// total mass lost is bounded by dim·1e-16, far below every series
/// tolerance.
const WEIGHT_FLOOR: f64 = 1e-16;

/// Post-quench spectral data of the initial state.
#[derive(Debug, Clone)]
pub struct LmgQuenchWeights {
    /// Post-quench eigenvalues, ascending.
    pub energies: Vec<f64>,
    /// |⟨φ_j|ψ0⟩|² per eigenvalue.
    pub probabilities: Vec<f64>,
    /// Pre-quench ground energy E_i (the initial state's eigenvalue).
    pub initial_energy: f64,
    /// Basis index of the initial state.
    pub initial_index: usize,
}

impl LmgQuenchWeights {
    /// Σ_j p_j; unity up to roundoff.
    pub fn total_probability(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// First moment Σ_j p_j E_j - E_i of the work distribution.
    ///
    /// The interaction has no diagonal element in the initial basis state,
    /// so the exact value is zero; this spectral form reproduces it to
    /// roundoff and is used as a cross-check.
    pub fn mean_work_spectral(&self) -> f64 {
        let mean: f64 =
            self.energies.iter().zip(&self.probabilities).map(|(e, p)| e * p).sum();
        mean - self.initial_energy
    }

    /// Mean energy above the post-quench ground state.
    pub fn mean_excitation(&self) -> f64 {
        let mean: f64 =
            self.energies.iter().zip(&self.probabilities).map(|(e, p)| e * p).sum();
        mean - self.energies[0]
    }

    /// χ(t) at an arbitrary time.
    pub fn chi_at(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (&e, &p) in self.energies.iter().zip(&self.probabilities) {
            if p < WEIGHT_FLOOR {
                continue;
            }
            acc += p * Complex64::cis(-(e - self.initial_energy) * t);
        }
        acc
    }

    /// F(t) = |χ(t)|².
    pub fn fidelity_at(&self, t: f64) -> f64 {
        self.chi_at(t).norm_sqr()
    }
}

/// Diagonalize the post-quench Hamiltonian against the initial basis state.
pub fn quench_weights(spec: &LmgSpec) -> Result<LmgQuenchWeights, LmgError> {
    let g = ground_info(spec.lambda(), spec.n_spins())?;
    let initial_index = state_index(spec.n_spins(), g.twice_m_ground, true)
        .expect("ground level is always a valid basis state");
    let h = build_hamiltonian(spec, true)?;
    debug_assert!({
        // the initial state must be the argmin of the pre-quench diagonal
        let pre = build_hamiltonian(spec, false).expect("pre-quench assembly");
        let mut best = 0;
        for i in 1..pre.rows() {
            if pre[(i, i)].re < pre[(best, best)].re {
                best = i;
            }
        }
        pre[(best, best)].re == pre[(initial_index, initial_index)].re
    });
    let mut state = alloc::vec![Complex64::ZERO; h.rows()];
    state[initial_index] = Complex64::ONE;
    let sw = spectral_weights(&h, &state)?;
    Ok(LmgQuenchWeights {
        energies: sw.energies,
        probabilities: sw.overlaps.iter().map(|z| z.norm_sqr()).collect(),
        initial_energy: g.energy,
        initial_index,
    })
}

/// Survival series of the quench over the spec's time grid.
pub fn quench_survival(spec: &LmgSpec) -> Result<SurvivalSeries, LmgError> {
    let w = quench_weights(spec)?;
    let chi: Vec<Complex64> = spec.time_grid().iter().map(|&t| w.chi_at(t)).collect();
    Ok(SurvivalSeries::new(spec.time_grid().to_vec(), chi)?)
}

/// Minimum of the survival probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FminScan {
    /// Minimum over the raw grid.
    pub grid_f_min: f64,
    /// Grid time of that minimum.
    pub grid_t_min: f64,
    /// Refined minimum (parabolic/golden refinement of the exact F inside
    /// the bracketing grid interval).
    pub f_min: f64,
    /// Refined time of the minimum.
    pub t_min: f64,
    /// Set when the refinement moved the minimum by more than one grid
    /// step; the grid is too coarse for the refinement to be trusted blind.
    pub grid_too_coarse: bool,
}

/// Scan the spec's grid for the global minimum of F and refine it.
///
/// The grid must cover at least one recurrence 2π/ΔH of the closed-form
/// variance so the global minimum cannot hide beyond the grid end.
pub fn survival_minimum(spec: &LmgSpec) -> Result<FminScan, LmgError> {
    let dh = variance_closed_form(spec.lambda(), spec.n_spins(), spec.gamma());
    let extent = *spec.time_grid().last().expect("validated grid is non-empty");
    if dh > 0.0 && extent < 2.0 * core::f64::consts::PI / dh - 1e-9 {
        return Err(LmgError::InvalidParameter {
            reason: "time grid must cover one recurrence period 2*pi/dH",
        });
    }
    let w = quench_weights(spec)?;
    let grid = spec.time_grid();
    let fs: Vec<f64> = grid.iter().map(|&t| w.fidelity_at(t)).collect();
    let refined = crate::series::refine_first_minimum(grid, &fs, |t| w.fidelity_at(t));
    let step = if grid.len() > 1 { grid[1] - grid[0] } else { 0.0 };
    Ok(FminScan {
        grid_f_min: fs[refined.grid_index],
        grid_t_min: grid[refined.grid_index],
        f_min: refined.value,
        t_min: refined.t,
        grid_too_coarse: (refined.t - grid[refined.grid_index]).abs() > step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmg::model::bath_diagonal;
    use approx::assert_abs_diff_eq;

    /// Independent two-level oracle: the interaction couples the initial
    /// state |m0, up⟩ only to |m0+1, down⟩, so the exact dynamics lives in
    /// a 2x2 block. Returns (f_min, t_min, p_a, p_b).
    fn two_level_oracle(spec: &LmgSpec) -> (f64, f64) {
        let n = spec.n_spins();
        let g = ground_info(spec.lambda(), n).unwrap();
        let tm = g.twice_m_ground;
        let e1 = bath_diagonal(spec.lambda(), n, tm) - 1.0;
        let e2 = bath_diagonal(spec.lambda(), n, tm + 2) + 1.0;
        let v = super::super::model::ladder_coupling(spec.gamma(), n, tm);
        let de = libm::hypot(e1 - e2, 2.0 * v);
        let papb = v * v / (de * de);
        (1.0 - 4.0 * papb, core::f64::consts::PI / de)
    }

    #[test]
    fn free_impurity_keeps_unit_survival() {
        let spec = LmgSpec::new(1.3, 12).unwrap().with_gamma(0.0).unwrap();
        let s = quench_survival(&spec).unwrap();
        for &f in s.fidelity() {
            assert_abs_diff_eq!(f, 1.0, epsilon = 1e-12);
        }
        let scan = survival_minimum(&spec).unwrap();
        assert_abs_diff_eq!(scan.f_min, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weights_sum_to_one_and_mean_work_vanishes() {
        for (lambda, n) in [(0.9, 40usize), (1.4, 75)] {
            let spec = LmgSpec::new(lambda, n).unwrap();
            let w = quench_weights(&spec).unwrap();
            assert_abs_diff_eq!(w.total_probability(), 1.0, epsilon = 1e-10);
            // V has zero diagonal in the initial state: <W> = 0
            assert_abs_diff_eq!(w.mean_work_spectral(), 0.0, epsilon = 1e-10);
            assert!(w.mean_excitation() > 0.0);
        }
    }

    #[test]
    fn dense_route_matches_two_level_oracle() {
        for (lambda, n) in [(0.9, 60usize), (1.2, 101), (1.7, 64)] {
            let spec = LmgSpec::new(lambda, n).unwrap();
            let scan = survival_minimum(&spec).unwrap();
            let (f_expect, t_expect) = two_level_oracle(&spec);
            assert_abs_diff_eq!(scan.f_min, f_expect, epsilon = 1e-9);
            assert_abs_diff_eq!(scan.t_min, t_expect, epsilon = 1e-6 * t_expect);
            assert!(!scan.grid_too_coarse);
        }
    }

    #[test]
    fn aligned_phase_minimum_is_size_independent() {
        let spec_a = LmgSpec::new(0.9, 200).unwrap();
        let spec_b = LmgSpec::new(0.9, 400).unwrap();
        let fa = survival_minimum(&spec_a).unwrap().f_min;
        let fb = survival_minimum(&spec_b).unwrap().f_min;
        assert!((fa - fb).abs() / fa < 0.01);
        assert!(fa > 0.2, "aligned phase stays far from orthogonality");
    }

    #[test]
    fn critical_phase_minimum_decays_with_size() {
        let fa = survival_minimum(&LmgSpec::new(1.1, 100).unwrap()).unwrap().f_min;
        let fb = survival_minimum(&LmgSpec::new(1.1, 400).unwrap()).unwrap().f_min;
        assert!(fb < fa);
    }

    #[test]
    fn short_grid_is_rejected() {
        let spec = LmgSpec::new(1.2, 30).unwrap();
        let short = spec
            .clone()
            .with_time_grid(crate::series::uniform_grid(1e-3, 16))
            .unwrap();
        assert!(matches!(
            survival_minimum(&short),
            Err(LmgError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn norm_is_preserved_under_reconstruction() {
        // rebuild |psi(t)> from the full eigendecomposition at a few times
        let spec = LmgSpec::new(1.3, 16).unwrap();
        let h = build_hamiltonian(&spec, true).unwrap();
        let decomp = crate::numerics::eigh(&h).unwrap();
        let g = ground_info(spec.lambda(), spec.n_spins()).unwrap();
        let idx = state_index(spec.n_spins(), g.twice_m_ground, true).unwrap();
        let dim = h.rows();
        for &t in &[0.0, 0.37, 1.9] {
            let mut state = alloc::vec![Complex64::ZERO; dim];
            for j in 0..dim {
                let amp = decomp.eigenvectors[(idx, j)].conj();
                let phase = Complex64::cis(-decomp.eigenvalues[j] * t);
                for i in 0..dim {
                    state[i] += decomp.eigenvectors[(i, j)] * amp * phase;
                }
            }
            let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(libm::sqrt(norm), 1.0, epsilon = 1e-10);
        }
    }
}
