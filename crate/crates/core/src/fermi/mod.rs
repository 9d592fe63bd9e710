//! Trapped free-fermion quenches: a sudden change of the trap frequency and
//! a suddenly switched-on delta impurity at the trap center.
//!
//! The many-body state is a Slater determinant of single-particle orbitals,
//! so every overlap reduces to a determinant of single-particle overlap
//! matrices. The internal unit system fixes ħ = m = ω₁ = 1; unperturbed
//! orbital energies are k + 1/2.

mod analytic;
mod anderson;
mod basis;
mod hermite;
mod quadrature;
mod survival;
mod variance;

pub use analytic::{
    analytic_time_argument, delta_h_closed_form, fidelity_dynamic_analytic,
    fidelity_static_analytic, t_min, ClosedFormDeltaH, Fidelity, TrapMinimumTime,
};
pub use anderson::{anderson_alpha, anderson_alpha_with_cutoff, static_overlap_ln};
pub use basis::{
    delta_impurity_basis, delta_impurity_basis_checked, trap_overlap_coeffs,
    trap_overlap_coeffs_with, SingleParticleBasis,
};
pub use hermite::{hermite_function, hermite_zero};
pub use quadrature::GaussHermite;
pub use survival::{
    first_threshold_time, impurity_survival, overlap_matrix, survival_series_det, trap_survival,
};
pub use variance::{many_body_variance, work_moments, WorkMoments};

use alloc::vec::Vec;
use thiserror::Error;

use crate::numerics::NumericsError;
use crate::series::{uniform_grid, SeriesError};

/// Energy of unperturbed orbital `k` (unit-frequency trap, ħ = 1).
pub fn unperturbed_energy(k: usize) -> f64 {
    k as f64 + 0.5
}

/// Ground-state energy of `n` fermions in the unperturbed trap, Σ_{k<n} (k + 1/2) = n²/2.
pub fn initial_ground_energy(n: usize) -> f64 {
    (n * n) as f64 / 2.0
}

/// Errors from the fermionic models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FermiError {
    /// Invalid model parameter.
    #[error("invalid parameter: {reason}")]
    InvalidParameter {
        /// What was wrong.
        reason: &'static str,
    },
    /// Basis completeness defect above tolerance for a retained column.
    #[error("basis truncation: column {index} has completeness defect {defect:.3e}")]
    Truncation {
        /// Offending column (perturbed orbital index).
        index: usize,
        /// Measured defect |1 - Σ_k |c_km|²|.
        defect: f64,
    },
    /// Occupied-row completeness defect above tolerance.
    #[error("basis truncation: occupied row {index} has completeness defect {defect:.3e}")]
    RowTruncation {
        /// Offending row (unperturbed orbital index).
        index: usize,
        /// Measured defect |1 - Σ_m |c_km|²|.
        defect: f64,
    },
    /// The Hermite recurrence would silently lose the answer.
    #[error("hermite_function({n}, {x}) is beyond the stability bound of the recurrence")]
    UnstableHermite {
        /// Requested order.
        n: usize,
        /// Requested argument.
        x: f64,
    },
    /// Requested survival threshold lies below the dynamical floor of the
    /// analytic fidelity.
    #[error("threshold below dynamical floor: min_t F = {floor:.6e} (ln = {ln_floor:.6})")]
    BelowDynamicalFloor {
        /// Minimum reachable fidelity (linear value, clamped at underflow).
        floor: f64,
        /// ln of the minimum reachable fidelity.
        ln_floor: f64,
    },
    /// Lowest retained eigenvalues still drift under cutoff doubling.
    #[error("cutoff not converged: eigenvalue drift {drift:.3e} exceeds {tolerance:.3e}")]
    CutoffDrift {
        /// Measured drift of the lowest retained levels.
        drift: f64,
        /// Applied tolerance.
        tolerance: f64,
    },
    /// Propagated dense-kernel error.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    /// Propagated series-validation error.
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn validate_time_grid(grid: &[f64]) -> Result<(), FermiError> {
    if grid.is_empty() || grid[0] != 0.0 {
        return Err(FermiError::InvalidParameter {
            reason: "time grid must start at 0",
        });
    }
    for i in 1..grid.len() {
        if !(grid[i] > grid[i - 1]) {
            return Err(FermiError::InvalidParameter {
                reason: "time grid must be strictly ascending",
            });
        }
    }
    Ok(())
}

/// Sudden quench of the trap frequency ω₁ = 1 → ω₂ = η.
#[derive(Debug, Clone, PartialEq)]
pub struct TrapQuench {
    eta: f64,
    n_particles: usize,
    basis_cutoff: usize,
    time_grid: Vec<f64>,
}

impl TrapQuench {
    /// New trap quench with the default basis cutoff and a default grid of
    /// 1024 points over one recurrence period π/η of the survival
    /// probability.
    pub fn new(eta: f64, n_particles: usize) -> Result<Self, FermiError> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(FermiError::InvalidParameter { reason: "eta must be positive and finite" });
        }
        if n_particles == 0 {
            return Err(FermiError::InvalidParameter { reason: "need at least one particle" });
        }
        Ok(Self {
            eta,
            n_particles,
            basis_cutoff: Self::default_basis_cutoff(eta, n_particles),
            time_grid: uniform_grid(core::f64::consts::PI / eta, 1024),
        })
    }

    /// Default perturbed-basis cutoff.
    ///
    /// The overlap ⟨ψ_k|φ_m⟩ has appreciable weight out to m ≈ ηk (the two
    /// oscillators must match in momentum extent) plus a turning-point
    /// spread of order √(ηk), so the cutoff scales with η as well as with
    /// the particle number.
    pub fn default_basis_cutoff(eta: f64, n_particles: usize) -> usize {
        let en = eta * n_particles as f64;
        let support = libm::ceil(en) as usize + 32 + libm::ceil(9.0 * libm::sqrt(en)) as usize;
        (2 * n_particles).max(32).max(support)
    }

    /// Override the basis cutoff.
    pub fn with_basis_cutoff(mut self, basis_cutoff: usize) -> Result<Self, FermiError> {
        if basis_cutoff < self.n_particles {
            return Err(FermiError::InvalidParameter { reason: "cutoff below particle number" });
        }
        self.basis_cutoff = basis_cutoff;
        Ok(self)
    }

    /// Override the time grid (strictly ascending, starting at 0).
    pub fn with_time_grid(mut self, grid: Vec<f64>) -> Result<Self, FermiError> {
        validate_time_grid(&grid)?;
        self.time_grid = grid;
        Ok(self)
    }

    /// Frequency ratio η = ω₂/ω₁.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Particle number.
    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// Perturbed-basis cutoff.
    pub fn basis_cutoff(&self) -> usize {
        self.basis_cutoff
    }

    /// Time grid (internal units, ω₁ = 1).
    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }
}

/// Sudden switch-on of a delta barrier of height Nκ at the trap center.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpurityQuench {
    kappa: f64,
    n_particles: usize,
    basis_cutoff: usize,
    time_grid: Vec<f64>,
}

impl ImpurityQuench {
    /// New impurity quench with default cutoff max(4N, 64) and a default
    /// grid of 1024 points over one unperturbed recurrence 2π.
    pub fn new(kappa: f64, n_particles: usize) -> Result<Self, FermiError> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(FermiError::InvalidParameter {
                reason: "kappa must be non-negative and finite",
            });
        }
        if n_particles == 0 {
            return Err(FermiError::InvalidParameter { reason: "need at least one particle" });
        }
        Ok(Self {
            kappa,
            n_particles,
            basis_cutoff: Self::default_basis_cutoff(n_particles),
            time_grid: uniform_grid(2.0 * core::f64::consts::PI, 1024),
        })
    }

    /// Default basis cutoff max(4N, 64).
    pub fn default_basis_cutoff(n_particles: usize) -> usize {
        (4 * n_particles).max(64)
    }

    /// Override the basis cutoff (must stay at or above the particle
    /// number; see [`ImpurityQuench::below_recommended_cutoff`]).
    pub fn with_basis_cutoff(mut self, basis_cutoff: usize) -> Result<Self, FermiError> {
        if basis_cutoff < self.n_particles {
            return Err(FermiError::InvalidParameter { reason: "cutoff below particle number" });
        }
        self.basis_cutoff = basis_cutoff;
        Ok(self)
    }

    /// Override the time grid (strictly ascending, starting at 0).
    pub fn with_time_grid(mut self, grid: Vec<f64>) -> Result<Self, FermiError> {
        validate_time_grid(&grid)?;
        self.time_grid = grid;
        Ok(self)
    }

    /// True when the cutoff sits below the recommended floor 4N; callers
    /// that care should surface this to the user.
    pub fn below_recommended_cutoff(&self) -> bool {
        self.basis_cutoff < 4 * self.n_particles
    }

    /// Per-particle barrier strength κ; the barrier height is Nκ.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Barrier height Nκ.
    pub fn barrier_height(&self) -> f64 {
        self.n_particles as f64 * self.kappa
    }

    /// Particle number.
    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// Basis cutoff.
    pub fn basis_cutoff(&self) -> usize {
        self.basis_cutoff
    }

    /// Time grid (internal units).
    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trap_quench_validation() {
        assert!(TrapQuench::new(0.0, 5).is_err());
        assert!(TrapQuench::new(1.5, 0).is_err());
        let q = TrapQuench::new(1.5, 10).unwrap();
        assert!(q.basis_cutoff() >= 2 * q.n_particles());
        assert!(q.clone().with_basis_cutoff(5).is_err());
        assert!(q.with_time_grid(alloc::vec![0.0, 0.5, 0.4]).is_err());
    }

    #[test]
    fn impurity_quench_validation() {
        assert!(ImpurityQuench::new(-0.1, 5).is_err());
        let q = ImpurityQuench::new(0.5, 10).unwrap();
        assert_eq!(q.basis_cutoff(), 64);
        assert_eq!(q.barrier_height(), 5.0);
        assert!(!q.below_recommended_cutoff());
        let q = q.with_basis_cutoff(12).unwrap();
        assert!(q.below_recommended_cutoff());
    }

    #[test]
    fn cutoff_scales_with_eta() {
        // covers the momentum support eta*N plus the turning-point spread
        assert!(TrapQuench::default_basis_cutoff(1.5, 100) >= 200);
        assert!(TrapQuench::default_basis_cutoff(4.0, 100) >= 448);
        assert!(TrapQuench::default_basis_cutoff(1.1, 2) >= 32);
    }
}
