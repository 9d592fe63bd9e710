//! Single source of truth for every numerical tolerance used by the library.
//!
//! Operations that validate their inputs or outputs take the tolerances from
//! here; tests and the verification suite read the same record so that a
//! change in one place is a change everywhere.

/// Numerical tolerances with library-wide defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entrywise |M - M†| admitted before a matrix is rejected as
    /// non-Hermitian.
    pub hermiticity: f64,
    /// Max deviation from orthonormality of eigenvector columns.
    pub orthonormality: f64,
    /// Eigenpair residual ‖H v - E v‖₂ relative to ‖H‖_F.
    pub eigen_residual: f64,
    /// |trace(H) - Σ eigenvalues| relative to ‖H‖_F.
    pub trace_identity: f64,
    /// Basis completeness defect |1 - Σ|c|²| per retained row/column.
    pub completeness: f64,
    /// |F(0) - 1| admitted for a survival series.
    pub fidelity_start: f64,
    /// Survival probabilities may exceed 1 by at most this.
    pub fidelity_ceiling: f64,
    /// |χ| may exceed 1 by at most this before the series is rejected.
    pub overlap_slack: f64,
    /// |χ| above 1 + this is an invalid-overlap error in the QSL module;
    /// values between 1 and 1 + this are clamped to 1.
    pub overlap_clamp: f64,
    /// Eigenvalue drift of the lowest retained levels under cutoff doubling
    /// for the delta-impurity basis. See `fermi::delta_impurity_basis_checked`
    /// for why the practical default is much looser than machine precision.
    pub cutoff_drift: f64,
    /// |det U| - 1 for unitary matrices.
    pub unitary_det: f64,
    /// Conserved-quantity commutator defect (structural block check).
    pub conservation: f64,
    /// |Σ p_j - 1| for spectral weights.
    pub weight_sum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            orthonormality: 1e-10,
            eigen_residual: 1e-9,
            trace_identity: 1e-10,
            completeness: 1e-8,
            fidelity_start: 1e-12,
            fidelity_ceiling: 1e-12,
            overlap_slack: 1e-10,
            overlap_clamp: 1e-6,
            cutoff_drift: 5e-2,
            unitary_det: 1e-10,
            conservation: 1e-12,
            weight_sum: 1e-10,
        }
    }
}
