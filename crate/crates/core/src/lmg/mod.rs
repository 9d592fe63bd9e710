//! Spin impurity coupled to an isotropic Lipkin-Meshkov-Glick bath.
//!
//! The bath lives in the maximal-spin multiplet S = N/2 (the interaction
//! conserves the bath total spin, and the ground state sits in that
//! sector), so the joint Hilbert space has dimension 2(N+1): bath magnetic
//! number m = -S..S times the two impurity levels.
//!
//! Sign convention: the printed collective form of the Hamiltonian with
//! textbook ladder conventions would put the weak-coupling bath ground
//! state at m = +S. The z-field sign of the bath term is flipped here so
//! that the aligned-phase ground state is the m = -S level and the
//! brute-force variance reproduces the closed form with the crossing count
//! counted upward from the aligned level; both facts are asserted by tests.

mod dynamics;
mod model;
mod variance;

pub use dynamics::{quench_survival, quench_weights, survival_minimum, FminScan, LmgQuenchWeights};
pub use model::{
    build_hamiltonian, ground_info, magnetization_block_defect, spectrum_sweep, state_index,
    state_quantum_numbers, CollectiveState, CrossingPoint, LmgGroundInfo, LmgSpec, SpectrumRow,
    SpectrumSweep,
};
pub use variance::{variance_brute_force, variance_closed_form};

use thiserror::Error;

use crate::numerics::NumericsError;
use crate::series::SeriesError;

/// Errors from the LMG model family.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LmgError {
    /// Invalid model parameter.
    #[error("invalid parameter: {reason}")]
    InvalidParameter {
        /// What was wrong.
        reason: &'static str,
    },
    /// Spin count exceeds the dimension guard.
    #[error("spin count {n} exceeds the dimension guard of 20000")]
    DimensionOverflow {
        /// Requested spin count.
        n: usize,
    },
    /// Propagated dense-kernel error.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    /// Propagated series-validation error.
    #[error(transparent)]
    Series(#[from] SeriesError),
}
