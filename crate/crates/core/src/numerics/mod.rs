//! Dense complex-matrix kernels: pivoted LU determinants, Hermitian
//! eigendecomposition, spectral weights of a state, and least-squares line
//! fits.
//!
//! Everything is hand-rolled on flat row-major storage so that results are
//! bit-deterministic for identical input on one platform. Partial pivoting
//! on maximum modulus is used throughout; overlap matrices can be nearly
//! singular at orthogonality times.

mod det;
mod eig;
mod fit;
mod matrix;
pub(crate) mod tridiag;

pub use det::{determinant, log_abs_determinant};
pub use eig::{eigenvalues, eigh, eigh_with, spectral_weights, spectral_weights_with, EigenDecomposition, SpectralWeights};
pub use fit::{linear_fit, LinearFit};
pub use matrix::ComplexMatrix;

use thiserror::Error;

/// Errors from the dense kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    /// Operation requires a square matrix.
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare {
        /// Row count of the offending matrix.
        rows: usize,
        /// Column count of the offending matrix.
        cols: usize,
    },
    /// A NaN or infinity was found in the input.
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    /// Zero-dimensional input where a spectrum is required.
    #[error("matrix has dimension zero")]
    EmptyMatrix,
    /// Hermiticity defect above tolerance.
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian {
        /// Measured max entrywise |M - M†|.
        defect: f64,
        /// Tolerance that was applied.
        tolerance: f64,
    },
    /// The QL iteration failed to converge.
    #[error("eigenvalue iteration failed to converge at index {index}")]
    NoConvergence {
        /// Tridiagonal row at which the iteration stalled.
        index: usize,
    },
    /// Vector length does not match the matrix dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Expected length.
        expected: usize,
        /// Actual length.
        got: usize,
    },
    /// Fit abscissae are degenerate (all equal) or too few.
    #[error("degenerate abscissae: need at least two distinct x values")]
    DegenerateAbscissae,
    /// Fit input lengths differ.
    #[error("input length mismatch: {xs} x-values vs {ys} y-values")]
    LengthMismatch {
        /// Number of x values.
        xs: usize,
        /// Number of y values.
        ys: usize,
    },
}
