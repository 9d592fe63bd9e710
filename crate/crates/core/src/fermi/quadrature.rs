//! Gauss-Hermite quadrature from the Jacobi matrix (Golub-Welsch).
//!
//! Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix;
//! the weight of node q is √π times the squared first component of its
//! eigenvector, which this module obtains from the shared QL kernel with a
//! single accumulated row. Weights are stored with the e^{y²} factor folded
//! in (in log space, so high orders do not underflow): the rule integrates
//! ∫ g(y) dy ≈ Σ_q ŵ_q g(y_q) for integrands g that decay like a Gaussian
//! times a polynomial.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::FermiError;
use crate::numerics::tridiag::{ql_implicit, RowAccumulator};

/// Gauss-Hermite rule of fixed order.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    total_weights: Vec<f64>,
}

impl GaussHermite {
    /// Build the rule with `order` nodes. Exact (up to roundoff) for
    /// integrands e^{-y²} p(y) with p a polynomial of degree < 2·order.
    pub fn new(order: usize) -> Result<Self, FermiError> {
        if order == 0 {
            return Err(FermiError::InvalidParameter { reason: "quadrature order must be >= 1" });
        }
        let mut d = vec![0.0; order];
        let mut e = vec![0.0; order];
        for i in 0..order.saturating_sub(1) {
            e[i] = libm::sqrt((i + 1) as f64 / 2.0);
        }
        let mut seed = vec![Complex64::ZERO; order];
        seed[0] = Complex64::ONE;
        let mut row = RowAccumulator { entries: seed };
        ql_implicit(&mut d, &mut e, &mut row)?;

        let ln_sqrt_pi = 0.5 * libm::log(core::f64::consts::PI);
        let total_weights = row
            .entries
            .iter()
            .zip(&d)
            .map(|(v0, y)| {
                let a = v0.re.abs();
                if a == 0.0 {
                    // the raw weight underflowed; the integrand at such an
                    // extreme node is below resolution anyway
                    0.0
                } else {
                    libm::exp(ln_sqrt_pi + 2.0 * libm::log(a) + y * y)
                }
            })
            .collect();
        Ok(Self { nodes: d, total_weights })
    }

    /// Nodes, ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights with the e^{y²} factor folded in.
    pub fn total_weights(&self) -> &[f64] {
        &self.total_weights
    }

    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Σ_q ŵ_q f(y_q); approximates ∫ f(y) dy when f decays like e^{-y²}
    /// times a polynomial.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.total_weights).map(|(&y, &w)| w * f(y)).sum()
    }
}
