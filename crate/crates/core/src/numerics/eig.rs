//! Dense Hermitian eigendecomposition: Householder reduction to a real
//! symmetric tridiagonal matrix followed by implicit-shift QL.
//!
//! Real symmetric input (the common case for every model in this crate)
//! takes a real-arithmetic fast path; general Hermitian input is reduced
//! with complex reflectors and a diagonal phase transform.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::tridiag::{ql_implicit, ColumnAccumulator, NoAccumulator, RowAccumulator};
use super::{ComplexMatrix, NumericsError};
use crate::tolerances::Tolerances;

/// Full spectrum of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, matching the eigenvalue
    /// order.
    pub eigenvectors: ComplexMatrix,
}

/// Spectrum plus the overlaps of one state with every eigenvector.
#[derive(Debug, Clone)]
pub struct SpectralWeights {
    /// Eigenvalues sorted ascending.
    pub energies: Vec<f64>,
    /// `⟨v_j | state⟩` per eigenvector, in the same order.
    pub overlaps: Vec<Complex64>,
}

impl SpectralWeights {
    /// `|⟨v_j|state⟩|²` per eigenvector.
    pub fn probabilities(&self) -> Vec<f64> {
        self.overlaps.iter().map(|z| z.norm_sqr()).collect()
    }
}

fn validate_hermitian(
    m: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ComplexMatrix, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.rows() == 0 {
        return Err(NumericsError::EmptyMatrix);
    }
    if !m.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    let defect = m.hermiticity_defect();
    if defect > tol.hermiticity {
        return Err(NumericsError::NotHermitian { defect, tolerance: tol.hermiticity });
    }
    let mut h = m.clone();
    h.symmetrize_hermitian();
    Ok(h)
}

// ---------------------------------------------------------------------------
// real symmetric path
// ---------------------------------------------------------------------------

struct RealTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    /// Householder unit vectors; reflector `k` acts on indices `k+1..n`.
    reflectors: Vec<Vec<f64>>,
}

fn tridiagonalize_real(mut a: Vec<f64>, n: usize) -> RealTridiag {
    let mut offdiag = vec![0.0; n.saturating_sub(1)];
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut u: Vec<f64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let norm = libm::sqrt(u.iter().map(|x| x * x).sum());
        if norm == 0.0 {
            offdiag[k] = 0.0;
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = -norm.copysign(u[0]);
        u[0] -= alpha;
        let unorm = libm::sqrt(u.iter().map(|x| x * x).sum());
        for v in u.iter_mut() {
            *v /= unorm;
        }
        // p = B u over the trailing block
        let mut p = vec![0.0; m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            *pi = row.iter().zip(&u).map(|(x, y)| x * y).sum();
        }
        let beta: f64 = u.iter().zip(&p).map(|(x, y)| x * y).sum();
        let w: Vec<f64> = p.iter().zip(&u).map(|(pi, ui)| 2.0 * (pi - beta * ui)).collect();
        for i in 0..m {
            let ui = u[i];
            let wi = w[i];
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for ((b, &wj), &uj) in row.iter_mut().zip(&w).zip(&u) {
                *b -= ui * wj + wi * uj;
            }
        }
        offdiag[k] = alpha;
        reflectors.push(u);
    }
    if n >= 2 {
        offdiag[n - 2] = a[(n - 1) * n + n - 2];
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    RealTridiag { diag, offdiag, reflectors }
}

/// z <- Q z with Q the product of the stored reflectors (reverse order).
fn apply_q_real(reflectors: &[Vec<f64>], z: &mut [f64]) {
    let n = z.len();
    for (k, u) in reflectors.iter().enumerate().rev() {
        if u.is_empty() {
            continue;
        }
        let seg = &mut z[k + 1..n];
        let dot: f64 = 2.0 * u.iter().zip(seg.iter()).map(|(a, b)| a * b).sum::<f64>();
        for (zi, ui) in seg.iter_mut().zip(u) {
            *zi -= dot * ui;
        }
    }
}

/// z <- Qᵀ z (forward order), for complex z and real reflectors.
fn apply_qt_real_complex(reflectors: &[Vec<f64>], z: &mut [Complex64]) {
    let n = z.len();
    for (k, u) in reflectors.iter().enumerate() {
        if u.is_empty() {
            continue;
        }
        let seg = &mut z[k + 1..n];
        let dot: Complex64 =
            2.0 * u.iter().zip(seg.iter()).map(|(a, b)| a * b).sum::<Complex64>();
        for (zi, ui) in seg.iter_mut().zip(u) {
            *zi -= dot * ui;
        }
    }
}

// ---------------------------------------------------------------------------
// complex Hermitian path
// ---------------------------------------------------------------------------

struct ComplexTridiag {
    diag: Vec<f64>,
    /// |subdiagonal| after the phase transform.
    offdiag: Vec<f64>,
    /// Diagonal phase that makes the tridiagonal real: T_real = Φ† T Φ.
    phases: Vec<Complex64>,
    reflectors: Vec<Vec<Complex64>>,
}

fn unit_or_one(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n == 0.0 {
        Complex64::ONE
    } else {
        z / n
    }
}

fn tridiagonalize_complex(mut a: Vec<Complex64>, n: usize) -> ComplexTridiag {
    let mut sub = vec![Complex64::ZERO; n.saturating_sub(1)];
    let mut reflectors: Vec<Vec<Complex64>> = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut u: Vec<Complex64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let norm = libm::sqrt(u.iter().map(|x| x.norm_sqr()).sum());
        if norm == 0.0 {
            sub[k] = Complex64::ZERO;
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = -unit_or_one(u[0]) * norm;
        u[0] -= alpha;
        let unorm = libm::sqrt(u.iter().map(|x| x.norm_sqr()).sum());
        for v in u.iter_mut() {
            *v /= unorm;
        }
        let mut p = vec![Complex64::ZERO; m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            *pi = row.iter().zip(&u).map(|(x, y)| x * y).sum();
        }
        // u†(Bu) is real for Hermitian B
        let beta: f64 = u.iter().zip(&p).map(|(x, y)| (x.conj() * y).re).sum();
        let w: Vec<Complex64> = p.iter().zip(&u).map(|(pi, ui)| 2.0 * (pi - beta * ui)).collect();
        for i in 0..m {
            let ui = u[i];
            let wi = w[i];
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for ((b, &wj), &uj) in row.iter_mut().zip(&w).zip(&u) {
                *b -= ui * wj.conj() + wi * uj.conj();
            }
        }
        sub[k] = alpha;
        reflectors.push(u);
    }
    if n >= 2 {
        sub[n - 2] = a[(n - 1) * n + n - 2];
    }
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();

    let mut phases = vec![Complex64::ONE; n];
    let mut offdiag = vec![0.0; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(1) {
        offdiag[k] = sub[k].norm();
        phases[k + 1] = phases[k] * unit_or_one(sub[k]);
    }
    ComplexTridiag { diag, offdiag, phases, reflectors }
}

fn apply_q_complex(reflectors: &[Vec<Complex64>], z: &mut [Complex64]) {
    let n = z.len();
    for (k, u) in reflectors.iter().enumerate().rev() {
        if u.is_empty() {
            continue;
        }
        let seg = &mut z[k + 1..n];
        let dot: Complex64 =
            2.0 * u.iter().zip(seg.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>();
        for (zi, ui) in seg.iter_mut().zip(u) {
            *zi -= dot * ui;
        }
    }
}

fn apply_q_dagger_complex(reflectors: &[Vec<Complex64>], z: &mut [Complex64]) {
    let n = z.len();
    for (k, u) in reflectors.iter().enumerate() {
        if u.is_empty() {
            continue;
        }
        let seg = &mut z[k + 1..n];
        let dot: Complex64 =
            2.0 * u.iter().zip(seg.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>();
        for (zi, ui) in seg.iter_mut().zip(u) {
            *zi -= dot * ui;
        }
    }
}

// ---------------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------------

/// Hermitian eigendecomposition with default tolerances.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenDecomposition, NumericsError> {
    eigh_with(m, &Tolerances::default())
}

/// Hermitian eigendecomposition: full real spectrum plus orthonormal
/// eigenvectors, eigenvalues ascending.
///
/// The input must be Hermitian to `tol.hermiticity` (max entrywise
/// |M - M†|); it is symmetrized as (M + M†)/2 before reduction.
pub fn eigh_with(
    m: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<EigenDecomposition, NumericsError> {
    let h = validate_hermitian(m, tol)?;
    let n = h.rows();
    if h.is_real() {
        let a: Vec<f64> = h.as_slice().iter().map(|z| z.re).collect();
        let tri = tridiagonalize_real(a, n);
        let mut d = tri.diag.clone();
        let mut e = tri.offdiag.clone();
        e.push(0.0);
        let mut acc = ColumnAccumulator::identity(n);
        ql_implicit(&mut d, &mut e, &mut acc)?;
        let mut vectors = ComplexMatrix::zeros(n, n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.copy_from_slice(acc.column(j));
            apply_q_real(&tri.reflectors, &mut col);
            for i in 0..n {
                vectors[(i, j)] = Complex64::new(col[i], 0.0);
            }
        }
        Ok(EigenDecomposition { eigenvalues: d, eigenvectors: vectors })
    } else {
        let tri = tridiagonalize_complex(h.as_slice().to_vec(), n);
        let mut d = tri.diag.clone();
        let mut e = tri.offdiag.clone();
        e.push(0.0);
        let mut acc = ColumnAccumulator::identity(n);
        ql_implicit(&mut d, &mut e, &mut acc)?;
        let mut vectors = ComplexMatrix::zeros(n, n);
        let mut col = vec![Complex64::ZERO; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = tri.phases[i] * acc.column(j)[i];
            }
            apply_q_complex(&tri.reflectors, &mut col);
            for i in 0..n {
                vectors[(i, j)] = col[i];
            }
        }
        Ok(EigenDecomposition { eigenvalues: d, eigenvectors: vectors })
    }
}

/// Eigenvalues only, ascending; cheaper than [`eigh`] because no rotations
/// are accumulated.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, NumericsError> {
    let h = validate_hermitian(m, &Tolerances::default())?;
    let n = h.rows();
    let (mut d, mut e) = if h.is_real() {
        let a: Vec<f64> = h.as_slice().iter().map(|z| z.re).collect();
        let tri = tridiagonalize_real(a, n);
        (tri.diag, tri.offdiag)
    } else {
        let tri = tridiagonalize_complex(h.as_slice().to_vec(), n);
        (tri.diag, tri.offdiag)
    };
    e.push(0.0);
    ql_implicit(&mut d, &mut e, &mut NoAccumulator)?;
    Ok(d)
}

/// Spectral weights with default tolerances.
pub fn spectral_weights(
    h: &ComplexMatrix,
    state: &[Complex64],
) -> Result<SpectralWeights, NumericsError> {
    spectral_weights_with(h, state, &Tolerances::default())
}

/// Eigenvalues of a Hermitian matrix together with the overlap of every
/// eigenvector with one fixed state, without accumulating the full
/// eigenvector matrix.
///
/// This computes exactly the same spectrum as [`eigh_with`]; the QL
/// rotations are applied to a single accumulated row instead of the n x n
/// identity, so the cost is dominated by the tridiagonalization alone.
pub fn spectral_weights_with(
    h: &ComplexMatrix,
    state: &[Complex64],
    tol: &Tolerances,
) -> Result<SpectralWeights, NumericsError> {
    let h = validate_hermitian(h, tol)?;
    let n = h.rows();
    if state.len() != n {
        return Err(NumericsError::DimensionMismatch { expected: n, got: state.len() });
    }
    if h.is_real() {
        let a: Vec<f64> = h.as_slice().iter().map(|z| z.re).collect();
        let tri = tridiagonalize_real(a, n);
        // w = Qᵀ state; overlaps_j = Σ_i v_ij conj(w_i) = conj(wᵀ v_j)
        let mut w: Vec<Complex64> = state.to_vec();
        apply_qt_real_complex(&tri.reflectors, &mut w);
        let mut d = tri.diag.clone();
        let mut e = tri.offdiag.clone();
        e.push(0.0);
        let mut row = RowAccumulator { entries: w.iter().map(|z| z.conj()).collect() };
        ql_implicit(&mut d, &mut e, &mut row)?;
        Ok(SpectralWeights { energies: d, overlaps: row.entries })
    } else {
        let tri = tridiagonalize_complex(h.as_slice().to_vec(), n);
        // eigenvector v_j maps to QΦv_j; ⟨QΦv_j|state⟩ = Σ_i v_ij conj(φ_i)·(Q†state)_i...
        let mut w: Vec<Complex64> = state.to_vec();
        apply_q_dagger_complex(&tri.reflectors, &mut w);
        let seeded: Vec<Complex64> =
            w.iter().zip(&tri.phases).map(|(wi, ph)| ph * wi.conj()).collect();
        let mut d = tri.diag.clone();
        let mut e = tri.offdiag.clone();
        e.push(0.0);
        let mut row = RowAccumulator { entries: seeded };
        ql_implicit(&mut d, &mut e, &mut row)?;
        Ok(SpectralWeights { energies: d, overlaps: row.entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64, complex: bool) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = if complex {
                    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                } else {
                    c(rng.random_range(-1.0..1.0), 0.0)
                };
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    fn check_invariants(m: &ComplexMatrix, d: &EigenDecomposition) {
        let n = m.rows();
        let scale = m.frobenius_norm();
        // ascending
        for k in 1..n {
            assert!(d.eigenvalues[k] >= d.eigenvalues[k - 1]);
        }
        // orthonormal columns
        for a in 0..n {
            for b in a..n {
                let mut dot = Complex64::ZERO;
                for i in 0..n {
                    dot += d.eigenvectors[(i, a)].conj() * d.eigenvectors[(i, b)];
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot.re, expect, epsilon = 1e-10);
                assert_abs_diff_eq!(dot.im, 0.0, epsilon = 1e-10);
            }
        }
        // residual per pair
        for j in 0..n {
            let mut res = 0.0f64;
            for i in 0..n {
                let mut hv = Complex64::ZERO;
                for k in 0..n {
                    hv += m[(i, k)] * d.eigenvectors[(k, j)];
                }
                res += (hv - d.eigenvalues[j] * d.eigenvectors[(i, j)]).norm_sqr();
            }
            assert!(libm::sqrt(res) <= 1e-9 * scale.max(1.0), "residual too large: {res:e}");
        }
        // trace identity
        let tr = m.trace().re;
        let sum: f64 = d.eigenvalues.iter().sum();
        assert_abs_diff_eq!(tr, sum, epsilon = 1e-10 * scale.max(1.0));
    }

    #[test]
    fn diagonal_matrix_sorted() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c([3.0, 1.0, 2.0][i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let d = eigh(&m).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        });
        let d = eigh(&m).unwrap();
        assert_abs_diff_eq!(d.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.eigenvalues[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn random_real_symmetric_8x8() {
        let m = random_hermitian(8, 7, false);
        let d = eigh(&m).unwrap();
        check_invariants(&m, &d);
    }

    #[test]
    fn random_complex_hermitian_8x8() {
        let m = random_hermitian(8, 42, true);
        let d = eigh(&m).unwrap();
        check_invariants(&m, &d);
    }

    #[test]
    fn random_complex_hermitian_25x25() {
        let m = random_hermitian(25, 3, true);
        let d = eigh(&m).unwrap();
        check_invariants(&m, &d);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            eigh(&ComplexMatrix::zeros(0, 0)),
            Err(NumericsError::EmptyMatrix)
        ));
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(eigh(&m), Err(NumericsError::NotHermitian { .. })));
        assert!(matches!(
            eigh(&ComplexMatrix::zeros(2, 3)),
            Err(NumericsError::NonSquare { .. })
        ));
    }

    #[test]
    fn unitary_determinant_has_unit_modulus() {
        // eigenvector matrix of a random Hermitian is unitary
        let m = random_hermitian(9, 11, true);
        let d = eigh(&m).unwrap();
        let det = super::super::determinant(&d.eigenvectors).unwrap();
        assert_abs_diff_eq!(det.norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn spectral_weights_match_full_decomposition() {
        for (seed, complex) in [(5u64, false), (6, true)] {
            let n = 12;
            let m = random_hermitian(n, seed, complex);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
            let mut state: Vec<Complex64> =
                (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let norm = libm::sqrt(state.iter().map(|z| z.norm_sqr()).sum());
            for z in state.iter_mut() {
                *z /= norm;
            }
            let full = eigh(&m).unwrap();
            let sw = spectral_weights(&m, &state).unwrap();
            for j in 0..n {
                assert_abs_diff_eq!(sw.energies[j], full.eigenvalues[j], epsilon = 1e-11);
                let mut dot = Complex64::ZERO;
                for i in 0..n {
                    dot += full.eigenvectors[(i, j)].conj() * state[i];
                }
                // phases of individual eigenvectors are arbitrary; compare
                // moduli, then check total probability below
                assert_abs_diff_eq!(sw.overlaps[j].norm(), dot.norm(), epsilon = 1e-11);
            }
            let total: f64 = sw.probabilities().iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn trace_identity_random_sizes() {
        for n in [2usize, 5, 17, 33] {
            let m = random_hermitian(n, n as u64, n % 2 == 0);
            let d = eigh(&m).unwrap();
            let tr = m.trace().re;
            let sum: f64 = d.eigenvalues.iter().sum();
            assert_abs_diff_eq!(tr, sum, epsilon = 1e-10 * m.frobenius_norm().max(1.0));
        }
    }
}
