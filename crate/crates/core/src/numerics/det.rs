use alloc::vec::Vec;
use num_complex::Complex64;

use super::{ComplexMatrix, NumericsError};

fn validate(m: &ComplexMatrix) -> Result<(), NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    Ok(())
}

/// LU factorization with partial pivoting on maximum modulus. Returns the
/// diagonal of U and the sign of the row permutation, or `None` when a pivot
/// is exactly zero (singular matrix).
fn lu_diagonal(m: &ComplexMatrix) -> Option<(Vec<Complex64>, f64)> {
    let n = m.rows();
    let mut a: Vec<Complex64> = m.as_slice().to_vec();
    let mut sign = 1.0f64;
    for k in 0..n {
        // pivot: largest modulus in column k at or below the diagonal
        let mut piv = k;
        let mut best = a[k * n + k].norm_sqr();
        for i in (k + 1)..n {
            let v = a[i * n + k].norm_sqr();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return None;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in (k + 1)..n {
            let factor = a[i * n + k] / pivot;
            a[i * n + k] = factor;
            for j in (k + 1)..n {
                let akj = a[k * n + j];
                a[i * n + j] -= factor * akj;
            }
        }
    }
    Some(((0..n).map(|k| a[k * n + k]).collect(), sign))
}

/// Determinant via pivoted triangular factorization.
///
/// Exact for 1x1 input; deterministic for fixed input. The 0x0 determinant
/// is the empty product, 1.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64, NumericsError> {
    validate(m)?;
    match lu_diagonal(m) {
        None => Ok(Complex64::ZERO),
        Some((diag, sign)) => {
            let mut det = Complex64::new(sign, 0.0);
            for d in diag {
                det *= d;
            }
            Ok(det)
        }
    }
}

/// ln |det M|, computed without underflow from the LU diagonal.
///
/// Returns negative infinity for an exactly singular matrix.
pub fn log_abs_determinant(m: &ComplexMatrix) -> Result<f64, NumericsError> {
    validate(m)?;
    match lu_diagonal(m) {
        None => Ok(f64::NEG_INFINITY),
        Some((diag, _)) => Ok(diag.iter().map(|d| libm::log(d.norm())).sum()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    /// Cofactor expansion along the first row; the independent oracle for
    /// sizes small enough to afford O(n!).
    fn det_cofactor(m: &ComplexMatrix) -> Complex64 {
        let n = m.rows();
        if n == 0 {
            return Complex64::ONE;
        }
        if n == 1 {
            return m[(0, 0)];
        }
        let mut acc = Complex64::ZERO;
        for j in 0..n {
            let minor = ComplexMatrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })]
            });
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * m[(0, j)] * det_cofactor(&minor);
        }
        acc
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn one_by_one_is_identity_case() {
        let m = ComplexMatrix::from_fn(1, 1, |_, _| c(3.0, -2.0));
        assert_eq!(determinant(&m).unwrap(), c(3.0, -2.0));
    }

    #[test]
    fn identity_of_size_five() {
        let d = determinant(&ComplexMatrix::identity(5)).unwrap();
        assert_abs_diff_eq!(d.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn matches_cofactor_oracle_up_to_4x4() {
        // fixed pseudo-random entries; no RNG needed for determinism
        let entries = [
            0.31, -0.74, 1.2, 0.5, -0.9, 0.22, 0.77, -1.4, 0.05, 0.63, -0.58, 1.01, 0.44, -0.12,
            0.9, -0.35,
        ];
        for n in 1..=4 {
            let m = ComplexMatrix::from_fn(n, n, |i, j| {
                let v = entries[(i * 4 + j) % entries.len()];
                c(v, 0.3 * v * v - 0.1)
            });
            let lu = determinant(&m).unwrap();
            let co = det_cofactor(&m);
            assert_abs_diff_eq!(lu.re, co.re, epsilon = 1e-12);
            assert_abs_diff_eq!(lu.im, co.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangular_product_structure() {
        // det(L*U) = product of U diagonal when L is unit lower triangular
        let n = 6;
        let l = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::ONE
            } else if i > j {
                c(0.1 * (i as f64) - 0.05 * (j as f64), 0.02 * (i + j) as f64)
            } else {
                Complex64::ZERO
            }
        });
        let udiag: Vec<Complex64> =
            (0..n).map(|k| c(1.0 + 0.3 * k as f64, -0.2 + 0.1 * k as f64)).collect();
        let u = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                udiag[i]
            } else if i < j {
                c(0.07 * (j - i) as f64, -0.03)
            } else {
                Complex64::ZERO
            }
        });
        let mut prod = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::ZERO;
                for k in 0..n {
                    s += l[(i, k)] * u[(k, j)];
                }
                prod[(i, j)] = s;
            }
        }
        let expect: Complex64 = udiag.iter().product();
        let got = determinant(&prod).unwrap();
        assert_abs_diff_eq!(got.re, expect.re, epsilon = 1e-10 * expect.norm());
        assert_abs_diff_eq!(got.im, expect.im, epsilon = 1e-10 * expect.norm());
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(determinant(&m), Err(NumericsError::NonSquare { .. })));
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(determinant(&m), Err(NumericsError::NonFinite)));
    }

    #[test]
    fn log_abs_det_handles_underflow_scale() {
        // 60x60 diagonal with entries 0.1: det underflows to ~1e-60, the log
        // value stays exact.
        let n = 60;
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(0.1, 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let ld = log_abs_determinant(&m).unwrap();
        assert_abs_diff_eq!(ld, n as f64 * libm::log(0.1), epsilon = 1e-10);
    }

    #[test]
    fn singular_matrix() {
        let m = ComplexMatrix::from_fn(3, 3, |i, _| c(i as f64, 0.0));
        assert_eq!(determinant(&m).unwrap(), Complex64::ZERO);
        assert_eq!(log_abs_determinant(&m).unwrap(), f64::NEG_INFINITY);
    }
}
