//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.
//!
//! The iteration is written against a rotation sink so the same kernel
//! serves three callers: full eigenvector accumulation (dense eigh),
//! a single accumulated row (spectral weights of one state, Gauss-Hermite
//! weights), and no accumulation at all (eigenvalues only).

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::NumericsError;

/// Receives the Givens rotations applied by the QL sweep, acting on columns
/// `i` and `i+1` of the implicit accumulated matrix, and the final ascending
/// permutation.
pub(crate) trait RotationSink {
    fn rotate(&mut self, i: usize, c: f64, s: f64);
    fn permute(&mut self, perm: &[usize]);
}

/// Eigenvalues only.
pub(crate) struct NoAccumulator;

impl RotationSink for NoAccumulator {
    fn rotate(&mut self, _i: usize, _c: f64, _s: f64) {}
    fn permute(&mut self, _perm: &[usize]) {}
}

/// Full n x n real accumulated matrix, column-major so each rotation touches
/// two contiguous columns.
pub(crate) struct ColumnAccumulator {
    pub data: Vec<f64>,
    pub n: usize,
}

impl ColumnAccumulator {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { data, n }
    }

    /// Column `j` as a slice.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }
}

impl RotationSink for ColumnAccumulator {
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        let n = self.n;
        let (head, tail) = self.data[i * n..].split_at_mut(n);
        for (x, y) in head.iter_mut().zip(&mut tail[..n]) {
            let h = *y;
            *y = s * *x + c * h;
            *x = c * *x - s * h;
        }
    }

    fn permute(&mut self, perm: &[usize]) {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for (new, &old) in perm.iter().enumerate() {
            out[new * n..(new + 1) * n].copy_from_slice(&self.data[old * n..(old + 1) * n]);
        }
        self.data = out;
    }
}

/// A single accumulated complex row; entry `j` ends up as `wᵀ v_j` for the
/// seed row `w`.
pub(crate) struct RowAccumulator {
    pub entries: Vec<Complex64>,
}

impl RotationSink for RowAccumulator {
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        let x = self.entries[i];
        let y = self.entries[i + 1];
        self.entries[i + 1] = s * x + c * y;
        self.entries[i] = c * x - s * y;
    }

    fn permute(&mut self, perm: &[usize]) {
        let out: Vec<Complex64> = perm.iter().map(|&old| self.entries[old]).collect();
        self.entries = out;
    }
}

/// Diagonalize the symmetric tridiagonal matrix (diag `d`, subdiagonal `e`)
/// in place. On success `d` holds the eigenvalues sorted ascending and the
/// sink has received every rotation plus the sorting permutation.
///
/// `e` must have the same length as `d`; entry `e[i]` couples rows `i` and
/// `i+1` and `e[n-1]` is workspace.
pub(crate) fn ql_implicit(
    d: &mut [f64],
    e: &mut [f64],
    sink: &mut impl RotationSink,
) -> Result<(), NumericsError> {
    let n = d.len();
    assert_eq!(e.len(), n, "subdiagonal workspace must match the diagonal length");
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            // look for a negligible subdiagonal element
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(NumericsError::NoConvergence { index: l });
            }
            // implicit shift from the 2x2 at l
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                sink.rotate(i, c, s);
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // ascending order, stable
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("eigenvalues must be finite"));
    let sorted: Vec<f64> = perm.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    sink.permute(&perm);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_by_two_pauli_x() {
        // [[0,1],[1,0]] -> eigenvalues -1, +1
        let mut d = vec![0.0, 0.0];
        let mut e = vec![1.0, 0.0];
        let mut acc = ColumnAccumulator::identity(2);
        ql_implicit(&mut d, &mut e, &mut acc).unwrap();
        assert_abs_diff_eq!(d[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d[1], 1.0, epsilon = 1e-14);
        // eigenvector columns normalized
        for j in 0..2 {
            let col = acc.column(j);
            assert_abs_diff_eq!(col[0] * col[0] + col[1] * col[1], 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn diagonal_input_sorted_with_permutation() {
        let mut d = vec![3.0, 1.0, 2.0];
        let mut e = vec![0.0; 3];
        let mut acc = ColumnAccumulator::identity(3);
        ql_implicit(&mut d, &mut e, &mut acc).unwrap();
        assert_eq!(d, vec![1.0, 2.0, 3.0]);
        // column 0 now points along basis vector 1
        assert_abs_diff_eq!(acc.column(0)[1], 1.0, epsilon = 0.0);
    }

    #[test]
    fn reconstructs_tridiagonal() {
        // fixed tridiagonal, check T v = lambda v through the accumulator
        let dd = [0.7, -0.3, 1.9, 0.2, -1.1];
        let ee = [0.5, -0.8, 0.33, 1.2];
        let n = dd.len();
        let mut d = dd.to_vec();
        let mut e = ee.to_vec();
        e.push(0.0);
        let mut acc = ColumnAccumulator::identity(n);
        ql_implicit(&mut d, &mut e, &mut acc).unwrap();
        for j in 0..n {
            let v = acc.column(j);
            for i in 0..n {
                let mut tv = dd[i] * v[i];
                if i > 0 {
                    tv += ee[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    tv += ee[i] * v[i + 1];
                }
                assert_abs_diff_eq!(tv, d[j] * v[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn row_accumulator_matches_full_matrix() {
        let dd = [1.4, 0.1, -0.6, 2.2];
        let ee = [0.9, 0.4, -1.3];
        let n = dd.len();

        let mut d1 = dd.to_vec();
        let mut e1 = ee.to_vec();
        e1.push(0.0);
        let mut full = ColumnAccumulator::identity(n);
        ql_implicit(&mut d1, &mut e1, &mut full).unwrap();

        let w = [0.3, -0.9, 0.4, 0.1];
        let mut d2 = dd.to_vec();
        let mut e2 = ee.to_vec();
        e2.push(0.0);
        let mut row = RowAccumulator {
            entries: w.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        };
        ql_implicit(&mut d2, &mut e2, &mut row).unwrap();

        for j in 0..n {
            let dot: f64 = full.column(j).iter().zip(&w).map(|(v, x)| v * x).sum();
            assert_abs_diff_eq!(row.entries[j].re, dot, epsilon = 1e-13);
            assert_abs_diff_eq!(row.entries[j].im, 0.0, epsilon = 0.0);
        }
    }
}
