//! Time series of the dynamical overlap χ(t) and the survival probability
//! F(t) = |χ(t)|².

use alloc::vec::Vec;
use num_complex::Complex64;
use thiserror::Error;

use crate::tolerances::Tolerances;

/// Validation failures when assembling a [`SurvivalSeries`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    /// Time grid must be strictly ascending and start at zero.
    #[error("time grid must be strictly ascending and start at 0 (offence at index {index})")]
    BadTimeGrid {
        /// First offending index.
        index: usize,
    },
    /// Lengths of times and overlaps differ.
    #[error("length mismatch: {times} times vs {values} overlap values")]
    LengthMismatch {
        /// Number of grid times.
        times: usize,
        /// Number of overlap values.
        values: usize,
    },
    /// χ(0) must be 1 within tolerance.
    #[error("survival probability at t=0 is {f0} (must be 1 within {tolerance:.1e})")]
    BadStart {
        /// Measured F(0).
        f0: f64,
        /// Applied tolerance.
        tolerance: f64,
    },
    /// |χ| exceeded 1 beyond the admitted slack.
    #[error("overlap modulus {value} at index {index} exceeds 1 beyond tolerance")]
    OverlapAboveOne {
        /// Offending |χ|.
        value: f64,
        /// Grid index.
        index: usize,
    },
    /// Non-finite overlap value.
    #[error("non-finite overlap at index {index}")]
    NonFinite {
        /// Grid index.
        index: usize,
    },
}

/// Dynamical overlap χ(t) on a time grid, with the survival probability
/// F(t) = |χ(t)|² precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalSeries {
    times: Vec<f64>,
    chi: Vec<Complex64>,
    fidelity: Vec<f64>,
}

impl SurvivalSeries {
    /// Validate and assemble a series with default tolerances.
    pub fn new(times: Vec<f64>, chi: Vec<Complex64>) -> Result<Self, SeriesError> {
        Self::with_tolerances(times, chi, &Tolerances::default())
    }

    /// Validate and assemble a series.
    ///
    /// Checks: grid strictly ascending from 0, finite overlaps,
    /// |χ| ≤ 1 + `overlap_slack`, and F(0) = 1 within `fidelity_start`.
    pub fn with_tolerances(
        times: Vec<f64>,
        chi: Vec<Complex64>,
        tol: &Tolerances,
    ) -> Result<Self, SeriesError> {
        if times.len() != chi.len() {
            return Err(SeriesError::LengthMismatch { times: times.len(), values: chi.len() });
        }
        if times.is_empty() || times[0] != 0.0 {
            return Err(SeriesError::BadTimeGrid { index: 0 });
        }
        for i in 1..times.len() {
            if !(times[i] > times[i - 1]) {
                return Err(SeriesError::BadTimeGrid { index: i });
            }
        }
        let mut fidelity = Vec::with_capacity(chi.len());
        for (i, z) in chi.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(SeriesError::NonFinite { index: i });
            }
            let n = z.norm();
            if n > 1.0 + tol.overlap_slack {
                return Err(SeriesError::OverlapAboveOne { value: n, index: i });
            }
            fidelity.push(n * n);
        }
        if (fidelity[0] - 1.0).abs() > tol.fidelity_start {
            return Err(SeriesError::BadStart { f0: fidelity[0], tolerance: tol.fidelity_start });
        }
        Ok(Self { times, chi, fidelity })
    }

    /// Grid times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Dynamical overlap per grid time.
    pub fn chi(&self) -> &[Complex64] {
        &self.chi
    }

    /// Survival probability per grid time.
    pub fn fidelity(&self) -> &[f64] {
        &self.fidelity
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// True when the series is empty (never the case for a validated one).
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the global minimum of F over the grid.
    pub fn argmin_fidelity(&self) -> usize {
        let mut best = 0;
        for i in 1..self.fidelity.len() {
            if self.fidelity[i] < self.fidelity[best] {
                best = i;
            }
        }
        best
    }

    /// Grid spacing when uniform within `rel_tol`, else `None`.
    pub fn uniform_step(&self, rel_tol: f64) -> Option<f64> {
        if self.times.len() < 2 {
            return None;
        }
        let dt = self.times[1] - self.times[0];
        for i in 1..self.times.len() - 1 {
            let step = self.times[i + 1] - self.times[i];
            if (step - dt).abs() > rel_tol * dt {
                return None;
            }
        }
        Some(dt)
    }
}

/// Uniform grid of `points` times over [0, extent].
pub fn uniform_grid(extent: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "a grid needs at least two points");
    assert!(extent > 0.0, "grid extent must be positive");
    let step = extent / (points - 1) as f64;
    (0..points).map(|i| i as f64 * step).collect()
}

/// Result of [`refine_first_minimum`].
pub(crate) struct RefinedMinimum {
    pub grid_index: usize,
    pub t: f64,
    pub value: f64,
}

/// Locate the earliest global minimum of a sampled function and refine it
/// against the exact function.
///
/// Recurrent dynamics repeats its minimum exactly; grid discretization can
/// make a later recurrence sample lower than the first, so every local
/// minimum within a coarse allowance of the grid minimum is refined by
/// golden section and the earliest refined minimum wins.
pub(crate) fn refine_first_minimum(
    times: &[f64],
    samples: &[f64],
    exact: impl Fn(f64) -> f64,
) -> RefinedMinimum {
    debug_assert_eq!(times.len(), samples.len());
    debug_assert!(!times.is_empty());
    let n = samples.len();
    let grid_min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let grid_max = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let allowance = 1e-3 * (grid_max - grid_min) + 1e-12;

    let golden = |a0: f64, b0: f64| -> (f64, f64) {
        let phi = 0.5 * (libm::sqrt(5.0) - 1.0);
        let (mut a, mut b) = (a0, b0);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let mut fc = exact(c);
        let mut fd = exact(d);
        for _ in 0..80 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = exact(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = exact(d);
            }
        }
        let t = 0.5 * (a + b);
        (t, exact(t))
    };

    let mut candidates: Vec<(usize, f64, f64)> = Vec::new();
    for i in 0..n {
        if samples[i] > grid_min + allowance {
            continue;
        }
        let left_ok = i == 0 || samples[i] <= samples[i - 1];
        let right_ok = i + 1 == n || samples[i] <= samples[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let lo = if i == 0 { times[0] } else { times[i - 1] };
        let hi = if i + 1 == n { times[i] } else { times[i + 1] };
        let (t, v) = if lo < hi { golden(lo, hi) } else { (times[i], samples[i]) };
        if v <= samples[i] {
            candidates.push((i, t, v));
        } else {
            candidates.push((i, times[i], samples[i]));
        }
    }
    debug_assert!(!candidates.is_empty());
    let refined_min =
        candidates.iter().map(|&(_, _, v)| v).fold(f64::INFINITY, f64::min);
    let slack = 1e-9 * (1.0 + refined_min.abs());
    let &(grid_index, t, value) = candidates
        .iter()
        .find(|&&(_, _, v)| v <= refined_min + slack)
        .expect("at least one candidate exists");
    RefinedMinimum { grid_index, t, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn accepts_valid_series() {
        let times = uniform_grid(1.0, 5);
        let chi: Vec<Complex64> =
            times.iter().map(|t| Complex64::new(libm::cos(*t), -libm::sin(*t))).collect();
        let s = SurvivalSeries::new(times, chi).unwrap();
        assert_eq!(s.len(), 5);
        assert!((s.fidelity()[3] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_start() {
        let times = uniform_grid(1.0, 3);
        let chi = vec![Complex64::new(0.9, 0.0); 3];
        assert!(matches!(
            SurvivalSeries::new(times, chi),
            Err(SeriesError::BadStart { .. })
        ));
    }

    #[test]
    fn rejects_overlap_above_one() {
        let times = uniform_grid(1.0, 3);
        let chi = vec![
            Complex64::ONE,
            Complex64::new(1.0 + 1e-6, 0.0),
            Complex64::ONE,
        ];
        assert!(matches!(
            SurvivalSeries::new(times, chi),
            Err(SeriesError::OverlapAboveOne { index: 1, .. })
        ));
    }

    #[test]
    fn rejects_non_ascending_grid() {
        let chi = vec![Complex64::ONE; 3];
        assert!(matches!(
            SurvivalSeries::new(vec![0.0, 0.5, 0.5], chi.clone()),
            Err(SeriesError::BadTimeGrid { index: 2 })
        ));
        assert!(matches!(
            SurvivalSeries::new(vec![0.1, 0.5, 0.9], chi),
            Err(SeriesError::BadTimeGrid { index: 0 })
        ));
    }

    #[test]
    fn uniform_step_detection() {
        let times = uniform_grid(2.0, 9);
        let chi = vec![Complex64::ONE; 9];
        let s = SurvivalSeries::new(times, chi).unwrap();
        let dt = s.uniform_step(1e-9).unwrap();
        assert!((dt - 0.25).abs() < 1e-15);
    }
}
