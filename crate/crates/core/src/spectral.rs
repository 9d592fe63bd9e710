//! Spectral function of the dynamical overlap via a discrete Fourier
//! transform.
//!
//! Unitary evolution out of an eigenstate gives χ(-t) = χ*(t), so the
//! series is extended Hermitian-symmetrically to negative times and the
//! transform is real by construction.
//!
//! Normalization (documented in output metadata by the CLI):
//!     S(ω_j) = 2·Re[ Δt · Σ_{k=-(n-1)}^{n-1} χ(t_k) e^{i ω_j t_k} ],
//!     ω_j = 2π j / ((2n-1)·Δt),  j = -(n-1) .. n-1.
//! With this convention the discrete Parseval identity reads
//!     Σ_k |χ(t_k)|² Δt = Σ_j (S_j/2)² Δω / 2π,  Δω = 2π/((2n-1)Δt).

use alloc::vec::Vec;
use num_complex::Complex64;
use thiserror::Error;

use crate::series::SurvivalSeries;

/// Window applied symmetrically to the extended series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// No window.
    None,
    /// Hann window, zero at the extended-series edges.
    Hann,
}

/// Errors from the spectral transform.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    /// The transform needs a uniform time grid.
    #[error("time grid is not uniform")]
    NonUniformGrid,
    /// At least two samples are required.
    #[error("series too short for a transform")]
    TooShort,
}

/// Real spectral function on a uniform angular-frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    /// Angular frequencies, ascending and uniform.
    pub omegas: Vec<f64>,
    /// S(ω) per frequency.
    pub values: Vec<f64>,
}

/// Transform a survival series into its spectral function.
pub fn spectral_function(
    series: &SurvivalSeries,
    window: Window,
) -> Result<SpectralFunction, SpectralError> {
    let n = series.len();
    if n < 2 {
        return Err(SpectralError::TooShort);
    }
    let dt = series.uniform_step(1e-9).ok_or(SpectralError::NonUniformGrid)?;
    let chi = series.chi();
    let half = n - 1;
    let m = 2 * n - 1;

    // windowed positive-time samples; the negative side is the conjugate
    let windowed: Vec<Complex64> = (0..n)
        .map(|k| {
            let w = match window {
                Window::None => 1.0,
                Window::Hann => {
                    0.5 * (1.0 + libm::cos(core::f64::consts::PI * k as f64 / half as f64))
                }
            };
            w * chi[k]
        })
        .collect();

    let mut omegas = Vec::with_capacity(m);
    let mut values = Vec::with_capacity(m);
    let base = 2.0 * core::f64::consts::PI / (m as f64 * dt);
    for j in -(half as i64)..=(half as i64) {
        let theta = base * dt * j as f64; // = 2π j / m
        // Σ_k x_k e^{iθk} with x_{-k} = conj(x_k):
        // = x_0 + 2 Re Σ_{k≥1} x_k e^{iθk}
        let step = Complex64::cis(theta);
        let mut phase = Complex64::ONE;
        let mut acc = 0.0;
        for k in 1..n {
            phase *= step;
            acc += (windowed[k] * phase).re;
        }
        let total = windowed[0].re + 2.0 * acc;
        omegas.push(base * j as f64);
        values.push(2.0 * dt * total);
    }
    Ok(SpectralFunction { omegas, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::uniform_grid;
    use approx::assert_abs_diff_eq;

    fn phase_series(omega0: f64, extent: f64, points: usize) -> SurvivalSeries {
        let times = uniform_grid(extent, points);
        let chi: Vec<Complex64> = times.iter().map(|&t| Complex64::cis(-omega0 * t)).collect();
        SurvivalSeries::new(times, chi).unwrap()
    }

    #[test]
    fn pure_phase_peaks_at_its_frequency() {
        let omega0 = 3.0;
        let s = phase_series(omega0, 60.0, 600);
        let spec = spectral_function(&s, Window::None).unwrap();
        let mut best = 0;
        for i in 0..spec.values.len() {
            if spec.values[i] > spec.values[best] {
                best = i;
            }
        }
        let domega = spec.omegas[1] - spec.omegas[0];
        assert!(
            (spec.omegas[best] - omega0).abs() <= domega,
            "peak at {} instead of {}",
            spec.omegas[best],
            omega0
        );
        // peak width is set by the grid extent: the main lobe dies off
        // within a few grid frequencies
        let peak = spec.values[best];
        assert!(spec.values[best
            .checked_sub(8)
            .unwrap()] < 0.2 * peak);
    }

    #[test]
    fn transform_is_real_and_frequency_grid_uniform() {
        let s = phase_series(1.0, 20.0, 128);
        let spec = spectral_function(&s, Window::Hann).unwrap();
        assert_eq!(spec.omegas.len(), spec.values.len());
        let d = spec.omegas[1] - spec.omegas[0];
        for i in 1..spec.omegas.len() {
            assert_abs_diff_eq!(spec.omegas[i] - spec.omegas[i - 1], d, epsilon = 1e-12);
        }
    }

    #[test]
    fn parseval_identity_without_window() {
        let s = phase_series(2.5, 15.0, 100);
        let spec = spectral_function(&s, Window::None).unwrap();
        let dt = s.uniform_step(1e-9).unwrap();
        // extended-series time-domain sum: chi(0) plus twice the tail
        let mut lhs = s.chi()[0].norm_sqr();
        for k in 1..s.len() {
            lhs += 2.0 * s.chi()[k].norm_sqr();
        }
        lhs *= dt;
        let m = (2 * s.len() - 1) as f64;
        let rhs: f64 =
            spec.values.iter().map(|v| (v / 2.0) * (v / 2.0)).sum::<f64>() / (m * dt);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8 * lhs.abs().max(1.0));
    }

    #[test]
    fn rejects_non_uniform_grid() {
        let times = alloc::vec![0.0, 0.1, 0.3, 0.4];
        let chi = alloc::vec![Complex64::ONE; 4];
        let s = SurvivalSeries::new(times, chi).unwrap();
        assert!(matches!(
            spectral_function(&s, Window::None),
            Err(SpectralError::NonUniformGrid)
        ));
    }
}
