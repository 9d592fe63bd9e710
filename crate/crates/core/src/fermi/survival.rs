//! Determinant route to the many-body survival probability.
//!
//! The overlap matrix is
//!     A_{k,l}(t) = Σ_m ⟨ψ_k|φ_m⟩⟨ψ_l|φ_m⟩ e^{-i(E'_m - E_k) t},
//! truncated at the basis cutoff, with E_k = k + 1/2. Its determinant is
//! the dynamical overlap χ(t) including the global phase; the survival
//! probability is |χ|².

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::basis::SingleParticleBasis;
use super::{unperturbed_energy, FermiError, ImpurityQuench, TrapQuench};
use crate::numerics::{determinant, ComplexMatrix};
use crate::series::SurvivalSeries;
use crate::tolerances::Tolerances;

/// Overlap matrix A(t) for the first `occupied` orbitals.
pub fn overlap_matrix(
    basis: &SingleParticleBasis,
    occupied: usize,
    t: f64,
) -> Result<ComplexMatrix, FermiError> {
    if occupied == 0 || occupied > basis.rows() {
        return Err(FermiError::InvalidParameter {
            reason: "occupied count must be in 1..=rows",
        });
    }
    if !(t >= 0.0) {
        return Err(FermiError::InvalidParameter { reason: "time must be non-negative" });
    }
    let modes = basis.retained_modes();
    let c = basis.coeffs();
    let phases: Vec<Complex64> =
        basis.energies().iter().map(|&em| Complex64::cis(-em * t)).collect();
    let mut a = ComplexMatrix::zeros(occupied, occupied);
    for k in 0..occupied {
        let row_phase = Complex64::cis(unperturbed_energy(k) * t);
        for l in 0..occupied {
            let mut acc = Complex64::ZERO;
            for m in 0..modes {
                acc += c[(k, m)] * c[(l, m)] * phases[m];
            }
            a[(k, l)] = row_phase * acc;
        }
    }
    Ok(a)
}

/// χ(t) = det A(t) over a time grid, with default tolerances.
pub fn survival_series_det(
    basis: &SingleParticleBasis,
    occupied: usize,
    times: &[f64],
) -> Result<SurvivalSeries, FermiError> {
    survival_series_det_with(basis, occupied, times, &Tolerances::default())
}

fn survival_series_det_with(
    basis: &SingleParticleBasis,
    occupied: usize,
    times: &[f64],
    tol: &Tolerances,
) -> Result<SurvivalSeries, FermiError> {
    if occupied == 0 || occupied > basis.retained_modes() || occupied > basis.rows() {
        return Err(FermiError::InvalidParameter {
            reason: "occupied count must be in 1..=cutoff",
        });
    }
    basis.check_row_completeness(occupied, tol)?;

    let modes = basis.retained_modes();
    let c = basis.coeffs();
    // occupied coefficient rows are real for both quench families; keep a
    // real copy for the hot loop and fall back to the general path otherwise
    let real_coeffs = c.is_real();
    let occ_real: Vec<f64> = if real_coeffs {
        let mut v = Vec::with_capacity(occupied * modes);
        for k in 0..occupied {
            v.extend(c.row(k).iter().take(modes).map(|z| z.re));
        }
        v
    } else {
        Vec::new()
    };

    let energies = basis.energies();
    let mut chi = Vec::with_capacity(times.len());
    let mut weighted = vec![Complex64::ZERO; occupied * modes];
    for &t in times {
        let chi_t = if real_coeffs {
            for k in 0..occupied {
                for m in 0..modes {
                    let ph = Complex64::cis(-energies[m] * t);
                    weighted[k * modes + m] = occ_real[k * modes + m] * ph;
                }
            }
            let mut a = ComplexMatrix::zeros(occupied, occupied);
            for k in 0..occupied {
                let row_phase = Complex64::cis(unperturbed_energy(k) * t);
                let wk = &weighted[k * modes..(k + 1) * modes];
                for l in 0..occupied {
                    let cl = &occ_real[l * modes..(l + 1) * modes];
                    let mut re = 0.0;
                    let mut im = 0.0;
                    for (w, &cv) in wk.iter().zip(cl) {
                        re += w.re * cv;
                        im += w.im * cv;
                    }
                    a[(k, l)] = row_phase * Complex64::new(re, im);
                }
            }
            determinant(&a)?
        } else {
            determinant(&overlap_matrix(basis, occupied, t)?)?
        };
        if !chi_t.re.is_finite() || !chi_t.im.is_finite() {
            return Err(FermiError::Numerics(crate::numerics::NumericsError::NonFinite));
        }
        chi.push(chi_t);
    }
    // the t = 0 determinant multiplies `occupied` row sums, so its roundoff
    // floor grows linearly with the particle number; scale the start check
    let mut series_tol = *tol;
    series_tol.fidelity_start *= 1.0f64.max(occupied as f64 / 8.0);
    Ok(SurvivalSeries::with_tolerances(times.to_vec(), chi, &series_tol)?)
}

/// First time the determinant survival probability reaches `theta`, found
/// by scanning `times` for a bracket and bisecting the exact F(t) inside
/// it. Returns `None` when F stays above the threshold over the grid.
pub fn first_threshold_time(
    basis: &SingleParticleBasis,
    occupied: usize,
    theta: f64,
    times: &[f64],
) -> Result<Option<f64>, FermiError> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(FermiError::InvalidParameter { reason: "theta must lie in (0, 1]" });
    }
    let f_at = |t: f64| -> Result<f64, FermiError> {
        let a = overlap_matrix(basis, occupied, t)?;
        Ok(determinant(&a)?.norm_sqr())
    };
    let mut prev_t = times[0];
    let mut prev_f = f_at(prev_t)?;
    if prev_f <= theta {
        return Ok(Some(prev_t));
    }
    for &t in &times[1..] {
        let f = f_at(t)?;
        if f <= theta {
            // bisect the crossing inside [prev_t, t]
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f_at(mid)? <= theta {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev_t = t;
        prev_f = f;
    }
    let _ = prev_f;
    Ok(None)
}

/// Build the trap basis and run the determinant series for the quench.
pub fn trap_survival(spec: &TrapQuench) -> Result<SurvivalSeries, FermiError> {
    let basis = super::trap_overlap_coeffs(spec.eta(), spec.basis_cutoff())?;
    survival_series_det(&basis, spec.n_particles(), spec.time_grid())
}

/// Build the impurity basis and run the determinant series for the quench.
pub fn impurity_survival(spec: &ImpurityQuench) -> Result<SurvivalSeries, FermiError> {
    let basis =
        super::delta_impurity_basis(spec.kappa(), spec.n_particles(), spec.basis_cutoff())?;
    survival_series_det(&basis, spec.n_particles(), spec.time_grid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermi::{
        analytic_time_argument, fidelity_dynamic_analytic, trap_overlap_coeffs,
    };
    use crate::series::uniform_grid;
    use approx::assert_abs_diff_eq;

    #[test]
    fn overlap_matrix_is_identity_at_t0_eta1() {
        let b = trap_overlap_coeffs(1.0, 16).unwrap();
        let a = overlap_matrix(&b, 4, 0.0).unwrap();
        for k in 0..4 {
            for l in 0..4 {
                let expect = if k == l { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(a[(k, l)].re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(a[(k, l)].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn overlap_matrix_resolution_of_identity_any_eta() {
        let b = trap_overlap_coeffs(1.7, 24).unwrap();
        let a = overlap_matrix(&b, 5, 0.0).unwrap();
        for k in 0..5 {
            for l in 0..5 {
                let expect = if k == l { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(a[(k, l)].re, expect, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn no_quench_means_unit_survival() {
        let spec = TrapQuench::new(1.0, 6).unwrap();
        let s = trap_survival(&spec).unwrap();
        for &f in s.fidelity() {
            assert_abs_diff_eq!(f, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn determinant_matches_analytic_single_particle() {
        let spec = TrapQuench::new(1.5, 1).unwrap();
        let s = trap_survival(&spec).unwrap();
        for (&t, &f) in s.times().iter().zip(s.fidelity()) {
            let expect =
                fidelity_dynamic_analytic(1.5, 1, analytic_time_argument(1.5, t)).unwrap();
            assert_abs_diff_eq!(f, expect.value, epsilon = 1e-9);
        }
    }

    #[test]
    fn larger_systems_decay_faster_in_first_quarter_period() {
        let eta = 1.5;
        let quarter = core::f64::consts::PI / eta / 4.0;
        let grid = uniform_grid(quarter, 64);
        let small = trap_survival(
            &TrapQuench::new(eta, 2).unwrap().with_time_grid(grid.clone()).unwrap(),
        )
        .unwrap();
        let large = trap_survival(
            &TrapQuench::new(eta, 8).unwrap().with_time_grid(grid).unwrap(),
        )
        .unwrap();
        for i in 1..small.len() {
            assert!(
                large.fidelity()[i] < small.fidelity()[i],
                "N=8 should decay faster at every t > 0"
            );
        }
    }

    #[test]
    fn impurity_series_is_valid_and_nontrivial() {
        let spec = ImpurityQuench::new(0.5, 4).unwrap();
        let s = impurity_survival(&spec).unwrap();
        assert_abs_diff_eq!(s.fidelity()[0], 1.0, epsilon = 1e-12);
        let fmin = s.fidelity().iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(fmin < 0.999, "barrier quench must move the state");
        for &f in s.fidelity() {
            assert!(f <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn threshold_time_matches_analytic_root() {
        // for the trap quench the closed form gives the same crossing
        let eta = 1.5;
        let n = 6;
        let theta = 0.5;
        let b = trap_overlap_coeffs(eta, crate::fermi::TrapQuench::default_basis_cutoff(eta, n))
            .unwrap();
        let grid = uniform_grid(core::f64::consts::PI / eta, 256);
        let t_det = first_threshold_time(&b, n, theta, &grid).unwrap().unwrap();
        let t_analytic = crate::fermi::t_min(eta, n, theta).unwrap().numeric;
        // convert period units to internal time
        let expect = crate::fermi::TrapMinimumTime::internal_from_period_units(eta, t_analytic);
        assert_abs_diff_eq!(t_det, expect, epsilon = 1e-6);
    }

    #[test]
    fn threshold_time_none_when_unreachable() {
        let b = trap_overlap_coeffs(1.5, 32).unwrap();
        let grid = uniform_grid(core::f64::consts::PI / 1.5, 128);
        // N = 1 never decays below 0.9
        assert_eq!(first_threshold_time(&b, 1, 0.9, &grid).unwrap(), None);
    }

    /// Independent propagator oracle: evolve ψ_l with the exact
    /// frequency-η harmonic kernel on a position grid, then integrate
    /// ψ_k(x)·ψ_l(x, t) by trapezoid and attach the explicit row phase.
    #[test]
    fn overlap_matrix_matches_grid_propagation_oracle() {
        use crate::fermi::hermite_function;
        let eta = 1.5;
        let t = 0.7;
        let n = 2;
        let b = trap_overlap_coeffs(eta, 48).unwrap();
        let a = overlap_matrix(&b, n, t).unwrap();

        let points = 1601;
        let half_width = 8.0;
        let dx = 2.0 * half_width / (points - 1) as f64;
        let xs: Vec<f64> = (0..points).map(|i| -half_width + i as f64 * dx).collect();

        // kernel K(x,y;t) for frequency eta, principal branch
        let s = libm::sin(eta * t);
        let cos = libm::cos(eta * t);
        let pref = (Complex64::new(eta, 0.0)
            / (Complex64::new(0.0, 1.0) * 2.0 * core::f64::consts::PI * s))
            .sqrt();
        let kernel = |x: f64, y: f64| -> Complex64 {
            pref * Complex64::cis(eta * ((x * x + y * y) * cos - 2.0 * x * y) / (2.0 * s))
        };

        for k in 0..n {
            for l in 0..n {
                // psi_l evolved to time t on the grid
                let evolved: Vec<Complex64> = xs
                    .iter()
                    .map(|&x| {
                        let mut acc = Complex64::ZERO;
                        for (i, &y) in xs.iter().enumerate() {
                            let w = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
                            acc += w * kernel(x, y) * hermite_function(l, y).unwrap();
                        }
                        acc * dx
                    })
                    .collect();
                let mut overlap = Complex64::ZERO;
                for (i, &x) in xs.iter().enumerate() {
                    let w = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
                    overlap += w * hermite_function(k, x).unwrap() * evolved[i];
                }
                overlap *= dx;
                let expect = Complex64::cis(unperturbed_energy(k) * t) * overlap;
                assert_abs_diff_eq!(a[(k, l)].re, expect.re, epsilon = 1e-6);
                assert_abs_diff_eq!(a[(k, l)].im, expect.im, epsilon = 1e-6);
            }
        }
    }
}
