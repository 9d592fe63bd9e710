//! Closed-form fidelities, energy deviation, and minimum-orthogonality
//! times for the trap-frequency quench.
//!
//! The closed forms are π-periodic in their own time argument; matching
//! them against the determinant route at N = 1 fixes the constant rescaling
//! between that argument and the internal time unit (ω₁ = 1) as
//! `argument = η · t_internal`. The mapping is frozen in
//! [`analytic_time_argument`] and asserted by tests. Minimum times are
//! reported in units of the recurrence period π of the closed form.

use super::FermiError;

/// A fidelity with an explicit log channel; `value` clamps to zero once the
/// log drops below -700 (f64 underflow).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fidelity {
    /// Linear value (0 on underflow).
    pub value: f64,
    /// Natural log of the fidelity.
    pub ln_value: f64,
}

impl Fidelity {
    fn from_ln(ln_value: f64) -> Self {
        let value = if ln_value < -700.0 { 0.0 } else { libm::exp(ln_value) };
        Self { value, ln_value }
    }
}

fn check_params(eta: f64, n: usize) -> Result<(), FermiError> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(FermiError::InvalidParameter { reason: "eta must be positive and finite" });
    }
    if n == 0 {
        return Err(FermiError::InvalidParameter { reason: "need at least one particle" });
    }
    Ok(())
}

/// Time argument of the closed-form dynamic fidelity for an internal time
/// (ω₁ = 1): argument = η·t.
pub fn analytic_time_argument(eta: f64, internal_t: f64) -> f64 {
    eta * internal_t
}

/// Static ground-ground fidelity (2√η/(η+1))^(N²), evaluated in log space.
pub fn fidelity_static_analytic(eta: f64, n: usize) -> Result<Fidelity, FermiError> {
    check_params(eta, n)?;
    let ln_single = libm::log(2.0 * libm::sqrt(eta) / (eta + 1.0));
    Ok(Fidelity::from_ln((n * n) as f64 * ln_single))
}

/// Dynamic fidelity (2η / √(4η²cos²t + (η²+1)²sin²t))^(N²) with `t` the
/// calibrated argument (see [`analytic_time_argument`]), in log space.
pub fn fidelity_dynamic_analytic(eta: f64, n: usize, t: f64) -> Result<Fidelity, FermiError> {
    check_params(eta, n)?;
    let c = libm::cos(t);
    let s = libm::sin(t);
    let e2 = eta * eta;
    let radicand = 4.0 * e2 * c * c + (e2 + 1.0) * (e2 + 1.0) * s * s;
    let ln_single = libm::log(2.0 * eta) - 0.5 * libm::log(radicand);
    Ok(Fidelity::from_ln((n * n) as f64 * ln_single))
}

/// Post-quench energy deviation of the trap quench in its printed closed
/// form, together with its large-N approximant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormDeltaH {
    /// (η²-1)/(2√2·N) · Σ_{n=1..N} √(n²-n+1).
    pub exact: f64,
    /// N(η²-1)/(4√2), valid for large particle numbers.
    pub large_n: f64,
}

/// Closed-form ΔH for the trap quench (see [`ClosedFormDeltaH`]).
pub fn delta_h_closed_form(eta: f64, n: usize) -> Result<ClosedFormDeltaH, FermiError> {
    check_params(eta, n)?;
    let two_sqrt2 = 2.0 * core::f64::consts::SQRT_2;
    let mut sum = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        sum += libm::sqrt(kf * kf - kf + 1.0);
    }
    let pref = (eta * eta - 1.0).abs();
    Ok(ClosedFormDeltaH {
        exact: pref / (two_sqrt2 * n as f64) * sum,
        large_n: n as f64 * pref / (2.0 * two_sqrt2),
    })
}

/// Minimum time for the dynamic fidelity to reach a threshold, in units of
/// the closed form's recurrence period π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapMinimumTime {
    /// Root of the closed-form fidelity = θ by bisection; authoritative.
    pub numeric: f64,
    /// The printed arcsec branch, where real-valued (η > 1 only).
    pub exact: Option<f64>,
    /// The printed large-N approximant 2η√(log θ⁻²)/(πN(η²-1)).
    pub large_n: f64,
}

impl TrapMinimumTime {
    /// Convert a time in period units back to the internal unit (ω₁ = 1).
    pub fn internal_from_period_units(eta: f64, t: f64) -> f64 {
        t * core::f64::consts::PI / eta
    }
}

/// Minimum time for F(t) of the trap quench to reach `theta` ∈ (0, 1].
///
/// Fails with the dynamical floor when `theta` is below min_t F(t).
pub fn t_min(eta: f64, n: usize, theta: f64) -> Result<TrapMinimumTime, FermiError> {
    check_params(eta, n)?;
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(FermiError::InvalidParameter { reason: "theta must lie in (0, 1]" });
    }
    let n2 = (n * n) as f64;
    let ln_theta = libm::log(theta);
    // floor at the quarter period: (2η/(η²+1))^{N²}
    let ln_floor = n2 * libm::log(2.0 * eta / (eta * eta + 1.0));
    if ln_theta < ln_floor {
        let floor = if ln_floor < -700.0 { 0.0 } else { libm::exp(ln_floor) };
        return Err(FermiError::BelowDynamicalFloor { floor, ln_floor });
    }
    if theta == 1.0 {
        // F(0) = θ exactly; the flat quadratic minimum defeats bisection
        return Ok(TrapMinimumTime { numeric: 0.0, exact: Some(0.0), large_n: 0.0 });
    }

    // bisection on ln F(τ) - ln θ over τ ∈ [0, π/2]; F is monotone there
    let target = ln_theta;
    let ln_f = |tau: f64| -> f64 {
        let c = libm::cos(tau);
        let s = libm::sin(tau);
        let e2 = eta * eta;
        n2 * (libm::log(2.0 * eta)
            - 0.5 * libm::log(4.0 * e2 * c * c + (e2 + 1.0) * (e2 + 1.0) * s * s))
    };
    let mut lo = 0.0f64;
    let mut hi = core::f64::consts::FRAC_PI_2;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_f(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let numeric = 0.5 * (lo + hi) / core::f64::consts::PI;

    // printed arcsec branch: (1/π) arcsec[(η²-1)/√(1+η⁴+η²(2-4θ^{-2/N²}))]
    let e2 = eta * eta;
    let theta_pow = libm::exp(-2.0 / n2 * ln_theta);
    let radicand = 1.0 + e2 * e2 + e2 * (2.0 - 4.0 * theta_pow);
    let exact = if eta > 1.0 && radicand > 0.0 {
        let inv_arg = libm::sqrt(radicand) / (e2 - 1.0);
        if (0.0..=1.0).contains(&inv_arg) {
            Some(libm::acos(inv_arg) / core::f64::consts::PI)
        } else {
            None
        }
    } else {
        None
    };

    let large_n = 2.0 * eta / (core::f64::consts::PI * n as f64)
        * libm::sqrt(libm::log(1.0 / (theta * theta)))
        / (e2 - 1.0).abs();

    Ok(TrapMinimumTime { numeric, exact, large_n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn static_fidelity_spot_values() {
        assert_abs_diff_eq!(fidelity_static_analytic(1.0, 7).unwrap().value, 1.0, epsilon = 0.0);
        // 2√1.5/2.5 = 0.979796 at N = 1
        let f1 = fidelity_static_analytic(1.5, 1).unwrap();
        assert_abs_diff_eq!(f1.value, 0.979796, epsilon = 1e-6);
        // N = 10: exp(100 ln 0.9797959)
        let f10 = fidelity_static_analytic(1.5, 10).unwrap();
        let expect = libm::exp(100.0 * libm::log(2.0 * libm::sqrt(1.5) / 2.5));
        assert_abs_diff_eq!(f10.value, expect, epsilon = 1e-15);
        assert_abs_diff_eq!(f10.value, 0.1299, epsilon = 5e-5);
    }

    #[test]
    fn static_fidelity_underflow_keeps_log_channel() {
        let f = fidelity_static_analytic(1.5, 200).unwrap();
        assert_eq!(f.value, 0.0);
        assert_abs_diff_eq!(
            f.ln_value,
            40000.0 * libm::log(2.0 * libm::sqrt(1.5) / 2.5),
            epsilon = 1e-9
        );
    }

    #[test]
    fn dynamic_fidelity_spot_values() {
        let f = fidelity_dynamic_analytic(1.7, 3, 0.0).unwrap();
        assert_abs_diff_eq!(f.value, 1.0, epsilon = 1e-14);
        // quarter period at N = 1: 2η/(η²+1)
        let f = fidelity_dynamic_analytic(1.5, 1, core::f64::consts::FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(f.value, 0.923077, epsilon = 1e-6);
    }

    #[test]
    fn dynamic_fidelity_is_pi_periodic() {
        for eta in [1.2, 2.0] {
            for n in [1usize, 4] {
                for t in [0.3, 1.1, 2.0] {
                    let a = fidelity_dynamic_analytic(eta, n, t).unwrap().value;
                    let b =
                        fidelity_dynamic_analytic(eta, n, t + core::f64::consts::PI).unwrap().value;
                    assert_abs_diff_eq!(a, b, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn delta_h_closed_form_values() {
        assert_abs_diff_eq!(delta_h_closed_form(1.0, 5).unwrap().exact, 0.0, epsilon = 0.0);
        // N = 1: 1.25/(2√2)
        let d = delta_h_closed_form(1.5, 1).unwrap();
        assert_abs_diff_eq!(d.exact, 0.441942, epsilon = 1e-6);
        // exact/approximant ratio → 1 within 1% at N = 1000
        let d = delta_h_closed_form(1.5, 1000).unwrap();
        assert!((d.exact / d.large_n - 1.0).abs() < 0.01);
        // approximant / N is (η²-1)/(4√2) exactly
        assert_abs_diff_eq!(
            d.large_n / 1000.0,
            1.25 / (4.0 * core::f64::consts::SQRT_2),
            epsilon = 1e-15
        );
    }

    #[test]
    fn t_min_trivial_threshold() {
        let t = t_min(1.5, 4, 1.0).unwrap();
        assert_abs_diff_eq!(t.numeric, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.exact.unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn t_min_large_n_spot_value() {
        // 2η√(log θ⁻²)/(πN(η²-1)) at η=1.5, θ=1e-2: ≈ 2.3184/N
        let t = t_min(1.5, 100, 1e-2).unwrap();
        assert_abs_diff_eq!(t.large_n * 100.0, 2.3184, epsilon = 1e-3);
    }

    #[test]
    fn t_min_numeric_matches_exact_branch() {
        for eta in [1.2, 1.5, 2.0] {
            for n in [2usize, 5, 20] {
                for theta in [0.5, 0.1, 1e-2] {
                    let t = match t_min(eta, n, theta) {
                        Ok(t) => t,
                        Err(FermiError::BelowDynamicalFloor { .. }) => continue,
                        Err(e) => panic!("unexpected error: {e}"),
                    };
                    if let Some(exact) = t.exact {
                        assert_abs_diff_eq!(t.numeric, exact, epsilon = 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn t_min_unreachable_threshold_errors_with_floor() {
        // N = 1, η = 1.5: floor is 0.923; θ = 0.5 is unreachable
        let err = t_min(1.5, 1, 0.5).unwrap_err();
        match err {
            FermiError::BelowDynamicalFloor { floor, .. } => {
                assert_abs_diff_eq!(floor, 0.923077, epsilon = 1e-6);
            }
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn t_min_decreases_with_n() {
        let mut prev = f64::INFINITY;
        for n in [8usize, 16, 32, 64, 128] {
            let t = t_min(1.5, n, 1e-2).unwrap().numeric;
            assert!(t < prev, "t_min must decrease with N");
            prev = t;
        }
    }

    #[test]
    fn analytic_time_argument_is_eta_scaled() {
        assert_eq!(analytic_time_argument(1.5, 2.0), 3.0);
    }
}
