use super::FermiError;

/// 1/π^(1/4), the ground-state normalization.
const INV_FOURTH_ROOT_PI: f64 = 0.7511255444649425;

/// Normalized harmonic-oscillator eigenfunction ψ_n(x) for unit frequency,
/// unit mass, ħ = 1.
///
/// Computed by upward recurrence on the normalized functions themselves,
/// ψ_{n+1} = √(2/(n+1)) x ψ_n − √(n/(n+1)) ψ_{n-1}, which stays bounded;
/// the recurrence is never run on raw Hermite polynomials.
///
/// When e^{-x²/2} underflows the recurrence cannot be seeded. The value is
/// then returned as 0 if `x` lies beyond the classical turning point of
/// level `n` (the true value is below every subnormal) and an error is
/// raised otherwise instead of returning silent garbage.
pub fn hermite_function(n: usize, x: f64) -> Result<f64, FermiError> {
    if !x.is_finite() {
        return Err(FermiError::InvalidParameter { reason: "hermite argument must be finite" });
    }
    let half_x2 = 0.5 * x * x;
    if half_x2 > 709.0 {
        if x * x >= (2 * n + 1) as f64 {
            return Ok(0.0);
        }
        return Err(FermiError::UnstableHermite { n, x });
    }
    let mut prev = INV_FOURTH_ROOT_PI * libm::exp(-half_x2);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = core::f64::consts::SQRT_2 * x * prev;
    for k in 1..n {
        let kf = k as f64;
        let next =
            libm::sqrt(2.0 / (kf + 1.0)) * x * cur - libm::sqrt(kf / (kf + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Fill `out[k] = ψ_k(x)` for all k < out.len() in one recurrence pass.
pub(crate) fn hermite_table(x: f64, out: &mut [f64]) -> Result<(), FermiError> {
    let n = out.len();
    if n == 0 {
        return Ok(());
    }
    let half_x2 = 0.5 * x * x;
    if half_x2 > 709.0 {
        // seed underflows; every level whose turning point lies inside |x|
        // is genuinely negligible, otherwise refuse
        if x * x >= (2 * (n - 1) + 1) as f64 {
            out.fill(0.0);
            return Ok(());
        }
        return Err(FermiError::UnstableHermite { n: n - 1, x });
    }
    out[0] = INV_FOURTH_ROOT_PI * libm::exp(-half_x2);
    if n == 1 {
        return Ok(());
    }
    out[1] = core::f64::consts::SQRT_2 * x * out[0];
    for k in 1..n - 1 {
        let kf = k as f64;
        out[k + 1] =
            libm::sqrt(2.0 / (kf + 1.0)) * x * out[k] - libm::sqrt(kf / (kf + 1.0)) * out[k - 1];
    }
    Ok(())
}

/// ψ_n(0): zero for odd n, alternating for even n via
/// ψ_{n+1}(0) = −√(n/(n+1)) ψ_{n-1}(0).
pub fn hermite_zero(n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let mut v = INV_FOURTH_ROOT_PI;
    let mut k = 0usize;
    while k < n {
        // step from psi_k(0) to psi_{k+2}(0)
        let kf = (k + 1) as f64;
        v *= -libm::sqrt(kf / (kf + 1.0));
        k += 2;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermi::GaussHermite;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gaussian_normalization_at_origin() {
        assert_abs_diff_eq!(hermite_function(0, 0.0).unwrap(), 0.7511255, epsilon = 1e-7);
    }

    #[test]
    fn odd_parity_vanishes_at_origin() {
        assert_eq!(hermite_function(1, 0.0).unwrap(), 0.0);
        assert_eq!(hermite_function(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn normalization_of_level_seven_by_quadrature() {
        // ∫ ψ_7(x)² dx = 1; the integrand decays like e^{-x²} so the rule
        // applies directly
        let quad = GaussHermite::new(24).unwrap();
        let integral = quad.integrate(|x| {
            let v = hermite_function(7, x).unwrap();
            v * v
        });
        assert_abs_diff_eq!(integral, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn zero_values_match_direct_evaluation() {
        for n in [0usize, 2, 4, 10, 40] {
            assert_abs_diff_eq!(
                hermite_zero(n),
                hermite_function(n, 0.0).unwrap(),
                epsilon = 1e-15
            );
        }
        assert_eq!(hermite_zero(13), 0.0);
    }

    #[test]
    fn forbidden_region_underflow_is_zero() {
        assert_eq!(hermite_function(3, 60.0).unwrap(), 0.0);
    }

    #[test]
    fn stability_guard_errors_instead_of_garbage() {
        // x large enough to underflow the seed but classically allowed for n
        let r = hermite_function(2000, 40.0);
        assert!(matches!(r, Err(FermiError::UnstableHermite { .. })));
    }

    #[test]
    fn table_matches_single_evaluations() {
        let mut buf = [0.0; 12];
        hermite_table(0.7, &mut buf).unwrap();
        for (k, v) in buf.iter().enumerate() {
            assert_abs_diff_eq!(*v, hermite_function(k, 0.7).unwrap(), epsilon = 1e-14);
        }
    }
}
