use super::NumericsError;

/// Least-squares line through (x, y) points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    /// Slope of the fitted line.
    pub slope: f64,
    /// Intercept of the fitted line.
    pub intercept: f64,
    /// Coefficient of determination, in [0, 1].
    pub r_squared: f64,
}

/// Ordinary least-squares line fit.
///
/// Requires at least two distinct abscissae. A constant `ys` input fits
/// exactly with slope 0 and r² = 1.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit, NumericsError> {
    if xs.len() != ys.len() {
        return Err(NumericsError::LengthMismatch { xs: xs.len(), ys: ys.len() });
    }
    let n = xs.len();
    if n < 2 {
        return Err(NumericsError::DegenerateAbscissae);
    }
    let xbar = xs.iter().sum::<f64>() / n as f64;
    let ybar = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    if sxx == 0.0 {
        return Err(NumericsError::DegenerateAbscissae);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;

    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(LinearFit { slope, intercept, r_squared })
}
