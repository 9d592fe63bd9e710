use super::model::{build_hamiltonian, ground_info, state_index, LmgSpec};
use super::LmgError;

/// Closed-form post-quench energy deviation
/// ΔH = √(4(1+j)(N-j)γ²/N²) with the crossing count j taken from
/// [`ground_info`], never supplied by the caller.
pub fn variance_closed_form(lambda: f64, n_spins: usize, gamma: f64) -> f64 {
    let j = match ground_info(lambda, n_spins) {
        Ok(g) => g.crossings as f64,
        Err(_) => return f64::NAN,
    };
    let n = n_spins as f64;
    2.0 * gamma.abs() * libm::sqrt((1.0 + j) * (n - j)) / n
}

/// Brute-force ΔH: assemble the dense post-quench Hamiltonian and evaluate
/// √(⟨H²⟩ - ⟨H⟩²) on the initial basis state |m_ground, up⟩.
///
/// For a basis state the variance is the squared norm of the off-diagonal
/// part of the state's column, which avoids the cancellation of the naive
/// two-term form.
pub fn variance_brute_force(spec: &LmgSpec) -> Result<f64, LmgError> {
    let g = ground_info(spec.lambda(), spec.n_spins())?;
    let idx = state_index(spec.n_spins(), g.twice_m_ground, true)
        .expect("ground level is always a valid basis state");
    let h = build_hamiltonian(spec, true)?;
    let dim = h.rows();
    let mut acc = 0.0;
    for i in 0..dim {
        if i != idx {
            acc += h[(i, idx)].norm_sqr();
        }
    }
    Ok(libm::sqrt(acc))
}
