//! The oracle suite behind `quench verify`: analytic-vs-numeric identities,
//! bound validity, and conservation checks at small scale, each reported
//! with its measured deviation against the governing tolerance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quench_core::fermi::{
    analytic_time_argument, delta_h_closed_form, delta_impurity_basis, fidelity_dynamic_analytic,
    fidelity_static_analytic, hermite_function, many_body_variance, static_overlap_ln,
    survival_series_det, t_min, trap_overlap_coeffs_with, work_moments, GaussHermite, TrapQuench,
};
use quench_core::lmg::{
    build_hamiltonian, ground_info, magnetization_block_defect, quench_weights,
    variance_brute_force, variance_closed_form, LmgSpec,
};
use quench_core::numerics::{determinant, eigh_with, ComplexMatrix};
use quench_core::qsl::fisher_delta_h;
use quench_core::series::{uniform_grid, SurvivalSeries};
use quench_core::spectral::{spectral_function, Window};
use quench_core::tolerances::Tolerances;

/// One verified invariant.
#[derive(Debug, Clone)]
pub struct CheckResult {
    /// Invariant name, stable across releases.
    pub name: String,
    /// Measured deviation.
    pub deviation: f64,
    /// Tolerance it must stay below (inclusive).
    pub tolerance: f64,
    /// Whether the check passed.
    pub pass: bool,
}

fn check(name: impl Into<String>, deviation: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name: name.into(),
        deviation,
        tolerance,
        pass: deviation.is_finite() && deviation <= tolerance,
    }
}

fn fail(name: impl Into<String>, cause: &str) -> CheckResult {
    CheckResult {
        name: format!("{} [{cause}]", name.into()),
        deviation: f64::INFINITY,
        tolerance: 0.0,
        pass: false,
    }
}

fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Worst violation of |χ(t)| ≥ cos(ΔH·t) over the grid (the variance bound
/// in its numerically robust algebraic form; equivalent to
/// t ≥ arccos|χ|/ΔH wherever the bound is informative).
fn mt_violation(series: &SurvivalSeries, delta_h: f64) -> f64 {
    let mut worst = 0.0f64;
    for (&t, chi) in series.times().iter().zip(series.chi()) {
        let angle = delta_h * t;
        if angle < core::f64::consts::FRAC_PI_2 {
            worst = worst.max(libm::cos(angle) - chi.norm());
        }
    }
    worst
}

/// Worst violation of |χ(t)| ≥ 1 - |⟨W⟩|·t (the work bound, same algebraic
/// rewriting).
fn work_violation(series: &SurvivalSeries, mean_work: f64) -> f64 {
    let mut worst = 0.0f64;
    for (&t, chi) in series.times().iter().zip(series.chi()) {
        worst = worst.max(1.0 - mean_work.abs() * t - chi.norm());
    }
    worst
}

/// Run the oracle suite. `quick` trims the grid sizes; `tol` usually comes
/// from config overrides (the negative control corrupts it on purpose).
pub fn run_suite(quick: bool, tol: &Tolerances) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // dense-kernel invariants on a fixed random Hermitian matrix
    let n = if quick { 8 } else { 14 };
    let h = random_hermitian(n, 2024);
    match eigh_with(&h, tol) {
        Ok(d) => {
            let mut ortho = 0.0f64;
            for a in 0..n {
                for b in a..n {
                    let mut dot = Complex64::ZERO;
                    for i in 0..n {
                        dot += d.eigenvectors[(i, a)].conj() * d.eigenvectors[(i, b)];
                    }
                    let expect = if a == b { 1.0 } else { 0.0 };
                    ortho = ortho.max((dot - expect).norm());
                }
            }
            out.push(check("eigh/orthonormality", ortho, tol.orthonormality));

            let scale = h.frobenius_norm();
            let mut residual = 0.0f64;
            for j in 0..n {
                let mut acc = 0.0;
                for i in 0..n {
                    let mut hv = Complex64::ZERO;
                    for k in 0..n {
                        hv += h[(i, k)] * d.eigenvectors[(k, j)];
                    }
                    acc += (hv - d.eigenvalues[j] * d.eigenvectors[(i, j)]).norm_sqr();
                }
                residual = residual.max(libm::sqrt(acc));
            }
            out.push(check("eigh/residual", residual / scale, tol.eigen_residual));

            let trace_dev = (h.trace().re - d.eigenvalues.iter().sum::<f64>()).abs() / scale;
            out.push(check("eigh/trace-identity", trace_dev, tol.trace_identity));

            match determinant(&d.eigenvectors) {
                Ok(det) => out.push(check(
                    "det/unitary-modulus",
                    (det.norm() - 1.0).abs(),
                    tol.unitary_det,
                )),
                Err(e) => out.push(fail("det/unitary-modulus", &e.to_string())),
            }
        }
        Err(e) => out.push(fail("eigh", &e.to_string())),
    }

    // hermite normalization by quadrature
    match GaussHermite::new(24) {
        Ok(quad) => {
            let integral = quad.integrate(|x| {
                let v = hermite_function(7, x).unwrap_or(f64::NAN);
                v * v
            });
            out.push(check("hermite/normalization", (integral - 1.0).abs(), 1e-10));
        }
        Err(e) => out.push(fail("hermite/normalization", &e.to_string())),
    }

    // trap basis: completeness, parity, static and dynamic identities
    let trap_n = if quick { 4 } else { 8 };
    let cutoff = TrapQuench::default_basis_cutoff(1.5, trap_n);
    match trap_overlap_coeffs_with(1.5, cutoff, tol) {
        Ok(basis) => {
            let mut row_defect = 0.0f64;
            for k in 0..trap_n {
                row_defect = row_defect.max(basis.row_defect(k));
            }
            out.push(check("trap/completeness", row_defect, tol.completeness));

            let mut parity = 0.0f64;
            for k in 0..basis.rows() {
                for m in 0..basis.retained_modes() {
                    if (k + m) % 2 == 1 {
                        parity = parity.max(basis.coeffs()[(k, m)].norm());
                    }
                }
            }
            out.push(check("trap/parity-zeros", parity, 0.0));

            // static fidelity against the occupied-block determinant
            let block = ComplexMatrix::from_fn(trap_n, trap_n, |k, m| basis.coeffs()[(k, m)]);
            match determinant(&block) {
                Ok(det) => {
                    let ln_det_f = 2.0 * libm::log(det.norm());
                    let ln_analytic = fidelity_static_analytic(1.5, trap_n)
                        .expect("valid parameters")
                        .ln_value;
                    out.push(check(
                        "trap/static-det-vs-analytic",
                        (ln_det_f - ln_analytic).abs() / ln_analytic.abs(),
                        1e-6,
                    ));
                }
                Err(e) => out.push(fail("trap/static-det-vs-analytic", &e.to_string())),
            }
        }
        Err(e) => out.push(fail("trap/basis", &e.to_string())),
    }

    // determinant vs analytic dynamic fidelity, recorded per (eta, N)
    let etas = [1.2, 1.5, 2.0];
    let n_max = if quick { 2 } else { 4 };
    for &eta in &etas {
        for n in 1..=n_max {
            let name = format!("trap/det-vs-analytic/eta{eta}-n{n}");
            let cutoff = TrapQuench::default_basis_cutoff(eta, n);
            let result = trap_overlap_coeffs_with(eta, cutoff, tol).and_then(|basis| {
                let grid = uniform_grid(core::f64::consts::PI / eta, if quick { 64 } else { 192 });
                let series = survival_series_det(&basis, n, &grid)?;
                let mut dev = 0.0f64;
                for (&t, &f) in series.times().iter().zip(series.fidelity()) {
                    let expect =
                        fidelity_dynamic_analytic(eta, n, analytic_time_argument(eta, t))?;
                    dev = dev.max((f - expect.value).abs());
                }
                Ok(dev)
            });
            match result {
                Ok(dev) => out.push(check(name, dev, 1e-6)),
                Err(e) => out.push(fail(name, &e.to_string())),
            }
        }
    }

    // closed-form deviation at N = 1 equals the brute-force variance
    match trap_overlap_coeffs_with(1.5, 32, tol) {
        Ok(basis) => match many_body_variance(&basis, 1) {
            Ok(brute) => {
                let closed = delta_h_closed_form(1.5, 1).expect("valid parameters").exact;
                out.push(check("trap/deviation-closed-form-n1", (brute - closed).abs(), 1e-9));
            }
            Err(e) => out.push(fail("trap/deviation-closed-form-n1", &e.to_string())),
        },
        Err(e) => out.push(fail("trap/deviation-closed-form-n1", &e.to_string())),
    }

    // minimum-time closed form against bisection
    {
        let mut dev = 0.0f64;
        let mut failed = None;
        for &(eta, n, theta) in &[(1.5f64, 5usize, 0.1f64), (2.0, 3, 0.5), (1.2, 8, 0.3)] {
            match t_min(eta, n, theta) {
                Ok(t) => {
                    if let Some(exact) = t.exact {
                        dev = dev.max((t.numeric - exact).abs());
                    }
                }
                Err(e) => failed = Some(e.to_string()),
            }
        }
        match failed {
            None => out.push(check("tmin/numeric-vs-exact", dev, 1e-6)),
            Some(e) => out.push(fail("tmin/numeric-vs-exact", &e)),
        }
    }

    // LMG identities
    let lmg_points: &[(f64, usize)] =
        if quick { &[(0.9, 10), (1.6, 20)] } else { &[(0.9, 10), (1.2, 50), (1.6, 50)] };
    {
        let mut dev = 0.0f64;
        let mut failed = None;
        for &(lambda, n) in lmg_points {
            match LmgSpec::new(lambda, n) {
                Ok(spec) => match variance_brute_force(&spec) {
                    Ok(brute) => {
                        let closed = variance_closed_form(lambda, n, spec.gamma());
                        dev = dev.max((brute - closed).abs());
                    }
                    Err(e) => failed = Some(e.to_string()),
                },
                Err(e) => failed = Some(e.to_string()),
            }
        }
        match failed {
            None => out.push(check("lmg/variance-closed-vs-brute", dev, 1e-8)),
            Some(e) => out.push(fail("lmg/variance-closed-vs-brute", &e)),
        }
    }
    match LmgSpec::new(1.2, if quick { 30 } else { 60 }) {
        Ok(spec) => {
            match build_hamiltonian(&spec, true) {
                Ok(h) => out.push(check(
                    "lmg/conservation",
                    magnetization_block_defect(&h, spec.n_spins()),
                    tol.conservation,
                )),
                Err(e) => out.push(fail("lmg/conservation", &e.to_string())),
            }
            match quench_weights(&spec) {
                Ok(w) => {
                    out.push(check(
                        "lmg/weight-sum",
                        (w.total_probability() - 1.0).abs(),
                        tol.weight_sum,
                    ));
                    out.push(check(
                        "lmg/mean-work-spectral-zero",
                        w.mean_work_spectral().abs(),
                        1e-10,
                    ));
                }
                Err(e) => out.push(fail("lmg/weight-sum", &e.to_string())),
            }
        }
        Err(e) => out.push(fail("lmg", &e.to_string())),
    }
    match ground_info(0.9, 64) {
        Ok(g) => out.push(check("lmg/aligned-ground-level", g.crossings as f64, 0.0)),
        Err(e) => out.push(fail("lmg/aligned-ground-level", &e.to_string())),
    }

    // bound validity on small trajectories of all three families
    {
        let n = if quick { 3 } else { 6 };
        let name = "bound/mt-trap";
        let cutoff = TrapQuench::default_basis_cutoff(1.5, n);
        let result = trap_overlap_coeffs_with(1.5, cutoff, tol).and_then(|basis| {
            let grid = uniform_grid(core::f64::consts::PI / 1.5, 256);
            let series = survival_series_det(&basis, n, &grid)?;
            let dh = many_body_variance(&basis, n)?;
            let w = work_moments(&basis, n)?;
            Ok((mt_violation(&series, dh), work_violation(&series, w.mean_work)))
        });
        match result {
            Ok((mt, wv)) => {
                out.push(check(name, mt, 1e-9));
                out.push(check("bound/work-trap", wv, 1e-9));
            }
            Err(e) => out.push(fail(name, &e.to_string())),
        }
    }
    {
        let n = if quick { 3 } else { 6 };
        let name = "bound/mt-impurity";
        let result = delta_impurity_basis(0.5, n, (4 * n).max(64)).and_then(|basis| {
            let grid = uniform_grid(2.0 * core::f64::consts::PI, 256);
            let series = survival_series_det(&basis, n, &grid)?;
            let dh = many_body_variance(&basis, n)?;
            let w = work_moments(&basis, n)?;
            Ok((mt_violation(&series, dh), work_violation(&series, w.mean_work)))
        });
        match result {
            Ok((mt, wv)) => {
                out.push(check(name, mt, 1e-9));
                out.push(check("bound/work-impurity", wv, 1e-9));
            }
            Err(e) => out.push(fail(name, &e.to_string())),
        }
    }
    {
        let name = "bound/mt-lmg";
        let result = LmgSpec::new(1.3, if quick { 20 } else { 50 }).and_then(|spec| {
            let w = quench_weights(&spec)?;
            let chi: Vec<Complex64> =
                spec.time_grid().iter().map(|&t| w.chi_at(t)).collect();
            let series = SurvivalSeries::new(spec.time_grid().to_vec(), chi)?;
            let dh = variance_brute_force(&spec)?;
            Ok(mt_violation(&series, dh))
        });
        match result {
            Ok(mt) => out.push(check(name, mt, 1e-9)),
            Err(e) => out.push(fail(name, &e.to_string())),
        }
    }

    // short-time Fisher identity per model family
    if !quick {
        let name = "fisher/trap";
        let n = 3;
        let cutoff = TrapQuench::default_basis_cutoff(1.5, n);
        let result = trap_overlap_coeffs_with(1.5, cutoff, tol).and_then(|basis| {
            let brute = many_body_variance(&basis, n)?;
            let fisher = fisher_delta_h(
                |t| {
                    let a = quench_core::fermi::overlap_matrix(&basis, n, t)
                        .expect("validated basis");
                    determinant(&a).expect("finite matrix")
                },
                brute,
            );
            Ok((fisher - brute).abs() / brute)
        });
        match result {
            Ok(dev) => out.push(check(name, dev, 1e-3)),
            Err(e) => out.push(fail(name, &e.to_string())),
        }

        let name = "fisher/lmg";
        let result = LmgSpec::new(1.4, 40).and_then(|spec| {
            let w = quench_weights(&spec)?;
            let brute = variance_brute_force(&spec)?;
            let fisher = fisher_delta_h(|t| w.chi_at(t), brute);
            Ok((fisher - brute).abs() / brute)
        });
        match result {
            Ok(dev) => out.push(check(name, dev, 1e-3)),
            Err(e) => out.push(fail(name, &e.to_string())),
        }
    }

    // spectral Parseval identity
    {
        let times = uniform_grid(12.0, 96);
        let chi: Vec<Complex64> =
            times.iter().map(|&t| Complex64::cis(-1.7 * t) * (0.2 + 0.8 * libm::exp(-0.1 * t))).collect();
        // renormalize chi(0) to 1 so the series validates
        let c0 = chi[0];
        let chi: Vec<Complex64> = chi.iter().map(|z| z / c0).collect();
        match SurvivalSeries::new(times, chi) {
            Ok(series) => match spectral_function(&series, Window::None) {
                Ok(spec) => {
                    let dt = series.uniform_step(1e-9).expect("uniform by construction");
                    let mut lhs = series.chi()[0].norm_sqr();
                    for k in 1..series.len() {
                        lhs += 2.0 * series.chi()[k].norm_sqr();
                    }
                    lhs *= dt;
                    let m = (2 * series.len() - 1) as f64;
                    let rhs: f64 =
                        spec.values.iter().map(|v| (v / 2.0) * (v / 2.0)).sum::<f64>() / (m * dt);
                    out.push(check("spectral/parseval", (lhs - rhs).abs() / lhs, 1e-8));
                }
                Err(e) => out.push(fail("spectral/parseval", &e.to_string())),
            },
            Err(e) => out.push(fail("spectral/parseval", &e.to_string())),
        }
    }

    // anderson exponent sign (quick skips: three diagonalization ladders)
    if !quick {
        match quench_core::fermi::anderson_alpha(0.5, &[6, 10, 14]) {
            Ok(fit) => out.push(check(
                "anderson/negative-slope",
                if fit.slope < -1e-3 { 0.0 } else { 1.0 },
                0.0,
            )),
            Err(e) => out.push(fail("anderson/negative-slope", &e.to_string())),
        }
        // static overlap stays sane in log space for a larger system
        match delta_impurity_basis(0.5, 30, 120) {
            Ok(basis) => match static_overlap_ln(&basis, 30) {
                Ok(ln) => out.push(check(
                    "anderson/log-space-overlap",
                    if ln.is_finite() && ln < 0.0 { 0.0 } else { 1.0 },
                    0.0,
                )),
                Err(e) => out.push(fail("anderson/log-space-overlap", &e.to_string())),
            },
            Err(e) => out.push(fail("anderson/log-space-overlap", &e.to_string())),
        }
    }

    out
}

/// Print one line per check; returns true when everything passed.
pub fn print_report(results: &[CheckResult]) -> bool {
    let mut all_pass = true;
    for r in results {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "{status}  {:<44} deviation={:.3e}  tolerance={:.3e}",
            r.name, r.deviation, r.tolerance
        );
        all_pass &= r.pass;
    }
    let n_pass = results.iter().filter(|r| r.pass).count();
    println!("{n_pass}/{} checks passed", results.len());
    all_pass
}
