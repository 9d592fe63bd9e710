use alloc::vec::Vec;
use num_complex::Complex64;

use super::LmgError;
use crate::numerics::ComplexMatrix;
use crate::series::uniform_grid;

const MAX_SPINS: usize = 20000;

/// One LMG quench: bath coupling λ, N bath spins, impurity coupling γ
/// (default λ√N), and a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LmgSpec {
    lambda: f64,
    n_spins: usize,
    gamma: f64,
    time_grid: Vec<f64>,
}

impl LmgSpec {
    /// New spec with the default impurity coupling γ = λ√N and a default
    /// grid of 2048 points spanning one recurrence period 2π/ΔH of the
    /// closed-form variance.
    pub fn new(lambda: f64, n_spins: usize) -> Result<Self, LmgError> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(LmgError::InvalidParameter {
                reason: "lambda must be non-negative and finite",
            });
        }
        if n_spins < 2 {
            return Err(LmgError::InvalidParameter { reason: "need at least two bath spins" });
        }
        if n_spins > MAX_SPINS {
            return Err(LmgError::DimensionOverflow { n: n_spins });
        }
        let gamma = lambda * libm::sqrt(n_spins as f64);
        let time_grid = Self::default_time_grid(lambda, n_spins, gamma);
        Ok(Self { lambda, n_spins, gamma, time_grid })
    }

    /// Default grid: 2048 points over one recurrence period of the
    /// closed-form variance (2π when the variance vanishes).
    pub fn default_time_grid(lambda: f64, n_spins: usize, gamma: f64) -> Vec<f64> {
        let dh = super::variance::variance_closed_form(lambda, n_spins, gamma);
        let extent = if dh > 0.0 { 2.0 * core::f64::consts::PI / dh } else { 2.0 * core::f64::consts::PI };
        uniform_grid(extent, 2048)
    }

    /// Override the impurity coupling.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self, LmgError> {
        if !gamma.is_finite() {
            return Err(LmgError::InvalidParameter { reason: "gamma must be finite" });
        }
        self.gamma = gamma;
        self.time_grid = Self::default_time_grid(self.lambda, self.n_spins, gamma);
        Ok(self)
    }

    /// Override the time grid (strictly ascending, starting at 0).
    pub fn with_time_grid(mut self, grid: Vec<f64>) -> Result<Self, LmgError> {
        if grid.is_empty() || grid[0] != 0.0 {
            return Err(LmgError::InvalidParameter { reason: "time grid must start at 0" });
        }
        for i in 1..grid.len() {
            if !(grid[i] > grid[i - 1]) {
                return Err(LmgError::InvalidParameter {
                    reason: "time grid must be strictly ascending",
                });
            }
        }
        self.time_grid = grid;
        Ok(self)
    }

    /// Bath coupling λ.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Bath spin count N.
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    /// Impurity coupling γ.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Time grid (ħ = 1).
    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }

    /// Joint Hilbert-space dimension 2(N+1).
    pub fn dimension(&self) -> usize {
        2 * (self.n_spins + 1)
    }
}

/// Index of the basis state |m, s⟩: states are ordered by ascending m with
/// the impurity-down level first, idx = 2·(m + S) + (up as usize), where m
/// is stored as 2m to stay exact for odd N.
pub fn state_index(n_spins: usize, twice_m: i64, up: bool) -> Option<usize> {
    let n = n_spins as i64;
    if twice_m < -n || twice_m > n || (twice_m + n) % 2 != 0 {
        return None;
    }
    let level = ((twice_m + n) / 2) as usize;
    Some(2 * level + up as usize)
}

/// Quantum numbers (2m, impurity-up) of a basis index.
pub fn state_quantum_numbers(n_spins: usize, index: usize) -> (i64, bool) {
    let level = (index / 2) as i64;
    (2 * level - n_spins as i64, index % 2 == 1)
}

/// Normalized state on the joint bath-impurity space.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveState {
    amplitudes: Vec<Complex64>,
    n_spins: usize,
}

impl CollectiveState {
    /// Wrap amplitudes; must have length 2(N+1) and unit norm to 1e-10.
    pub fn new(n_spins: usize, amplitudes: Vec<Complex64>) -> Result<Self, LmgError> {
        if amplitudes.len() != 2 * (n_spins + 1) {
            return Err(LmgError::InvalidParameter {
                reason: "amplitude vector must have length 2(N+1)",
            });
        }
        let norm = libm::sqrt(amplitudes.iter().map(|z| z.norm_sqr()).sum());
        if (norm - 1.0).abs() > 1e-10 {
            return Err(LmgError::InvalidParameter { reason: "state must have unit norm" });
        }
        Ok(Self { amplitudes, n_spins })
    }

    /// The basis state |m, s⟩.
    pub fn basis_state(n_spins: usize, twice_m: i64, up: bool) -> Result<Self, LmgError> {
        let idx = state_index(n_spins, twice_m, up)
            .ok_or(LmgError::InvalidParameter { reason: "magnetic number out of range" })?;
        let mut amplitudes = alloc::vec![Complex64::ZERO; 2 * (n_spins + 1)];
        amplitudes[idx] = Complex64::ONE;
        Ok(Self { amplitudes, n_spins })
    }

    /// Amplitude vector.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Bath spin count.
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }
}

/// Bath diagonal energy at magnetic number m (γ = 0), with the frozen sign
/// convention: E_b(m) = -(λ/N)(2(S(S+1) - m²) - N) + 2m.
pub(crate) fn bath_diagonal(lambda: f64, n_spins: usize, twice_m: i64) -> f64 {
    let n = n_spins as f64;
    let s = n / 2.0;
    let s2 = s * (s + 1.0);
    let m = twice_m as f64 / 2.0;
    -(lambda / n) * (2.0 * (s2 - m * m) - n) + 2.0 * m
}

/// Impurity diagonal energy: the printed -2s_z term, so the impurity
/// ground state is the up level at energy -1.
pub(crate) fn impurity_diagonal(up: bool) -> f64 {
    if up {
        -1.0
    } else {
        1.0
    }
}

/// Ladder coupling ⟨m+1, down|H|m, up⟩ = -(2γ/N)·√(S(S+1) - m(m+1)).
pub(crate) fn ladder_coupling(gamma: f64, n_spins: usize, twice_m: i64) -> f64 {
    let n = n_spins as f64;
    let s = n / 2.0;
    let s2 = s * (s + 1.0);
    let m = twice_m as f64 / 2.0;
    -(2.0 * gamma / n) * libm::sqrt(s2 - m * (m + 1.0))
}

/// Assemble the joint Hamiltonian on the 2(N+1)-dimensional collective
/// basis; `interaction_on = false` zeroes the γ term (the pre-quench
/// Hamiltonian, diagonal in this basis).
pub fn build_hamiltonian(spec: &LmgSpec, interaction_on: bool) -> Result<ComplexMatrix, LmgError> {
    let n = spec.n_spins();
    let dim = spec.dimension();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for level in 0..=n {
        let twice_m = 2 * level as i64 - n as i64;
        let eb = bath_diagonal(spec.lambda(), n, twice_m);
        for up in [false, true] {
            let idx = 2 * level + up as usize;
            h[(idx, idx)] = Complex64::new(eb + impurity_diagonal(up), 0.0);
        }
        // |m, up> couples to |m+1, down>
        if interaction_on && level < n {
            let v = ladder_coupling(spec.gamma(), n, twice_m);
            let a = 2 * level + 1; // (m, up)
            let b = 2 * (level + 1); // (m+1, down)
            h[(a, b)] = Complex64::new(v, 0.0);
            h[(b, a)] = Complex64::new(v, 0.0);
        }
    }
    Ok(h)
}

/// Max |H_{ab}| over pairs of states with different total magnetization
/// m + s_z; exactly zero for a conserving Hamiltonian.
pub fn magnetization_block_defect(h: &ComplexMatrix, n_spins: usize) -> f64 {
    let dim = 2 * (n_spins + 1);
    let mut worst = 0.0f64;
    for a in 0..dim {
        let (tma, ua) = state_quantum_numbers(n_spins, a);
        let block_a = tma + if ua { 1 } else { -1 };
        for b in 0..dim {
            if a == b {
                continue;
            }
            let (tmb, ub) = state_quantum_numbers(n_spins, b);
            let block_b = tmb + if ub { 1 } else { -1 };
            if block_a != block_b {
                worst = worst.max(h[(a, b)].norm());
            }
        }
    }
    worst
}

/// Ground level of the bath at γ = 0 and the crossing count relative to the
/// aligned level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgGroundInfo {
    /// 2·m of the bath ground level.
    pub twice_m_ground: i64,
    /// Number of level crossings passed, j = m_ground + N/2.
    pub crossings: usize,
    /// Energy of the full pre-quench ground state |m_ground, up⟩
    /// (bath level plus the impurity ground energy -1).
    pub energy: f64,
}

/// Scan the bath diagonal for its minimum. Ties at a crossing point go to
/// the smaller-j (aligned-side) level, which the ascending scan with a
/// strict comparison delivers.
pub fn ground_info(lambda: f64, n_spins: usize) -> Result<LmgGroundInfo, LmgError> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(LmgError::InvalidParameter {
            reason: "lambda must be non-negative and finite",
        });
    }
    if n_spins < 2 {
        return Err(LmgError::InvalidParameter { reason: "need at least two bath spins" });
    }
    let n = n_spins as i64;
    let mut best_tm = -n;
    let mut best = bath_diagonal(lambda, n_spins, -n);
    let mut tm = -n + 2;
    while tm <= n {
        let e = bath_diagonal(lambda, n_spins, tm);
        if e < best {
            best = e;
            best_tm = tm;
        }
        tm += 2;
    }
    Ok(LmgGroundInfo {
        twice_m_ground: best_tm,
        crossings: ((best_tm + n) / 2) as usize,
        energy: best + impurity_diagonal(true),
    })
}

/// Bath spectrum at one coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    /// Bath coupling λ.
    pub lambda: f64,
    /// Sorted γ = 0 bath eigenvalues (the diagonal values).
    pub energies: Vec<f64>,
}

/// Coupling at which the bath ground state hops from crossing count j to
/// j + 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingPoint {
    /// Crossing index: the ground state moves from level j to level j + 1.
    pub j: usize,
    /// λ at the crossing, N/(N - 2j - 1).
    pub lambda: f64,
}

/// γ = 0 bath spectra over a λ grid plus the ground-level crossing points
/// up to the largest λ of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSweep {
    /// One spectrum per requested λ.
    pub rows: Vec<SpectrumRow>,
    /// Crossings between adjacent ground candidates.
    pub crossings: Vec<CrossingPoint>,
}

/// Sweep the bath spectrum over couplings.
pub fn spectrum_sweep(n_spins: usize, lambda_grid: &[f64]) -> Result<SpectrumSweep, LmgError> {
    if n_spins < 2 {
        return Err(LmgError::InvalidParameter { reason: "need at least two bath spins" });
    }
    if lambda_grid.is_empty() {
        return Err(LmgError::InvalidParameter { reason: "lambda grid must be non-empty" });
    }
    let mut rows = Vec::with_capacity(lambda_grid.len());
    let mut lambda_max = f64::NEG_INFINITY;
    for &lambda in lambda_grid {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(LmgError::InvalidParameter {
                reason: "lambda must be non-negative and finite",
            });
        }
        lambda_max = lambda_max.max(lambda);
        let n = n_spins as i64;
        let mut energies: Vec<f64> = (0..=n_spins)
            .map(|level| bath_diagonal(lambda, n_spins, 2 * level as i64 - n))
            .collect();
        energies.sort_by(|a, b| a.partial_cmp(b).expect("bath energies are finite"));
        rows.push(SpectrumRow { lambda, energies });
    }

    // adjacent-candidate crossings: E_b(m_j) = E_b(m_{j+1}) at
    // λ = N/(N - 2j - 1)
    let mut crossings = Vec::new();
    let n = n_spins as f64;
    for j in 0..n_spins {
        let denom = n - 2.0 * j as f64 - 1.0;
        if denom <= 0.0 {
            break;
        }
        let lambda = n / denom;
        if lambda <= lambda_max {
            crossings.push(CrossingPoint { j, lambda });
        } else {
            break;
        }
    }
    Ok(SpectrumSweep { rows, crossings })
}
