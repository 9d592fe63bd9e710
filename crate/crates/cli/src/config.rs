//! Run configuration: a human-editable TOML file with a documented schema.
//!
//! ```toml
//! schema-version = 1
//! model = "lmg"              # fermi-trap | fermi-impurity | lmg
//!
//! [grid]
//! coupling = [1.2, 1.6]      # eta (trap), kappa (impurity), lambda (lmg)
//! particles = [200, 400]
//!
//! [time]
//! points = 2048
//! extent = 0.0               # 0 = model default (one recurrence period)
//!
//! [run]
//! out-dir = "data/run"
//! jobs = 0                   # 0 = all cores
//! thresholds = [0.01]        # survival thresholds (fermi models)
//! basis-cutoff = 0           # 0 = model default
//! emit-series = true
//!
//! [tolerances]               # optional overrides, defaults otherwise
//! completeness = 1e-8
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use quench_core::tolerances::Tolerances;

/// Supported schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// Model family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    /// Trap-frequency quench of the free Fermi gas.
    #[serde(rename = "fermi-trap")]
    FermiTrap,
    /// Delta-impurity quench of the free Fermi gas.
    #[serde(rename = "fermi-impurity")]
    FermiImpurity,
    /// Spin impurity in an LMG bath.
    #[serde(rename = "lmg")]
    Lmg,
}

impl Model {
    /// Name of the coupling column for this model.
    pub fn coupling_name(self) -> &'static str {
        match self {
            Model::FermiTrap => "eta",
            Model::FermiImpurity => "kappa",
            Model::Lmg => "lambda",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Model::FermiTrap => "fermi-trap",
            Model::FermiImpurity => "fermi-impurity",
            Model::Lmg => "lmg",
        };
        f.write_str(s)
    }
}

/// Parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Coupling values (η, κ, or λ depending on the model).
    pub coupling: Vec<f64>,
    /// Particle / spin counts.
    pub particles: Vec<usize>,
}

/// Time-grid settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimeConfig {
    /// Number of grid points.
    pub points: usize,
    /// Grid extent; 0 means the model default (one recurrence period).
    pub extent: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { points: 1024, extent: 0.0 }
    }
}

/// Execution settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct RunSettings {
    /// Output directory.
    pub out_dir: String,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
    /// Survival thresholds θ for minimum-time outputs (fermi models).
    pub thresholds: Vec<f64>,
    /// Basis cutoff override; 0 uses the model default.
    pub basis_cutoff: usize,
    /// Whether the per-point time series is written.
    pub emit_series: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            out_dir: "data/run".into(),
            jobs: 0,
            thresholds: Vec::new(),
            basis_cutoff: 0,
            emit_series: true,
        }
    }
}

/// Optional per-field tolerance overrides.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ToleranceOverrides {
    pub hermiticity: Option<f64>,
    pub orthonormality: Option<f64>,
    pub eigen_residual: Option<f64>,
    pub trace_identity: Option<f64>,
    pub completeness: Option<f64>,
    pub fidelity_start: Option<f64>,
    pub overlap_slack: Option<f64>,
    pub overlap_clamp: Option<f64>,
    pub cutoff_drift: Option<f64>,
    pub unitary_det: Option<f64>,
    pub conservation: Option<f64>,
    pub weight_sum: Option<f64>,
}

impl ToleranceOverrides {
    /// Apply the overrides on top of the defaults.
    pub fn resolve(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(v) = self.hermiticity {
            t.hermiticity = v;
        }
        if let Some(v) = self.orthonormality {
            t.orthonormality = v;
        }
        if let Some(v) = self.eigen_residual {
            t.eigen_residual = v;
        }
        if let Some(v) = self.trace_identity {
            t.trace_identity = v;
        }
        if let Some(v) = self.completeness {
            t.completeness = v;
        }
        if let Some(v) = self.fidelity_start {
            t.fidelity_start = v;
        }
        if let Some(v) = self.overlap_slack {
            t.overlap_slack = v;
        }
        if let Some(v) = self.overlap_clamp {
            t.overlap_clamp = v;
        }
        if let Some(v) = self.cutoff_drift {
            t.cutoff_drift = v;
        }
        if let Some(v) = self.unitary_det {
            t.unitary_det = v;
        }
        if let Some(v) = self.conservation {
            t.conservation = v;
        }
        if let Some(v) = self.weight_sum {
            t.weight_sum = v;
        }
        t
    }
}

/// A fully described run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    /// Schema version; must equal [`SCHEMA_VERSION`].
    pub schema_version: u32,
    /// Model family.
    pub model: Model,
    /// Parameter grid.
    pub grid: GridConfig,
    /// Time-grid settings.
    #[serde(default)]
    pub time: TimeConfig,
    /// Execution settings.
    #[serde(default)]
    pub run: RunSettings,
    /// Tolerance overrides.
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
}

/// Configuration errors (CLI exit code 2).
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl RunConfig {
    /// Parse and validate a TOML config file.
    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = toml::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Validate invariants: supported schema, non-empty grids, sane grids.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Invalid(format!(
                "unsupported schema-version {} (expected {})",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        if self.grid.coupling.is_empty() {
            return Err(ConfigError::Invalid("grid.coupling must be non-empty".into()));
        }
        if self.grid.particles.is_empty() {
            return Err(ConfigError::Invalid("grid.particles must be non-empty".into()));
        }
        if self.grid.coupling.iter().any(|c| !c.is_finite()) {
            return Err(ConfigError::Invalid("grid.coupling must be finite".into()));
        }
        if self.time.points < 2 {
            return Err(ConfigError::Invalid("time.points must be at least 2".into()));
        }
        if !(self.time.extent >= 0.0) || !self.time.extent.is_finite() {
            return Err(ConfigError::Invalid("time.extent must be >= 0 and finite".into()));
        }
        for &t in &self.run.thresholds {
            if !(t > 0.0 && t <= 1.0) {
                return Err(ConfigError::Invalid("thresholds must lie in (0, 1]".into()));
            }
        }
        if self.run.out_dir.is_empty() {
            return Err(ConfigError::Invalid("run.out-dir must be non-empty".into()));
        }
        Ok(())
    }

    /// Canonical JSON of the fully resolved config; runs are reproducible
    /// from this alone.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON, hex-encoded.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_json().as_bytes());
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for b in digest {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }

    /// Round-trip through TOML (used by tests to assert losslessness).
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes to TOML")
    }
}
