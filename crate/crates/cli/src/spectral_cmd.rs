//! The `spectral` subcommand: transform a χ(t) series CSV into its
//! spectral function.

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use quench_core::series::SurvivalSeries;
use quench_core::spectral::{spectral_function, Window};

use crate::csvio::{Cell, CsvTable};

/// Errors of the spectral pipeline (exit code 1; malformed input is 2).
#[derive(Debug, thiserror::Error)]
pub enum SpectralCmdError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("series rejected: {0}")]
    Series(String),
    #[error("transform failed: {0}")]
    Transform(String),
}

/// Parse a CSV with columns `t`, `chi_re`, `chi_im` (any order, extra
/// columns ignored) holding exactly one series.
pub fn read_series_csv(path: &Path) -> Result<SurvivalSeries, SpectralCmdError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| SpectralCmdError::Input("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let idx = |name: &str| -> Result<usize, SpectralCmdError> {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| SpectralCmdError::Input(format!("missing column '{name}'")))
    };
    let (ti, ri, ii) = (idx("t")?, idx("chi_re")?, idx("chi_im")?);

    let mut times = Vec::new();
    let mut chi = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |i: usize| -> Result<f64, SpectralCmdError> {
            fields
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| {
                    SpectralCmdError::Input(format!("bad value on data line {}", lineno + 1))
                })
        };
        times.push(get(ti)?);
        chi.push(Complex64::new(get(ri)?, get(ii)?));
    }
    // a single series must be strictly ascending in t; files holding
    // several concatenated series fail this and are rejected
    SurvivalSeries::new(times, chi).map_err(|e| SpectralCmdError::Series(e.to_string()))
}

/// Transform `input` and write `<out>.csv` plus a JSON metadata sidecar
/// documenting the normalization. Returns the output path.
pub fn run_spectral(
    input: &Path,
    window: Window,
    out: Option<&Path>,
) -> Result<PathBuf, SpectralCmdError> {
    let series = read_series_csv(input)?;
    let spec = spectral_function(&series, window)
        .map_err(|e| SpectralCmdError::Transform(e.to_string()))?;

    let out_path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| input.with_extension("spectrum.csv"));
    let mut table = CsvTable::new(vec!["omega", "s"]);
    for (o, v) in spec.omegas.iter().zip(&spec.values) {
        table.push(vec![Cell::Float(*o), Cell::Float(*v)]);
    }
    table.write_to(&out_path)?;

    let meta = serde_json::json!({
        "input": input.display().to_string(),
        "window": match window { Window::None => "none", Window::Hann => "hann" },
        "normalization": "S(w_j) = 2 Re[dt * sum_{k=-(n-1)}^{n-1} chi(t_k) e^{i w_j t_k}], \
                          w_j = 2 pi j / ((2n-1) dt); chi(-t) = conj(chi(t))",
        "points": series.len(),
    });
    std::fs::write(
        out_path.with_extension("json"),
        serde_json::to_string_pretty(&meta).expect("metadata serializes"),
    )?;
    Ok(out_path)
}
