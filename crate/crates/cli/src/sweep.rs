//! Generic parameter sweeps: one model family, a grid of (coupling, N)
//! points, deterministic CSV/JSON output, and a point cache keyed by the
//! config hash.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use quench_core::fermi::{
    delta_h_closed_form, delta_impurity_basis, first_threshold_time, survival_series_det,
    t_min, trap_overlap_coeffs, FermiError, ImpurityQuench, TrapQuench,
};
use quench_core::lmg::{quench_weights, LmgSpec};
use quench_core::qsl::{fermi_report, lmg_report, QslReport};
use quench_core::series::{uniform_grid, SurvivalSeries};

use crate::config::{Model, RunConfig};
use crate::csvio::{Cell, CsvTable};
use crate::manifest::Manifest;

/// Scalar outputs of one parameter point.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScalarOutputs {
    pub f_min: f64,
    pub t_min: f64,
    pub t_reference: f64,
    pub bures_angle: f64,
    pub delta_h_closed_form: Option<f64>,
    pub delta_h_brute_force: f64,
    pub mean_work: f64,
    pub mean_work_closed_form: Option<f64>,
    pub tau_qsl_closed_form: Option<f64>,
    pub tau_qsl_brute_force: f64,
    pub tau_work: Option<f64>,
    pub tau_ml: f64,
}

impl ScalarOutputs {
    fn from_report(r: &QslReport) -> Self {
        Self {
            f_min: r.f_min,
            t_min: r.t_reference,
            t_reference: r.t_reference,
            bures_angle: r.bures_angle,
            delta_h_closed_form: r.delta_h_closed_form,
            delta_h_brute_force: r.delta_h_brute_force,
            mean_work: r.mean_work,
            mean_work_closed_form: r.mean_work_closed_form,
            tau_qsl_closed_form: r.tau_qsl_closed_form,
            tau_qsl_brute_force: r.tau_qsl_brute_force,
            tau_work: r.tau_work,
            tau_ml: r.tau_ml,
        }
    }
}

/// Minimum-time output for one threshold.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ThresholdOutput {
    pub theta: f64,
    /// First crossing time of the determinant survival (internal units);
    /// absent when the threshold is below the dynamical floor.
    pub t_threshold: Option<f64>,
    /// Closed-form root for the trap quench, in period units.
    pub t_closed_form: Option<f64>,
    /// Large-N branch for the trap quench, in period units.
    pub t_large_n: Option<f64>,
}

/// χ(t) series of one point.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeriesData {
    pub times: Vec<f64>,
    pub chi_re: Vec<f64>,
    pub chi_im: Vec<f64>,
}

impl SeriesData {
    fn from_series(s: &SurvivalSeries) -> Self {
        Self {
            times: s.times().to_vec(),
            chi_re: s.chi().iter().map(|z| z.re).collect(),
            chi_im: s.chi().iter().map(|z| z.im).collect(),
        }
    }
}

/// Everything computed for one parameter point.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PointRecord {
    pub coupling: f64,
    pub particles: usize,
    pub scalars: ScalarOutputs,
    pub thresholds: Vec<ThresholdOutput>,
    pub series: Option<SeriesData>,
}

/// A failed parameter point with its cause.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PointFailure {
    pub coupling: f64,
    pub particles: usize,
    pub cause: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Cache {
    config_hash: String,
    records: Vec<PointRecord>,
}

/// Errors that abort a run before any computation (exit code 2 territory
/// is handled by the caller; this is IO).
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Outcome of a run.
#[derive(Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub points_total: usize,
    pub points_failed: usize,
    pub failures: Vec<PointFailure>,
    pub files: Vec<String>,
    pub reused_cached: usize,
    /// Successful records, sorted by parameter point.
    pub records: Vec<PointRecord>,
}

fn time_grid_for(cfg: &RunConfig, coupling: f64, particles: usize) -> Result<Vec<f64>, String> {
    let points = cfg.time.points;
    if cfg.time.extent > 0.0 {
        return Ok(uniform_grid(cfg.time.extent, points));
    }
    let extent = match cfg.model {
        Model::FermiTrap => std::f64::consts::PI / coupling,
        Model::FermiImpurity => 2.0 * std::f64::consts::PI,
        Model::Lmg => {
            let spec = LmgSpec::new(coupling, particles).map_err(|e| e.to_string())?;
            *spec.time_grid().last().expect("default grid is non-empty")
        }
    };
    Ok(uniform_grid(extent, points))
}

/// Compute one parameter point.
pub fn compute_point(
    cfg: &RunConfig,
    coupling: f64,
    particles: usize,
) -> Result<PointRecord, String> {
    let grid = time_grid_for(cfg, coupling, particles)?;
    let want_series = cfg.run.emit_series;
    match cfg.model {
        Model::FermiTrap => {
            let mut spec = TrapQuench::new(coupling, particles).map_err(|e| e.to_string())?;
            if cfg.run.basis_cutoff > 0 {
                spec = spec.with_basis_cutoff(cfg.run.basis_cutoff).map_err(|e| e.to_string())?;
            }
            let basis = trap_overlap_coeffs(spec.eta(), spec.basis_cutoff())
                .map_err(|e| e.to_string())?;
            let series =
                survival_series_det(&basis, particles, &grid).map_err(|e| e.to_string())?;
            let dh = delta_h_closed_form(coupling, particles).map_err(|e| e.to_string())?;
            let printed_work = particles as f64 / 4.0 * (coupling * coupling - 1.0);
            let report =
                fermi_report(&basis, particles, &series, Some(dh.exact), Some(printed_work))
                    .map_err(|e| e.to_string())?;
            let mut thresholds = Vec::new();
            for &theta in &cfg.run.thresholds {
                let analytic = match t_min(coupling, particles, theta) {
                    Ok(t) => Some(t),
                    Err(FermiError::BelowDynamicalFloor { .. }) => None,
                    Err(e) => return Err(e.to_string()),
                };
                let det_root = first_threshold_time(&basis, particles, theta, &grid)
                    .map_err(|e| e.to_string())?;
                thresholds.push(ThresholdOutput {
                    theta,
                    t_threshold: det_root,
                    t_closed_form: analytic.map(|t| t.numeric),
                    t_large_n: analytic.map(|t| t.large_n),
                });
            }
            Ok(PointRecord {
                coupling,
                particles,
                scalars: ScalarOutputs::from_report(&report),
                thresholds,
                series: want_series.then(|| SeriesData::from_series(&series)),
            })
        }
        Model::FermiImpurity => {
            let mut spec = ImpurityQuench::new(coupling, particles).map_err(|e| e.to_string())?;
            if cfg.run.basis_cutoff > 0 {
                spec = spec.with_basis_cutoff(cfg.run.basis_cutoff).map_err(|e| e.to_string())?;
            }
            let basis = delta_impurity_basis(spec.kappa(), particles, spec.basis_cutoff())
                .map_err(|e| e.to_string())?;
            let series =
                survival_series_det(&basis, particles, &grid).map_err(|e| e.to_string())?;
            let report = fermi_report(&basis, particles, &series, None, None)
                .map_err(|e| e.to_string())?;
            let mut thresholds = Vec::new();
            for &theta in &cfg.run.thresholds {
                let det_root = first_threshold_time(&basis, particles, theta, &grid)
                    .map_err(|e| e.to_string())?;
                if det_root.is_none() {
                    let fmin =
                        series.fidelity().iter().cloned().fold(f64::INFINITY, f64::min);
                    return Err(format!(
                        "threshold {theta} below dynamical floor (min F = {fmin:.6})"
                    ));
                }
                thresholds.push(ThresholdOutput {
                    theta,
                    t_threshold: det_root,
                    t_closed_form: None,
                    t_large_n: None,
                });
            }
            Ok(PointRecord {
                coupling,
                particles,
                scalars: ScalarOutputs::from_report(&report),
                thresholds,
                series: want_series.then(|| SeriesData::from_series(&series)),
            })
        }
        Model::Lmg => {
            let spec = LmgSpec::new(coupling, particles)
                .and_then(|s| s.with_time_grid(grid))
                .map_err(|e| e.to_string())?;
            let weights = quench_weights(&spec).map_err(|e| e.to_string())?;
            let report = lmg_report(&weights, &spec).map_err(|e| e.to_string())?;
            let series = want_series
                .then(|| {
                    let chi: Vec<_> =
                        spec.time_grid().iter().map(|&t| weights.chi_at(t)).collect();
                    SurvivalSeries::new(spec.time_grid().to_vec(), chi)
                })
                .transpose()
                .map_err(|e| e.to_string())?;
            Ok(PointRecord {
                coupling,
                particles,
                scalars: ScalarOutputs::from_report(&report),
                thresholds: Vec::new(),
                series: series.as_ref().map(SeriesData::from_series),
            })
        }
    }
}

fn point_key(coupling: f64, particles: usize) -> (u64, usize) {
    (coupling.to_bits(), particles)
}

/// Execute a sweep: compute all points (reusing an intact cache), then
/// write CSV families, the QSL-report dump, the manifest, and the cache.
pub fn run(cfg: &RunConfig, out_override: Option<&Path>, jobs_override: Option<usize>) -> Result<RunOutcome, RunError> {
    let out_dir = out_override
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&cfg.run.out_dir));
    std::fs::create_dir_all(&out_dir)?;
    let hash = cfg.hash();

    // sorted parameter points
    let mut points: Vec<(f64, usize)> = Vec::new();
    for &c in &cfg.grid.coupling {
        for &n in &cfg.grid.particles {
            points.push((c, n));
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    points.dedup_by(|a, b| point_key(a.0, a.1) == point_key(b.0, b.1));

    // intact cache: same config hash
    let cache_path = out_dir.join("cache.json");
    let mut cached: BTreeMap<(u64, usize), PointRecord> = BTreeMap::new();
    if let Ok(text) = std::fs::read_to_string(&cache_path) {
        if let Ok(cache) = serde_json::from_str::<Cache>(&text) {
            if cache.config_hash == hash {
                for r in cache.records {
                    cached.insert(point_key(r.coupling, r.particles), r);
                }
            }
        }
    }
    let reused_cached = points
        .iter()
        .filter(|&&(c, n)| cached.contains_key(&point_key(c, n)))
        .count();

    let jobs = jobs_override.unwrap_or(cfg.run.jobs);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool construction");
    let results: Vec<Result<PointRecord, PointFailure>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(c, n)| {
                if let Some(r) = cached.get(&point_key(c, n)) {
                    return Ok(r.clone());
                }
                compute_point(cfg, c, n).map_err(|cause| PointFailure {
                    coupling: c,
                    particles: n,
                    cause,
                })
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(f) => failures.push(f),
        }
    }

    let coupling_name = cfg.model.coupling_name();
    let mut files = Vec::new();

    // scalars family
    let mut scalars = CsvTable::new(vec![
        coupling_name,
        "particles",
        "f_min",
        "t_min",
        "bures_angle",
        "delta_h_closed_form",
        "delta_h_brute_force",
        "mean_work",
        "mean_work_closed_form",
        "tau_qsl_closed_form",
        "tau_qsl_brute_force",
        "tau_work",
        "tau_ml",
    ]);
    for r in &records {
        scalars.push(vec![
            Cell::Float(r.coupling),
            Cell::Int(r.particles as i64),
            Cell::Float(r.scalars.f_min),
            Cell::Float(r.scalars.t_min),
            Cell::Float(r.scalars.bures_angle),
            Cell::MaybeFloat(r.scalars.delta_h_closed_form),
            Cell::Float(r.scalars.delta_h_brute_force),
            Cell::Float(r.scalars.mean_work),
            Cell::MaybeFloat(r.scalars.mean_work_closed_form),
            Cell::MaybeFloat(r.scalars.tau_qsl_closed_form),
            Cell::Float(r.scalars.tau_qsl_brute_force),
            Cell::MaybeFloat(r.scalars.tau_work),
            Cell::Float(r.scalars.tau_ml),
        ]);
    }
    scalars.write_to(&out_dir.join("scalars.csv"))?;
    files.push("scalars.csv".into());

    // thresholds family (fermi models with thresholds configured)
    if records.iter().any(|r| !r.thresholds.is_empty()) {
        let mut table = CsvTable::new(vec![
            coupling_name,
            "particles",
            "theta",
            "t_threshold",
            "t_closed_form",
            "t_large_n",
        ]);
        for r in &records {
            for th in &r.thresholds {
                table.push(vec![
                    Cell::Float(r.coupling),
                    Cell::Int(r.particles as i64),
                    Cell::Float(th.theta),
                    Cell::MaybeFloat(th.t_threshold),
                    Cell::MaybeFloat(th.t_closed_form),
                    Cell::MaybeFloat(th.t_large_n),
                ]);
            }
        }
        table.write_to(&out_dir.join("thresholds.csv"))?;
        files.push("thresholds.csv".into());
    }

    // series family
    if cfg.run.emit_series {
        let mut table = CsvTable::new(vec![
            coupling_name,
            "particles",
            "t",
            "chi_re",
            "chi_im",
            "fidelity",
        ]);
        for r in &records {
            if let Some(s) = &r.series {
                for i in 0..s.times.len() {
                    let f = s.chi_re[i] * s.chi_re[i] + s.chi_im[i] * s.chi_im[i];
                    table.push(vec![
                        Cell::Float(r.coupling),
                        Cell::Int(r.particles as i64),
                        Cell::Float(s.times[i]),
                        Cell::Float(s.chi_re[i]),
                        Cell::Float(s.chi_im[i]),
                        Cell::Float(f),
                    ]);
                }
            }
        }
        table.write_to(&out_dir.join("series.csv"))?;
        files.push("series.csv".into());
    }

    // QSL report dump
    let reports: Vec<serde_json::Value> = records
        .iter()
        .map(|r| {
            serde_json::json!({
                "coupling": r.coupling,
                "particles": r.particles,
                "report": r.scalars,
            })
        })
        .collect();
    std::fs::write(
        out_dir.join("qsl_reports.json"),
        serde_json::to_string_pretty(&reports)?,
    )?;
    files.push("qsl_reports.json".into());

    // cache and manifest
    let cache = Cache { config_hash: hash.clone(), records: records.clone() };
    std::fs::write(&cache_path, serde_json::to_string(&cache)?)?;
    files.push("cache.json".into());

    let manifest = Manifest::new(
        format!("run:{}", cfg.model),
        hash,
        serde_json::to_value(cfg)?,
        files.clone(),
        points.len(),
        failures.clone(),
    );
    manifest.write_to(&out_dir.join("manifest.json"))?;
    files.push("manifest.json".into());

    Ok(RunOutcome {
        out_dir,
        points_total: points.len(),
        points_failed: failures.len(),
        failures,
        files,
        reused_cached,
        records,
    })
}
