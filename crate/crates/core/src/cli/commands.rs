use std::cell::RefCell;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use super::svg::{LineChart, Series};
use super::CliError;
use crate::data::{empirical_z_path, estimate_gbm, load_price_csv_file, WienerSource, TRADING_DAYS_PER_YEAR};
use crate::emo::inhibition_degree;
use crate::ergodicity::{
    covariance_curve, detect_recurrence, mean_ergodicity_test, CovarianceCurve, EnsembleConfig, Pipeline,
    DEFAULT_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::io::{self, write_atomic, write_json_atomic};
use crate::pde::{solve_ergodic_bs, ErgodicBsParams, PdeConfig, PdeGrid, Scheme, SmoothRegion};
use crate::stochastic::{log_price_ensemble, ProcessSpec, TimeGrid};

fn load_spec(path: &Path) -> Result<ProcessSpec> {
    ProcessSpec::from_json(&io::read_to_string(path)?)
}

fn write_text(out: &Path, name: &str, text: &str, files: &mut Vec<String>) -> Result<()> {
    write_atomic(out.join(name), text.as_bytes())?;
    files.push(name.to_string());
    Ok(())
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T, files: &mut Vec<String>) -> Result<()> {
    write_json_atomic(out.join(name), value)?;
    files.push(name.to_string());
    Ok(())
}

// ---- simulate ----

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Process spec JSON file.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 252)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateParams {
    pub spec: ProcessSpec,
    pub steps: usize,
    pub t_start: f64,
    pub horizon: f64,
    pub paths: usize,
}

impl SimulateArgs {
    pub(super) fn resolve(&self) -> Result<SimulateParams> {
        Ok(SimulateParams {
            spec: load_spec(&self.spec)?,
            steps: self.steps,
            t_start: self.t_start,
            horizon: self.horizon,
            paths: self.paths,
        })
    }
}

pub(super) fn simulate(p: &SimulateParams, seed: u64, out: &Path) -> Result<Vec<String>, CliError> {
    p.spec.validate()?;
    if p.paths == 0 {
        return Err(CliError::Usage("--paths must be at least 1".into()));
    }
    let grid = TimeGrid::new(p.t_start, p.horizon, p.steps)?;
    let ens = log_price_ensemble(&p.spec, &grid, p.paths, seed)?;
    let mut files = Vec::new();
    for (i, path) in ens.paths().iter().enumerate() {
        let name = if p.paths == 1 { "path.csv".to_string() } else { format!("path_{i:04}.csv") };
        write_text(out, &name, &io::path_csv(path), &mut files)?;
    }
    Ok(files)
}

// ---- ergotest ----

#[derive(Debug, Args)]
pub struct ErgotestArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Inhibition degree of the EMO (default 2).
    #[arg(long, conflicts_with = "alpha")]
    pub beta: Option<f64>,
    /// Derive the inhibition degree from a dependence exponent instead.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Comma-separated horizons.
    #[arg(long = "horizons", alias = "t-list", value_delimiter = ',', default_value = "50,100,200,400")]
    pub horizons: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 2.0)]
    pub steps_per_unit: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Test the raw log-price instead of its EMO image.
    #[arg(long, conflicts_with_all = ["beta", "alpha"])]
    pub no_emo: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgotestParams {
    pub spec: ProcessSpec,
    pub pipeline: Pipeline,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub horizons: Vec<f64>,
    pub n_paths: usize,
    pub steps_per_unit: f64,
    pub tol: f64,
}

impl ErgotestArgs {
    pub(super) fn resolve(&self) -> Result<ErgotestParams> {
        let pipeline = if self.no_emo {
            Pipeline::RawLogPrice
        } else {
            let beta = match (self.beta, self.alpha) {
                (_, Some(a)) => inhibition_degree(a)?.beta,
                (Some(b), None) => b,
                (None, None) => 2.0,
            };
            Pipeline::Emo { beta }
        };
        Ok(ErgotestParams {
            spec: load_spec(&self.spec)?,
            pipeline,
            alpha: self.alpha,
            horizons: self.horizons.clone(),
            n_paths: self.paths,
            steps_per_unit: self.steps_per_unit,
            tol: self.tol,
        })
    }
}

pub(super) fn ergotest(p: &ErgotestParams, seed: u64, out: &Path) -> Result<Vec<String>, CliError> {
    p.spec.validate()?;
    let config = EnsembleConfig { n_paths: p.n_paths, steps_per_unit: p.steps_per_unit, seed };
    let last_curve: RefCell<Option<CovarianceCurve>> = RefCell::new(None);
    let t_max = p.horizons.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let report = mean_ergodicity_test(
        |t| {
            let ens = p.pipeline.ensemble(&p.spec, t, &config)?;
            if t == t_max {
                *last_curve.borrow_mut() = Some(covariance_curve(&ens)?);
            }
            Ok(ens)
        },
        &p.horizons,
        p.tol,
    )?;
    let mut files = Vec::new();
    write_json(out, "report.json", &report, &mut files)?;
    if let Some(curve) = last_curve.into_inner() {
        write_text(out, "covariance.csv", &io::covariance_csv(&curve), &mut files)?;
    }
    let chart = LineChart {
        title: format!("Covariance functional, {} ({:?})", p.spec.name(), report.verdict),
        x_label: "T".into(),
        y_label: "|F(T)| (log10)".into(),
        series: vec![Series::new(
            "|F(T)|",
            report.functional_values.iter().map(|&(t, f)| (t, f.abs())).collect(),
        )],
        log_y: true,
        ..Default::default()
    };
    write_text(out, "functional.svg", &chart.render(), &mut files)?;
    Ok(files)
}

// ---- fig2 ----

#[derive(Debug, Args)]
pub struct Fig2Args {
    /// Date,Close CSV.
    #[arg(long)]
    pub prices: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Number of most recent prices in the window.
    #[arg(long, default_value_t = 300)]
    pub window: usize,
    /// Drive Z with a simulated Wiener path instead of the data residuals.
    #[arg(long)]
    pub simulated_w: bool,
    #[arg(long, default_value_t = 1.0 / TRADING_DAYS_PER_YEAR)]
    pub dt_years: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2Params {
    pub prices: PathBuf,
    pub beta: f64,
    pub window: usize,
    pub wiener: WienerSource,
    pub dt_years: f64,
}

impl Fig2Args {
    pub(super) fn resolve(&self) -> Result<Fig2Params> {
        Ok(Fig2Params {
            prices: self.prices.clone(),
            beta: self.beta,
            window: self.window,
            wiener: if self.simulated_w { WienerSource::Simulated } else { WienerSource::DataImplied },
            dt_years: self.dt_years,
        })
    }
}

pub(super) fn fig2(p: &Fig2Params, seed: u64, out: &Path) -> Result<Vec<String>, CliError> {
    let series = load_price_csv_file(&p.prices)?.with_dt_years(p.dt_years)?;
    let estimate = estimate_gbm(&series)?;
    let z = empirical_z_path(&series, p.beta, p.window, seed, p.wiener)?;
    let mut files = Vec::new();
    write_text(out, "z_path.csv", &io::emo_csv(&z), &mut files)?;
    write_json(out, "z_path.json", &z.sidecar(), &mut files)?;
    write_json(out, "estimate.json", &estimate, &mut files)?;
    let g = z.z_path.grid();
    let chart = LineChart {
        title: format!("Z path, beta = {}, {}-day window", p.beta, p.window),
        x_label: "delta (years)".into(),
        y_label: "Z".into(),
        series: vec![Series::new(
            "Z",
            (0..g.len()).map(|k| g.elapsed(k)).zip(z.z_path.values().iter().copied()).collect(),
        )],
        zero_line: true,
        ..Default::default()
    };
    write_text(out, "fig2.svg", &chart.render(), &mut files)?;
    Ok(files)
}

// ---- pde ----

#[derive(Debug, Args)]
pub struct PdeArgs {
    /// JSON with r, K, beta, mu, sigma and optionally the grid fields.
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub z_min: Option<f64>,
    #[arg(long)]
    pub z_max: Option<f64>,
    #[arg(long)]
    pub n_z: Option<usize>,
    #[arg(long)]
    pub delta_min: Option<f64>,
    #[arg(long = "delta-t")]
    pub delta_t: Option<f64>,
    #[arg(long)]
    pub n_delta: Option<usize>,
    #[arg(long, default_value = "implicit")]
    pub scheme: Scheme,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeParams {
    #[serde(flatten)]
    pub config: PdeConfig,
    pub scheme: Scheme,
}

#[derive(Deserialize)]
struct PartialGrid {
    z_min: Option<f64>,
    z_max: Option<f64>,
    n_z: Option<usize>,
    delta_min: Option<f64>,
    #[serde(rename = "delta_T")]
    delta_t: Option<f64>,
    n_delta: Option<usize>,
}

impl PdeArgs {
    pub(super) fn resolve(&self) -> Result<PdeParams> {
        let text = io::read_to_string(&self.params)?;
        let params: ErgodicBsParams = serde_json::from_str(&text)?;
        let file: PartialGrid = serde_json::from_str(&text)?;
        let delta_t = self.delta_t.or(file.delta_t).unwrap_or(1.0);
        let grid = PdeGrid {
            z_min: self.z_min.or(file.z_min).unwrap_or(-8.0),
            z_max: self.z_max.or(file.z_max).unwrap_or(8.0),
            n_z: self.n_z.or(file.n_z).unwrap_or(320),
            delta_min: self.delta_min.or(file.delta_min).unwrap_or(delta_t / 100.0),
            delta_t,
            n_delta: self.n_delta.or(file.n_delta).unwrap_or(200),
        };
        let config = PdeConfig { params, grid };
        config.validate()?;
        Ok(PdeParams { config, scheme: self.scheme })
    }
}

#[derive(Serialize)]
struct ResidualReport {
    scheme: Scheme,
    h: f64,
    d_delta: f64,
    max_residual: f64,
    smooth_region: SmoothRegion,
    smooth_region_residual: f64,
}

pub(super) fn pde(p: &PdeParams, out: &Path) -> Result<Vec<String>, CliError> {
    let sol = solve_ergodic_bs(&p.config.params, &p.config.grid, p.scheme)?;
    let g = sol.grid;
    let region = SmoothRegion::default_for(&g);
    let mut files = Vec::new();
    write_text(out, "solution.csv", &io::pde_csv(&sol), &mut files)?;
    let report = ResidualReport {
        scheme: p.scheme,
        h: g.dz(),
        d_delta: g.d_delta(),
        max_residual: sol.max_residual,
        smooth_region: region,
        smooth_region_residual: sol.max_residual_where(|z, d| region.contains(z, d)),
    };
    write_json(out, "residual.json", &report, &mut files)?;
    let z = sol.z_nodes();
    let series = [0, g.n_delta / 2, g.n_delta]
        .into_iter()
        .map(|j| {
            Series::new(
                format!("delta = {}", super::svg::tick_label(g.delta(j))),
                z.iter().copied().zip(sol.slice(j).iter().copied()).collect(),
            )
        })
        .collect();
    let chart = LineChart {
        title: "Ergodic Black-Scholes call price C(z, delta)".into(),
        x_label: "z".into(),
        y_label: "C".into(),
        series,
        ..Default::default()
    };
    write_text(out, "slice.svg", &chart.render(), &mut files)?;
    Ok(files)
}

// ---- recurrence ----

#[derive(Debug, Args)]
pub struct RecurrenceArgs {
    /// t,value CSV on a uniform time axis.
    #[arg(long)]
    pub path: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceParams {
    pub path: PathBuf,
    pub level: f64,
}

impl RecurrenceArgs {
    pub(super) fn resolve(&self) -> Result<RecurrenceParams> {
        if !self.level.is_finite() {
            return Err(Error::InvalidArgument("level must be finite".into()));
        }
        Ok(RecurrenceParams { path: self.path.clone(), level: self.level })
    }
}

pub(super) fn recurrence(p: &RecurrenceParams, out: &Path) -> Result<Vec<String>, CliError> {
    let path = io::read_path_csv_file(&p.path)?;
    let record = detect_recurrence(&path, p.level);
    let mut files = Vec::new();
    write_json(out, "recurrence.json", &record, &mut files)?;
    Ok(files)
}
