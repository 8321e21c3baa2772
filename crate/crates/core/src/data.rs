//! Daily price series: CSV ingestion, GBM moment estimates and the
//! empirical tamed path built from observed log returns.

use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::emo::{apply_emo, EmoOutput};
use crate::error::{Error, Result};
use crate::stochastic::{generate_wiener, ItoDecomposition, SamplePath, TimeGrid};

pub const TRADING_DAYS_PER_YEAR: f64 = 252.0;
const DATE_FORMAT: &str = "%Y-%m-%d";

/// Closing prices on strictly increasing dates. Gaps (weekends, holidays)
/// are allowed; each row counts as one step of `dt_years`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    closes: Vec<f64>,
    dt_years: f64,
}

impl PriceSeries {
    pub fn new(dates: Vec<NaiveDate>, closes: Vec<f64>, dt_years: f64) -> Result<Self> {
        if dates.len() != closes.len() {
            return Err(Error::InvalidArgument(format!(
                "{} dates but {} closes",
                dates.len(),
                closes.len()
            )));
        }
        if !(dt_years > 0.0 && dt_years.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt_years}")));
        }
        for (k, &c) in closes.iter().enumerate() {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidArgument(format!("close #{k} is not positive: {c}")));
            }
        }
        if let Some(k) = dates.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(format!(
                "dates not strictly increasing at {}",
                dates[k + 1]
            )));
        }
        Ok(PriceSeries { dates, closes, dt_years })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &[f64] {
        &self.closes
    }

    pub fn dt_years(&self) -> f64 {
        self.dt_years
    }

    pub fn with_dt_years(self, dt_years: f64) -> Result<Self> {
        PriceSeries::new(self.dates, self.closes, dt_years)
    }

    pub fn len(&self) -> usize {
        self.closes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty()
    }

    pub fn log_returns(&self) -> Vec<f64> {
        self.closes.windows(2).map(|w| (w[1] / w[0]).ln()).collect()
    }

    /// Last `n` observations.
    pub fn tail(&self, n: usize) -> Result<PriceSeries> {
        if n > self.len() {
            return Err(Error::InvalidArgument(format!(
                "window of {n} exceeds series length {}",
                self.len()
            )));
        }
        let from = self.len() - n;
        Ok(PriceSeries {
            dates: self.dates[from..].to_vec(),
            closes: self.closes[from..].to_vec(),
            dt_years: self.dt_years,
        })
    }

    /// Writes `Date,Close` rows; closes use the shortest exact decimal form.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["Date", "Close"])?;
        for (d, c) in self.dates.iter().zip(&self.closes) {
            w.write_record([d.format(DATE_FORMAT).to_string(), c.to_string()])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Parses a `Date,Close` CSV with ISO dates. Rows must already be sorted.
pub fn load_price_csv<R: Read>(source: R) -> Result<PriceSeries> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let headers = rdr.headers().map_err(|e| parse_error(1, e))?.clone();
    if headers.len() != 2 || &headers[0] != "Date" || &headers[1] != "Close" {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header 'Date,Close', found '{}'", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut dates: Vec<NaiveDate> = Vec::new();
    let mut closes = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(line, e)
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let fail = |message: String| Error::Parse { line, message };
        if rec.len() != 2 {
            return Err(fail(format!("expected 2 columns, found {}", rec.len())));
        }
        let date = NaiveDate::parse_from_str(rec[0].trim(), DATE_FORMAT)
            .map_err(|e| fail(format!("bad date '{}': {e}", &rec[0])))?;
        let close: f64 = rec[1]
            .trim()
            .parse()
            .map_err(|e| fail(format!("bad close '{}': {e}", &rec[1])))?;
        if !(close > 0.0 && close.is_finite()) {
            return Err(fail(format!("close must be positive, got {close}")));
        }
        if let Some(&prev) = dates.last() {
            if date == prev {
                return Err(fail(format!("duplicate date {date}")));
            }
            if date < prev {
                return Err(fail(format!("date {date} is earlier than {prev}")));
            }
        }
        dates.push(date);
        closes.push(close);
    }
    PriceSeries::new(dates, closes, 1.0 / TRADING_DAYS_PER_YEAR)
}

fn parse_error(line: usize, e: csv::Error) -> Error {
    Error::Parse { line, message: e.to_string() }
}

pub fn load_price_csv_file(path: impl AsRef<Path>) -> Result<PriceSeries> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_price_csv(std::io::BufReader::new(file))
}

/// Moment estimates of GBM drift and volatility, annualised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmEstimate {
    pub mu_hat: f64,
    pub sigma_hat: f64,
    pub n_obs: usize,
}

impl GbmEstimate {
    pub fn q(&self) -> f64 {
        self.mu_hat - 0.5 * self.sigma_hat * self.sigma_hat
    }
}

pub fn estimate_gbm(series: &PriceSeries) -> Result<GbmEstimate> {
    if series.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 prices, got {}",
            series.len()
        )));
    }
    let rho = series.log_returns();
    let n = rho.len() as f64;
    let mean = rho.iter().sum::<f64>() / n;
    let var = rho.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let dt = series.dt_years();
    let sigma_hat = (var / dt).sqrt();
    Ok(GbmEstimate {
        mu_hat: mean / dt + 0.5 * sigma_hat * sigma_hat,
        sigma_hat,
        n_obs: series.len(),
    })
}

/// Source of the Wiener path that drives the empirical tamed process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WienerSource {
    /// Standardised log-return residuals of the window; no randomness.
    #[default]
    DataImplied,
    /// A fresh Wiener path from the seed.
    Simulated,
}

/// Tamed path `Z = (q delta W_T + sigma W_delta) / T^beta` over the last
/// `window_days` prices, with `(mu, sigma)` estimated on the whole series.
///
/// Time is measured in years, so `T = (window_days - 1) * dt`.
pub fn empirical_z_path(
    series: &PriceSeries,
    beta: f64,
    window_days: usize,
    seed: u64,
    source: WienerSource,
) -> Result<EmoOutput> {
    if window_days < 2 {
        return Err(Error::InvalidArgument(format!("window must hold at least 2 prices, got {window_days}")));
    }
    let est = estimate_gbm(series)?;
    let scale = series.log_returns().iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if est.sigma_hat * series.dt_years().sqrt() <= 1e-12 * scale {
        return Err(Error::DegenerateEnsemble(
            "estimated volatility is zero to rounding; returns cannot be standardised".into(),
        ));
    }
    let window = series.tail(window_days)?;
    let dt = series.dt_years();
    let grid = TimeGrid::new(0.0, (window_days - 1) as f64 * dt, window_days - 1)?;
    let q = est.q();
    let w = match source {
        WienerSource::DataImplied => {
            let mut acc = 0.0;
            let mut values = Vec::with_capacity(window_days);
            values.push(0.0);
            for rho in window.log_returns() {
                acc += (rho - q * dt) / est.sigma_hat;
                values.push(acc);
            }
            SamplePath::new(grid, values, seed)?
        }
        WienerSource::Simulated => generate_wiener(&grid, seed),
    };
    let drift = SamplePath::new(grid, (0..grid.len()).map(|k| q * grid.elapsed(k)).collect(), seed)?;
    let noise = w.map(|x| est.sigma_hat * x);
    let decomp = ItoDecomposition::new(0.0, drift, noise)?;
    apply_emo(&decomp, beta, w.last())
}
