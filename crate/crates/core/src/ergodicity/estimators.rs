use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stochastic::{PathEnsemble, SamplePath};

/// `(1/T) int_0^T X_t dt` by the trapezoid rule.
pub fn time_average(path: &SamplePath) -> f64 {
    let v = path.values();
    if v.len() == 1 {
        return v[0];
    }
    let inner: f64 = v[1..v.len() - 1].iter().sum();
    let sum = 0.5 * (v[0] + v[v.len() - 1]) + inner;
    sum / (v.len() - 1) as f64
}

/// Sample mean and standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_samples(samples: impl IntoIterator<Item = f64>) -> Result<Self> {
        let xs: Vec<f64> = samples.into_iter().collect();
        if xs.is_empty() {
            return Err(Error::DegenerateEnsemble("no samples".into()));
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std_error = if xs.len() > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Ok(Estimate { mean, std_error })
    }

    /// True when `target` lies within `k` standard errors of the mean.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// Ensemble mean of `X_{t_k}` with its standard error.
pub fn ensemble_average(ensemble: &PathEnsemble, t_index: usize) -> Result<Estimate> {
    if ensemble.is_empty() {
        return Err(Error::DegenerateEnsemble("empty ensemble".into()));
    }
    if t_index >= ensemble.grid().len() {
        return Err(Error::InvalidArgument(format!(
            "grid index {t_index} out of range (grid has {} nodes)",
            ensemble.grid().len()
        )));
    }
    Estimate::from_samples(ensemble.slice(t_index))
}

/// `Cov_yy(tau)`, taken as the ensemble variance of `Y_tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceCurve {
    lags: Vec<f64>,
    cov: Vec<f64>,
}

impl CovarianceCurve {
    pub fn new(lags: Vec<f64>, cov: Vec<f64>) -> Result<Self> {
        if lags.len() != cov.len() || lags.is_empty() {
            return Err(Error::InvalidArgument(
                "lags and covariances must be non-empty and equally long".into(),
            ));
        }
        if lags.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("lags must be strictly increasing".into()));
        }
        if let Some(c) = cov.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite covariance {c}")));
        }
        Ok(CovarianceCurve { lags, cov })
    }

    /// Synthetic curve sampled from a closed form.
    pub fn from_fn(lags: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let cov = lags.iter().map(|&t| f(t)).collect();
        Self::new(lags, cov)
    }

    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    pub fn cov(&self) -> &[f64] {
        &self.cov
    }
}

/// Unbiased per-node variance of the ensemble, with lags measured from the
/// grid start.
pub fn covariance_curve(ensemble: &PathEnsemble) -> Result<CovarianceCurve> {
    if ensemble.len() < 2 {
        return Err(Error::DegenerateEnsemble(format!(
            "covariance needs at least 2 paths, got {}",
            ensemble.len()
        )));
    }
    let grid = ensemble.grid();
    let (means, _) = centered_moments(ensemble);
    let n = ensemble.len() as f64;
    let mut cov = vec![0.0; grid.len()];
    for p in ensemble.paths() {
        for (k, v) in p.values().iter().enumerate() {
            cov[k] += (v - means[k]).powi(2);
        }
    }
    for c in &mut cov {
        *c /= n - 1.0;
    }
    let lags = (0..grid.len()).map(|k| grid.elapsed(k)).collect();
    CovarianceCurve::new(lags, cov)
}

/// Per-node ensemble means, and the node count.
pub(crate) fn centered_moments(ensemble: &PathEnsemble) -> (Vec<f64>, usize) {
    let n_nodes = ensemble.grid().len();
    let mut means = vec![0.0; n_nodes];
    for p in ensemble.paths() {
        for (m, v) in means.iter_mut().zip(p.values()) {
            *m += v;
        }
    }
    let n = ensemble.len() as f64;
    for m in &mut means {
        *m /= n;
    }
    (means, n_nodes)
}

/// Trapezoid coefficients `(k, c_k)` such that
/// `(1/T) int_0^T (1 - tau/T) f(tau) dtau ~= sum c_k f(lag_k)`.
pub(crate) fn functional_weights(lags: &[f64], horizon: f64) -> Result<Vec<(usize, f64)>> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!("T must be positive, got {horizon}")));
    }
    let slack = 1e-9 * horizon.max(1.0);
    if lags[0].abs() > slack {
        return Err(Error::InvalidArgument(format!(
            "curve must start at lag 0, starts at {}",
            lags[0]
        )));
    }
    let last = lags[lags.len() - 1];
    if horizon > last + slack {
        return Err(Error::InvalidArgument(format!(
            "T = {horizon} lies beyond the curve support [0, {last}]"
        )));
    }
    let weight = |tau: f64| (1.0 - tau / horizon).max(0.0) / horizon;
    let mut coeffs = vec![0.0; lags.len()];
    for k in 0..lags.len() - 1 {
        let (a, b) = (lags[k], lags[k + 1]);
        if a >= horizon - slack {
            break;
        }
        if b <= horizon + slack {
            let h = b - a;
            coeffs[k] += 0.5 * h * weight(a);
            coeffs[k + 1] += 0.5 * h * weight(b);
        } else {
            // Partial segment [a, T]; the weight vanishes at T.
            let h = horizon - a;
            coeffs[k] += 0.5 * h * weight(a);
        }
    }
    Ok(coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0.0)
        .collect())
}

/// `(1/T) int_0^T (1 - tau/T) Cov(tau) dtau` by the trapezoid rule.
pub fn limer_functional(curve: &CovarianceCurve, horizon: f64) -> Result<f64> {
    let weights = functional_weights(curve.lags(), horizon)?;
    Ok(weights.iter().map(|&(k, c)| c * curve.cov()[k]).sum())
}

/// The functional of the ensemble's covariance curve at `T`, with a standard
/// error from the spread of per-path contributions.
pub fn limer_from_ensemble(ensemble: &PathEnsemble, horizon: f64) -> Result<Estimate> {
    let curve = covariance_curve(ensemble)?;
    let value = limer_functional(&curve, horizon)?;
    let weights = functional_weights(curve.lags(), horizon)?;
    let (means, _) = centered_moments(ensemble);
    let n = ensemble.len() as f64;
    let contributions: Vec<f64> = ensemble
        .paths()
        .iter()
        .map(|p| {
            weights
                .iter()
                .map(|&(k, c)| c * (p.values()[k] - means[k]).powi(2))
                .sum::<f64>()
        })
        .collect();
    let spread = Estimate::from_samples(contributions)?;
    Ok(Estimate {
        mean: value,
        std_error: spread.std_error * n / (n - 1.0),
    })
}
