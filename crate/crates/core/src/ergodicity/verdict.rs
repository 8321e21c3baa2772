use serde::{Deserialize, Serialize};

use super::estimators::{ensemble_average, limer_from_ensemble, time_average, Estimate};
use crate::error::{Error, Result};
use crate::stochastic::PathEnsemble;

/// Absolute tolerance on `|functional(T_max)|` used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    MeanErgodic,
    Inconclusive,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicityReport {
    /// `(T, functional(T))` for every tested horizon.
    pub functional_values: Vec<(f64, f64)>,
    pub functional_std_errors: Vec<f64>,
    /// Time average of the first path at the largest horizon.
    pub time_avg: f64,
    /// Spread of per-path time averages at the largest horizon.
    pub time_avg_std_error: f64,
    /// Ensemble mean at the end of the largest horizon.
    pub ensemble_avg: f64,
    pub ensemble_avg_std_error: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl ErgodicityReport {
    /// `|time_avg - ensemble_avg|` in units of the combined standard error.
    pub fn average_gap_in_std_errors(&self) -> f64 {
        let se = self.time_avg_std_error.hypot(self.ensemble_avg_std_error);
        (self.time_avg - self.ensemble_avg).abs() / se
    }

    pub fn last_functional(&self) -> f64 {
        self.functional_values[self.functional_values.len() - 1].1
    }
}

/// Verdict from the functional magnitudes at increasing horizons.
///
/// * mean ergodic: `|F(T_max)| < tol` and `|F|` non-increasing over the last
///   three horizons;
/// * rejected: `|F|` strictly increasing over the last three horizons;
/// * inconclusive: anything else.
pub fn classify(functional: &[f64], tol: f64) -> Verdict {
    let n = functional.len();
    debug_assert!(n >= 3);
    let tail: Vec<f64> = functional[n - 3..].iter().map(|f| f.abs()).collect();
    let non_increasing = tail[0] >= tail[1] && tail[1] >= tail[2];
    let increasing = tail[0] < tail[1] && tail[1] < tail[2];
    if non_increasing && tail[2] < tol {
        Verdict::MeanErgodic
    } else if increasing {
        Verdict::Rejected
    } else {
        Verdict::Inconclusive
    }
}

/// Evaluates the mean-ergodicity functional on ensembles produced for each
/// horizon in `horizons` and classifies the decay.
pub fn mean_ergodicity_test<F>(mut make_ensemble: F, horizons: &[f64], tol: f64) -> Result<ErgodicityReport>
where
    F: FnMut(f64) -> Result<PathEnsemble>,
{
    if horizons.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 horizons, got {}",
            horizons.len()
        )));
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("horizons must be strictly increasing".into()));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be >= 0, got {tol}")));
    }

    let mut functional_values = Vec::with_capacity(horizons.len());
    let mut functional_std_errors = Vec::with_capacity(horizons.len());
    let mut last = None;
    for &horizon in horizons {
        let ensemble = make_ensemble(horizon)?;
        let f = limer_from_ensemble(&ensemble, horizon)?;
        functional_values.push((horizon, f.mean));
        functional_std_errors.push(f.std_error);
        last = Some(ensemble);
    }
    let ensemble = last.expect("at least three horizons");

    let time_averages = Estimate::from_samples(ensemble.paths().iter().map(time_average))?;
    let time_avg = time_average(&ensemble.paths()[0]);
    let ens = ensemble_average(&ensemble, ensemble.grid().len() - 1)?;
    let time_avg_std_error = time_averages.std_error * (ensemble.len() as f64).sqrt();

    let magnitudes: Vec<f64> = functional_values.iter().map(|&(_, f)| f).collect();
    Ok(ErgodicityReport {
        verdict: classify(&magnitudes, tol),
        functional_values,
        functional_std_errors,
        time_avg,
        time_avg_std_error,
        ensemble_avg: ens.mean,
        ensemble_avg_std_error: ens.std_error,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_rules() {
        assert_eq!(classify(&[0.3, 0.2, 0.1, 0.001], 0.01), Verdict::MeanErgodic);
        assert_eq!(classify(&[0.3, 0.2, 0.1, 0.05], 0.01), Verdict::Inconclusive);
        assert_eq!(classify(&[0.1, 0.2, 0.3], 10.0), Verdict::Rejected);
        assert_eq!(classify(&[0.1, 0.3, 0.2], 10.0), Verdict::Inconclusive);
        assert_eq!(classify(&[0.3, 0.2, 0.1], 0.0), Verdict::Inconclusive);
    }

    #[test]
    fn too_few_horizons() {
        let r = mean_ergodicity_test(|_| unreachable!(), &[1.0, 2.0], 0.1);
        assert!(r.is_err());
    }
}
