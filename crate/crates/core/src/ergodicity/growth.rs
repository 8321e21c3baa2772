use super::estimators::Estimate;
use crate::error::{Error, Result};
use crate::stochastic::PathEnsemble;

/// Time average of the logarithmic growth rate, `E[Delta ln X] / Delta t`,
/// averaged over every step of every path.
///
/// Per-path averages of the log-increments feed the standard error.
pub fn growth_rate_time_average(price_ensemble: &PathEnsemble, dt: f64) -> Result<Estimate> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if price_ensemble.is_empty() {
        return Err(Error::DegenerateEnsemble("empty ensemble".into()));
    }
    let steps = price_ensemble.grid().n_steps() as f64;
    let per_path = price_ensemble
        .paths()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if let Some(k) = p.values().iter().position(|&x| !(x > 0.0)) {
                return Err(Error::InvalidArgument(format!(
                    "path {i} has non-positive price {} at node {k}",
                    p.values()[k]
                )));
            }
            let increments: f64 = p.values().windows(2).map(|w| (w[1] / w[0]).ln()).sum();
            Ok(increments / (steps * dt))
        })
        .collect::<Result<Vec<f64>>>()?;
    Estimate::from_samples(per_path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::{SamplePath, TimeGrid};

    #[test]
    fn deterministic_exponential() {
        let g = TimeGrid::from_horizon(3.0, 300).unwrap();
        let ens = PathEnsemble::new(g, vec![SamplePath::from_fn(g, |t| (0.07 * t).exp())], 0).unwrap();
        let est = growth_rate_time_average(&ens, g.dt()).unwrap();
        assert!((est.mean - 0.07).abs() < 1e-12);
    }

    #[test]
    fn non_positive_price_rejected() {
        let g = TimeGrid::from_horizon(1.0, 2).unwrap();
        let p = SamplePath::new(g, vec![1.0, 0.0, 1.0], 0).unwrap();
        let ens = PathEnsemble::new(g, vec![p], 0).unwrap();
        assert!(growth_rate_time_average(&ens, 0.5).is_err());
    }
}
