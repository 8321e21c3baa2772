use serde::{Deserialize, Serialize};

use super::estimators::{centered_moments, covariance_curve, functional_weights, limer_functional, Estimate};
use super::verdict::{mean_ergodicity_test, ErgodicityReport};
use crate::emo::emo_ensemble;
use crate::error::{Error, Result};
use crate::stochastic::rng::derive_seed;
use crate::stochastic::{log_price_ensemble, PathEnsemble, ProcessSpec, SamplePath, TimeGrid};

/// What gets fed to the ergodicity functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pipeline {
    /// EMO image `Z` of the log-price.
    Emo { beta: f64 },
    /// The untouched log-price `Y'`.
    RawLogPrice,
}

/// Ensemble sizing shared by every horizon of a test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_paths: usize,
    /// Grid resolution; a horizon `T` gets `round(T * steps_per_unit)` steps.
    pub steps_per_unit: f64,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn grid_for(&self, horizon: f64) -> Result<TimeGrid> {
        let steps = (horizon * self.steps_per_unit).round().max(1.0) as usize;
        TimeGrid::from_horizon(horizon, steps)
    }
}

impl Pipeline {
    pub fn ensemble(&self, spec: &ProcessSpec, horizon: f64, config: &EnsembleConfig) -> Result<PathEnsemble> {
        let grid = config.grid_for(horizon)?;
        // Independent ensembles per horizon.
        let seed = derive_seed(config.seed, horizon.to_bits());
        match *self {
            Pipeline::Emo { beta } => emo_ensemble(spec, &grid, config.n_paths, seed, beta),
            Pipeline::RawLogPrice => log_price_ensemble(spec, &grid, config.n_paths, seed),
        }
    }

    /// Runs the mean-ergodicity test of `spec` through this pipeline.
    pub fn test(
        &self,
        spec: &ProcessSpec,
        horizons: &[f64],
        config: &EnsembleConfig,
        tol: f64,
    ) -> Result<ErgodicityReport> {
        mean_ergodicity_test(|t| self.ensemble(spec, t, config), horizons, tol)
    }
}

/// Both sides of `F(gamma Y + nu Z) = gamma^2 F(Y) + nu^2 F(Z)` for
/// independent EMO images `Y`, `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdditivityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    /// Standard error of `gap`, from the per-path cross terms.
    pub gap_std_error: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn variance_additivity_check(
    spec_y: &ProcessSpec,
    spec_z: &ProcessSpec,
    grid: &TimeGrid,
    n_paths: usize,
    gamma: f64,
    nu: f64,
    beta: f64,
    seeds: (u64, u64),
) -> Result<AdditivityCheck> {
    if seeds.0 == seeds.1 {
        return Err(Error::InvalidArgument(
            "Y and Z must be driven by different seeds".into(),
        ));
    }
    let ys = emo_ensemble(spec_y, grid, n_paths, seeds.0, beta)?;
    let zs = emo_ensemble(spec_z, grid, n_paths, seeds.1, beta)?;
    additivity_from_ensembles(&ys, &zs, gamma, nu)
}

/// Additivity check on two given ensembles of equal size on one grid.
pub fn additivity_from_ensembles(
    ys: &PathEnsemble,
    zs: &PathEnsemble,
    gamma: f64,
    nu: f64,
) -> Result<AdditivityCheck> {
    if ys.grid() != zs.grid() || ys.len() != zs.len() {
        return Err(Error::InvalidArgument(
            "ensembles must share grid and size".into(),
        ));
    }
    let grid = *ys.grid();
    let horizon = grid.span();
    let combined_paths = ys
        .paths()
        .iter()
        .zip(zs.paths())
        .map(|(y, z)| y.zip_with(z, |a, b| gamma * a + nu * b))
        .collect::<Result<Vec<SamplePath>>>()?;
    let combined = PathEnsemble::new(grid, combined_paths, ys.master_seed())?;

    let lhs = limer_functional(&covariance_curve(&combined)?, horizon)?;
    let fy = limer_functional(&covariance_curve(ys)?, horizon)?;
    let fz = limer_functional(&covariance_curve(zs)?, horizon)?;
    let rhs = gamma * gamma * fy + nu * nu * fz;

    let weights = functional_weights(covariance_curve(ys)?.lags(), horizon)?;
    let (my, _) = centered_moments(ys);
    let (mz, _) = centered_moments(zs);
    let cross: Vec<f64> = ys
        .paths()
        .iter()
        .zip(zs.paths())
        .map(|(y, z)| {
            weights
                .iter()
                .map(|&(k, c)| 2.0 * gamma * nu * c * (y.values()[k] - my[k]) * (z.values()[k] - mz[k]))
                .sum::<f64>()
        })
        .collect();
    let n = ys.len() as f64;
    let spread = Estimate::from_samples(cross)?;
    Ok(AdditivityCheck {
        lhs,
        rhs,
        gap: lhs - rhs,
        gap_std_error: spread.std_error * n / (n - 1.0),
    })
}
