use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stochastic::rng::derive_seed;
use crate::stochastic::{generate_wiener, integrated_wiener, TimeGrid};

/// Time steps per simulated path; the trapezoid bias of `Var[M_t]` is
/// `1 / (4 n^2)` relative, i.e. about 6e-6 here.
pub const INHIBITION_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InhibitedProcess {
    /// `W_t / t^beta`, needs `beta > 1/2`.
    Wiener,
    /// `(int_0^t W_s ds) / t^beta`, needs `beta > 3/2`.
    IntegratedWiener,
}

impl InhibitedProcess {
    pub fn min_beta(self) -> f64 {
        match self {
            InhibitedProcess::Wiener => 0.5,
            InhibitedProcess::IntegratedWiener => 1.5,
        }
    }

    /// Closed-form variance at `t`: `t^(1 - 2 beta)` or `t^(3 - 2 beta) / 3`.
    pub fn theory_variance(self, beta: f64, t: f64) -> f64 {
        match self {
            InhibitedProcess::Wiener => t.powf(1.0 - 2.0 * beta),
            InhibitedProcess::IntegratedWiener => t.powf(3.0 - 2.0 * beta) / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InhibitionRow {
    pub t: f64,
    pub sample_var: f64,
    pub theory_var: f64,
}

impl InhibitionRow {
    pub fn ratio(&self) -> f64 {
        self.sample_var / self.theory_var
    }
}

/// Monte Carlo variance of the inhibited process at each `t` in `t_list`,
/// next to its closed form.
pub fn inhibition_limit_check(
    process: InhibitedProcess,
    beta: f64,
    t_list: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<Vec<InhibitionRow>> {
    if !(beta > process.min_beta()) {
        return Err(Error::InvalidArgument(format!(
            "{process:?} branch needs beta > {}, got {beta}",
            process.min_beta()
        )));
    }
    if n_paths < 2 {
        return Err(Error::InvalidArgument("need at least 2 paths".into()));
    }
    t_list
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let grid = TimeGrid::from_horizon(t, INHIBITION_STEPS)?;
            let master = derive_seed(seed, j as u64);
            let scale = t.powf(-beta);
            let samples: Vec<f64> = (0..n_paths as u64)
                .into_par_iter()
                .map(|i| {
                    let w = generate_wiener(&grid, derive_seed(master, i));
                    let end = match process {
                        InhibitedProcess::Wiener => w.last(),
                        InhibitedProcess::IntegratedWiener => integrated_wiener(&w).last(),
                    };
                    end * scale
                })
                .collect();
            let n = samples.len() as f64;
            let mean = samples.iter().sum::<f64>() / n;
            let sample_var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            Ok(InhibitionRow {
                t,
                sample_var,
                theory_var: process.theory_variance(beta, t),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theory_values() {
        let w = InhibitedProcess::Wiener.theory_variance(2.0, 100.0);
        assert!((w - 1e-6).abs() < 1e-20);
        let m = InhibitedProcess::IntegratedWiener.theory_variance(2.0, 10.0);
        assert!((m - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn beta_checked_per_branch() {
        assert!(inhibition_limit_check(InhibitedProcess::Wiener, 0.5, &[1.0], 10, 0).is_err());
        assert!(inhibition_limit_check(InhibitedProcess::IntegratedWiener, 1.5, &[1.0], 10, 0).is_err());
        assert!(inhibition_limit_check(InhibitedProcess::IntegratedWiener, 1.6, &[1.0], 10, 0).is_ok());
    }
}
