//! The ergodic maker operator and the inhibition degree.
//!
//! For a log-price `Y' = Y'_0 + D + R` driven by `W` on `[0, T]`, the operator
//! produces the tamed process
//!
//! ```text
//! Z_delta = (W_T / T^beta) D_delta + (1 / T^beta) R_delta,    Z_0 = 0,
//! ```
//!
//! annihilating the constant `Y'_0`. `beta > 3/2` is required.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stochastic::{
    simulate_log_price, ItoDecomposition, LevyComponents, PathEnsemble, ProcessSpec, SamplePath,
    TimeGrid,
};

/// Smallest admissible inhibition degree (exclusive).
pub const MIN_BETA: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InhibitionDegree {
    pub alpha: f64,
    pub beta: f64,
}

/// `beta = alpha` for `alpha > 3/2`, otherwise `3/2 + |alpha|`.
///
/// `alpha = 3/2` goes through the second branch (`beta = 3`). `alpha = 0`
/// would give `beta = 3/2`, which is not admissible, and is rejected.
pub fn inhibition_degree(alpha: f64) -> Result<InhibitionDegree> {
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha must be finite, got {alpha}")));
    }
    let beta = if alpha > MIN_BETA { alpha } else { MIN_BETA + alpha.abs() };
    check_beta(beta)?;
    Ok(InhibitionDegree { alpha, beta })
}

/// Decay factor `exp(-dt)` used when no other `Lambda` is given.
pub fn default_lambda(grid: &TimeGrid) -> f64 {
    (-grid.dt()).exp()
}

/// Smallest `alpha` compatible with `Cov(X_s, X_t) <= alpha Lambda^n sd_s sd_t`
/// over all grid pairs `t = s + n dt` in the ensemble.
pub fn estimate_alpha(ensemble: &PathEnsemble, lambda: f64, lag_steps: usize) -> Result<f64> {
    if ensemble.len() < 2 {
        return Err(Error::DegenerateEnsemble(format!(
            "need at least 2 paths, got {}",
            ensemble.len()
        )));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidArgument(format!("Lambda must lie in (0, 1), got {lambda}")));
    }
    let n_nodes = ensemble.grid().len();
    if lag_steps == 0 || lag_steps >= n_nodes {
        return Err(Error::InvalidArgument(format!(
            "lag must be in 1..{}, got {lag_steps}",
            n_nodes - 1
        )));
    }

    let m = ensemble.len() as f64;
    let means: Vec<f64> = (0..n_nodes).map(|k| ensemble.slice(k).sum::<f64>() / m).collect();
    let mut var = vec![0.0; n_nodes];
    for p in ensemble.paths() {
        for (k, v) in p.values().iter().enumerate() {
            var[k] += (v - means[k]).powi(2);
        }
    }
    for v in &mut var {
        *v /= m - 1.0;
    }

    let decay = lambda.powi(lag_steps as i32);
    let mut best = f64::NEG_INFINITY;
    for s in 0..n_nodes - lag_steps {
        let t = s + lag_steps;
        if var[s] <= 0.0 || var[t] <= 0.0 {
            return Err(Error::DegenerateEnsemble(format!(
                "zero sample variance at grid node {}",
                if var[s] <= 0.0 { s } else { t }
            )));
        }
        let cov = ensemble
            .paths()
            .iter()
            .map(|p| (p.values()[s] - means[s]) * (p.values()[t] - means[t]))
            .sum::<f64>()
            / (m - 1.0);
        best = best.max(cov / (decay * (var[s] * var[t]).sqrt()));
    }
    Ok(best)
}

/// The tamed path `Z` plus what is needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct EmoOutput {
    pub z_path: SamplePath,
    pub beta: f64,
    pub horizon: f64,
    pub w_terminal: f64,
}

/// JSON sidecar written next to an exported `delta,z` CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmoSidecar {
    pub beta: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(rename = "w_T")]
    pub w_terminal: f64,
    pub seed: u64,
}

impl EmoOutput {
    pub fn sidecar(&self) -> EmoSidecar {
        EmoSidecar {
            beta: self.beta,
            horizon: self.horizon,
            w_terminal: self.w_terminal,
            seed: self.z_path.seed(),
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > MIN_BETA {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "inhibition degree must exceed 3/2, got {beta}"
        )))
    }
}

fn check_w(w_terminal: f64) -> Result<()> {
    if w_terminal.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("W_T must be finite, got {w_terminal}")))
    }
}

/// `(W_T / T^beta) * drift + (1 / T^beta) * noise` pointwise.
fn tame(drift: &SamplePath, noise: &SamplePath, beta: f64, w_terminal: f64) -> Result<EmoOutput> {
    check_beta(beta)?;
    check_w(w_terminal)?;
    let horizon = drift.grid().span();
    let scale = horizon.powf(-beta);
    let drift_weight = w_terminal * scale;
    let z_path = drift.zip_with(noise, |d, r| drift_weight * d + scale * r)?;
    Ok(EmoOutput {
        z_path,
        beta,
        horizon,
        w_terminal,
    })
}

/// Applies the ergodic maker operator to a decomposed log-price.
///
/// `w_terminal` must be the terminal value of the Wiener path that drove the
/// random part.
pub fn apply_emo(decomp: &ItoDecomposition, beta: f64, w_terminal: f64) -> Result<EmoOutput> {
    tame(decomp.drift_part(), decomp.random_part(), beta, w_terminal)
}

/// `Z = sigma W / T^beta + (W_T / T^beta) (eta delta + J + M)`.
pub fn apply_emo_levy(components: &LevyComponents, beta: f64, w_terminal: f64) -> Result<EmoOutput> {
    let drift = components
        .linear
        .zip_with(&components.large_jumps, |a, b| a + b)?
        .zip_with(&components.small_jumps, |a, b| a + b)?;
    tame(&drift, &components.gaussian, beta, w_terminal)
}

/// `L = (W_T / T^beta) R^y + (1 / T^beta) D^y`, the factor multiplying `R^z`
/// in `EMO[Y Z] = D^z EMO[Y] + R^z L`.
pub fn emo_product_l(decomp_y: &ItoDecomposition, beta: f64, w_terminal: f64) -> Result<SamplePath> {
    Ok(tame(decomp_y.random_part(), decomp_y.drift_part(), beta, w_terminal)?.z_path)
}

/// Simulates `spec` and returns its EMO image.
pub fn simulate_emo(spec: &ProcessSpec, grid: &TimeGrid, seed: u64, beta: f64) -> Result<EmoOutput> {
    check_beta(beta)?;
    let sim = simulate_log_price(spec, grid, seed)?;
    apply_emo(&sim.decomposition, beta, sim.terminal_wiener())
}

/// Ensemble of EMO images `Z` of `spec`, each path tamed with its own `W_T`.
pub fn emo_ensemble(
    spec: &ProcessSpec,
    grid: &TimeGrid,
    n_paths: usize,
    master_seed: u64,
    beta: f64,
) -> Result<PathEnsemble> {
    check_beta(beta)?;
    spec.validate()?;
    PathEnsemble::generate(*grid, n_paths, master_seed, |seed| {
        Ok(simulate_emo(spec, grid, seed, beta)?.z_path)
    })
}
