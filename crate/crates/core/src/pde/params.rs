use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::emo::MIN_BETA;

/// Parameters of the ergodic Black-Scholes equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgodicBsParams {
    /// Short rate.
    pub r: f64,
    #[serde(alias = "K")]
    pub strike: f64,
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl ErgodicBsParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("r", self.r),
            ("strike", self.strike),
            ("beta", self.beta),
            ("mu", self.mu),
            ("sigma", self.sigma),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")));
            }
        }
        if self.strike <= 0.0 {
            return Err(Error::InvalidArgument(format!("strike must be positive, got {}", self.strike)));
        }
        if self.beta <= MIN_BETA {
            return Err(Error::InvalidArgument(format!("beta must exceed 3/2, got {}", self.beta)));
        }
        if self.sigma < 0.0 {
            return Err(Error::InvalidArgument(format!("sigma must be non-negative, got {}", self.sigma)));
        }
        Ok(())
    }

    /// `q = mu - sigma^2 / 2`.
    pub fn q(&self) -> f64 {
        self.mu - 0.5 * self.sigma * self.sigma
    }

    pub fn log_strike(&self) -> f64 {
        self.strike.ln()
    }

    pub fn payoff(&self, z: f64) -> f64 {
        (z.abs() - self.log_strike()).max(0.0)
    }

    /// Linear far-field solution `|z| - ln(K) e^{-r (delta_T - delta)}`.
    pub fn far_field(&self, z: f64, time_to_expiry: f64) -> f64 {
        z.abs() - self.log_strike() * (-self.r * time_to_expiry).exp()
    }

    /// `B_delta` without the cutoff check.
    pub(crate) fn diffusion_unchecked(&self, delta: f64) -> f64 {
        self.q() / delta.powf(self.beta - 1.0) + self.sigma / delta.powf(self.beta)
    }
}

/// Rectangular `(z, delta)` grid; `z = 0` is a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeGrid {
    pub z_min: f64,
    pub z_max: f64,
    pub n_z: usize,
    pub delta_min: f64,
    #[serde(rename = "delta_T")]
    pub delta_t: f64,
    pub n_delta: usize,
}

impl PdeGrid {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.z_min < 0.0 && 0.0 < self.z_max) || !self.z_min.is_finite() || !self.z_max.is_finite() {
            return bad(format!("need z_min < 0 < z_max, got [{}, {}]", self.z_min, self.z_max));
        }
        if self.n_z < 4 {
            return bad(format!("need at least 4 z cells, got {}", self.n_z));
        }
        if self.n_delta < 1 {
            return bad("need at least one delta step".into());
        }
        if !(self.delta_min > 0.0 && self.delta_min < self.delta_t) || !self.delta_t.is_finite() {
            return bad(format!(
                "need 0 < delta_min < delta_T, got {} and {}",
                self.delta_min, self.delta_t
            ));
        }
        let idx = -self.z_min / self.dz();
        if (idx - idx.round()).abs() > 1e-9 * idx.max(1.0) {
            return bad(format!("z = 0 is not a grid node (index {idx})"));
        }
        let zero = idx.round() as usize;
        if zero < 2 || zero + 2 > self.n_z {
            return bad("z = 0 must leave at least one interior node on each side".into());
        }
        Ok(())
    }

    /// Symmetric grid on `[-z_abs, z_abs]` with `delta_min = delta_T / 100`.
    pub fn symmetric(z_abs: f64, n_z: usize, delta_t: f64, n_delta: usize) -> Self {
        PdeGrid {
            z_min: -z_abs,
            z_max: z_abs,
            n_z,
            delta_min: delta_t / 100.0,
            delta_t,
            n_delta,
        }
    }

    pub fn dz(&self) -> f64 {
        (self.z_max - self.z_min) / self.n_z as f64
    }

    pub fn d_delta(&self) -> f64 {
        (self.delta_t - self.delta_min) / self.n_delta as f64
    }

    pub fn z(&self, i: usize) -> f64 {
        if i == self.zero_index() {
            0.0
        } else {
            self.z_min + i as f64 * self.dz()
        }
    }

    pub fn delta(&self, j: usize) -> f64 {
        if j == self.n_delta {
            self.delta_t
        } else {
            self.delta_min + j as f64 * self.d_delta()
        }
    }

    pub fn zero_index(&self) -> usize {
        (-self.z_min / self.dz()).round() as usize
    }

    /// Same domain with `factor` times as many cells in both directions.
    pub fn refined(&self, factor: usize) -> Self {
        PdeGrid {
            n_z: self.n_z * factor,
            n_delta: self.n_delta * factor,
            ..*self
        }
    }
}

/// Parameter file: `ErgodicBsParams` and `PdeGrid` fields in one flat object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeConfig {
    #[serde(flatten)]
    pub params: ErgodicBsParams,
    #[serde(flatten)]
    pub grid: PdeGrid,
}

impl PdeConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid.validate()
    }
}

/// `B_delta = q / delta^(beta - 1) + sigma / delta^beta` for `delta >= delta_min`.
pub fn diffusion_coefficient(delta: f64, delta_min: f64, params: &ErgodicBsParams) -> Result<f64> {
    if !(delta_min > 0.0) {
        return Err(Error::InvalidArgument(format!("delta_min must be positive, got {delta_min}")));
    }
    if !(delta >= delta_min) {
        return Err(Error::InvalidArgument(format!(
            "delta = {delta} is below the cutoff {delta_min}"
        )));
    }
    Ok(params.diffusion_unchecked(delta))
}

/// Drift `A = q W / delta^beta - (beta / delta) z` and diffusion `B_delta` of
/// the tamed process `dZ = A d(delta) + B dW`.
pub fn sde_coefficients(
    delta: f64,
    w_delta: f64,
    z: f64,
    delta_min: f64,
    params: &ErgodicBsParams,
) -> Result<(f64, f64)> {
    let b = diffusion_coefficient(delta, delta_min, params)?;
    let a = params.q() * w_delta / delta.powf(params.beta) - params.beta / delta * z;
    Ok((a, b))
}
