use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::{ErgodicBsParams, PdeGrid};
use crate::error::{Error, Result};
use crate::ergodicity::Estimate;
use crate::stochastic::rng::{derive_seed, rng_from_seed};

/// Treatment of the `z = 0` line by the Monte Carlo oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McBoundary {
    /// Paths that reach `z = 0` are killed with zero payoff, matching the
    /// pinned node of the finite-difference solver.
    #[default]
    Absorbing,
    /// No boundary; plain expectation of the discounted payoff.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_paths: usize,
    /// Steps between `delta_start` and `delta_T`.
    pub n_steps: usize,
    pub seed: u64,
    #[serde(default)]
    pub boundary: McBoundary,
}

impl McConfig {
    pub fn new(n_paths: usize, n_steps: usize, seed: u64) -> Self {
        McConfig { n_paths, n_steps, seed, boundary: McBoundary::Absorbing }
    }
}

const SIMPSON_PANELS: usize = 32;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let n = SIMPSON_PANELS * 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Feynman-Kac price `e^{-r(delta_T - delta_start)} E[max(|z_T| - ln K, 0)]`
/// under `dz = r z d(delta) + B_delta dW`, using the step count of `grid`
/// restricted to `[delta_start, delta_T]` and an absorbing `z = 0`.
pub fn mc_price(
    params: &ErgodicBsParams,
    z0: f64,
    delta_start: f64,
    grid: &PdeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<Estimate> {
    let frac = (grid.delta_t - delta_start) / (grid.delta_t - grid.delta_min);
    let n_steps = ((grid.n_delta as f64 * frac).ceil() as usize).max(1);
    mc_price_with(params, z0, delta_start, grid, &McConfig::new(n_paths, n_steps, seed))
}

/// As [`mc_price`] with explicit step count and boundary treatment.
///
/// Each step uses the exact Gaussian transition of the linear SDE; crossings
/// of zero between steps are caught with the Brownian-bridge hitting
/// probability.
pub fn mc_price_with(
    params: &ErgodicBsParams,
    z0: f64,
    delta_start: f64,
    grid: &PdeGrid,
    config: &McConfig,
) -> Result<Estimate> {
    params.validate()?;
    if !z0.is_finite() {
        return Err(Error::InvalidArgument(format!("z0 must be finite, got {z0}")));
    }
    if !(delta_start >= grid.delta_min && delta_start <= grid.delta_t) {
        return Err(Error::InvalidArgument(format!(
            "delta_start = {delta_start} outside [{}, {}]",
            grid.delta_min, grid.delta_t
        )));
    }
    if config.n_paths < 2 || config.n_steps == 0 {
        return Err(Error::InvalidArgument("need at least 2 paths and 1 step".into()));
    }
    let r = params.r;
    let dt = (grid.delta_t - delta_start) / config.n_steps as f64;
    let growth = (r * dt).exp();
    let sd: Vec<f64> = (0..config.n_steps)
        .map(|k| {
            let a = delta_start + k as f64 * dt;
            let b = a + dt;
            let var = simpson(
                |s| {
                    let bs = params.diffusion_unchecked(s);
                    (2.0 * r * (b - s)).exp() * bs * bs
                },
                a,
                b,
            );
            var.max(0.0).sqrt()
        })
        .collect();
    let discount = (-r * (grid.delta_t - delta_start)).exp();
    let absorbing = config.boundary == McBoundary::Absorbing;

    let payoffs: Vec<f64> = (0..config.n_paths)
        .into_par_iter()
        .map(|p| -> Result<f64> {
            let mut rng = rng_from_seed(derive_seed(config.seed, p as u64));
            let mut z = z0;
            for (k, &s) in sd.iter().enumerate() {
                let eps: f64 = rng.sample(StandardNormal);
                let next = growth * z + s * eps;
                if !next.is_finite() {
                    return Err(Error::Simulation {
                        step: k,
                        what: format!("oracle path {p} blew up"),
                    });
                }
                if absorbing {
                    let hit = if z * next <= 0.0 {
                        true
                    } else {
                        let u: f64 = rng.random();
                        u < (-2.0 * z * next / (s * s)).exp()
                    };
                    if hit {
                        return Ok(0.0);
                    }
                }
                z = next;
            }
            Ok(discount * params.payoff(z))
        })
        .collect::<Result<_>>()?;
    Estimate::from_samples(payoffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PdeGrid {
        PdeGrid { z_min: -4.0, z_max: 4.0, n_z: 80, delta_min: 0.1, delta_t: 1.0, n_delta: 90 }
    }

    #[test]
    fn deterministic_when_diffusion_vanishes() {
        let p = ErgodicBsParams { r: 0.0, strike: 1.5, beta: 2.0, mu: 0.0, sigma: 0.0 };
        let est = mc_price(&p, 2.0, 0.3, &grid(), 100, 1).unwrap();
        assert!((est.mean - (2.0 - 1.5f64.ln())).abs() < 1e-13);
        assert!(est.std_error < 1e-12);
        let est = mc_price(&p, 0.0, 0.3, &grid(), 100, 1).unwrap();
        assert_eq!(est.mean, 0.0);
    }

    #[test]
    fn free_boundary_matches_closed_form_for_unit_strike() {
        // K = 1, r = 0, q = 0: price is E|z_T| for a Gaussian centred at z0.
        let p = ErgodicBsParams { r: 0.0, strike: 1.0, beta: 2.0, mu: 0.02, sigma: 0.2 };
        // Var = int_{0.5}^{1} 0.04 / s^4 ds = 0.04 / 3 * (8 - 1)
        let v: f64 = 0.04 / 3.0 * 7.0;
        let s = v.sqrt();
        let z0 = 0.3;
        let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let big_phi = |x: f64| 0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2));
        let exact = s * 2.0 * phi(z0 / s) + z0 * (2.0 * big_phi(z0 / s) - 1.0);
        let cfg = McConfig { boundary: McBoundary::Free, ..McConfig::new(200_000, 20, 5) };
        let est = mc_price_with(&p, z0, 0.5, &grid(), &cfg).unwrap();
        assert!((est.mean - exact).abs() < 4.0 * est.std_error, "{est:?} vs {exact}");
    }

    // Abramowitz-Stegun 7.1.26, accurate to 1.5e-7.
    fn erf(x: f64) -> f64 {
        let t = 1.0 / (1.0 + 0.3275911 * x.abs());
        let y = 1.0
            - (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t
                + 0.254829592)
                * t
                * (-x * x).exp();
        y.copysign(x)
    }

    #[test]
    fn rejects_start_below_cutoff() {
        let p = ErgodicBsParams { r: 0.05, strike: 1.5, beta: 2.0, mu: 0.1, sigma: 0.2 };
        assert!(mc_price(&p, 1.0, 0.05, &grid(), 100, 1).is_err());
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let p = ErgodicBsParams { r: 0.05, strike: 1.5, beta: 2.0, mu: 0.1, sigma: 0.2 };
        let a = mc_price(&p, 1.0, 0.5, &grid(), 2000, 9).unwrap();
        let b = mc_price(&p, 1.0, 0.5, &grid(), 2000, 9).unwrap();
        assert_eq!(a, b);
    }
}
