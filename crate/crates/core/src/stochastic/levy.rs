use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::grid::TimeGrid;
use super::path::SamplePath;
use super::simulate::{aux_rng, generate_wiener, ItoDecomposition, LogPriceSimulation};
use super::spec::{JumpLaw, LevyParams, JUMP_THRESHOLD};
use crate::error::{Error, Result};

/// The four pieces of `Y_t = eta t + sigma W_t + J_t + M_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyComponents {
    /// `eta t`
    pub linear: SamplePath,
    /// `sigma W_t`
    pub gaussian: SamplePath,
    /// Sum of jumps with `|size| > 1`.
    pub large_jumps: SamplePath,
    /// Compensated sum of jumps with `|size| <= 1`.
    pub small_jumps: SamplePath,
}

#[derive(Debug, Clone)]
pub struct LevySimulation {
    pub total: SamplePath,
    pub components: LevyComponents,
    pub wiener: SamplePath,
}

impl LevySimulation {
    /// Log-price `y0 + Y_t`. Jumps carry no `dW`, so they join the linear part
    /// in `D`, and `R = sigma W`.
    pub fn into_log_price(self, y0: f64) -> Result<LogPriceSimulation> {
        let c = &self.components;
        let drift = c
            .linear
            .zip_with(&c.large_jumps, |a, b| a + b)?
            .zip_with(&c.small_jumps, |a, b| a + b)?;
        let decomposition = ItoDecomposition::new(y0, drift, c.gaussian.clone())?;
        Ok(LogPriceSimulation {
            log_price: decomposition.reconstruct(),
            decomposition,
            wiener: self.wiener,
        })
    }
}

/// Simulates a Levy path with compound-Poisson jumps of the configured law.
pub fn simulate_levy(p: &LevyParams, grid: &TimeGrid, seed: u64) -> Result<LevySimulation> {
    p.validate()?;
    let wiener = generate_wiener(grid, seed);
    let dt = grid.dt();
    let arrivals = if p.jump_intensity > 0.0 {
        Some(
            Poisson::new(p.jump_intensity * dt)
                .map_err(|e| Error::InvalidSpec(format!("jump intensity: {e}")))?,
        )
    } else {
        None
    };
    let mut aux = aux_rng(seed);
    let compensator_rate = p.jump_intensity * p.small_jump_mean();

    let n = grid.len();
    let mut large = Vec::with_capacity(n);
    let mut small = Vec::with_capacity(n);
    let (mut large_sum, mut small_sum) = (0.0, 0.0);
    large.push(0.0);
    small.push(0.0);
    for k in 1..n {
        if let Some(law) = &arrivals {
            let count = law.sample(&mut aux) as u64;
            for _ in 0..count {
                let size = match p.jump_law {
                    JumpLaw::Fixed => p.jump_amplitude,
                    JumpLaw::Symmetric => {
                        if aux.random::<bool>() {
                            p.jump_amplitude
                        } else {
                            -p.jump_amplitude
                        }
                    }
                };
                if size.abs() > JUMP_THRESHOLD {
                    large_sum += size;
                } else {
                    small_sum += size;
                }
            }
        }
        large.push(large_sum);
        small.push(small_sum - compensator_rate * grid.elapsed(k));
    }

    let linear: Vec<f64> = (0..n).map(|k| p.eta * grid.elapsed(k)).collect();
    let gaussian: Vec<f64> = wiener.values().iter().map(|w| p.sigma * w).collect();
    let total: Vec<f64> = (0..n)
        .map(|k| linear[k] + gaussian[k] + large[k] + small[k])
        .collect();
    if let Some(k) = total.iter().position(|v| !v.is_finite()) {
        return Err(Error::Simulation {
            step: k,
            what: "non-finite Levy path".into(),
        });
    }
    Ok(LevySimulation {
        total: SamplePath::from_parts(*grid, total, seed),
        components: LevyComponents {
            linear: SamplePath::from_parts(*grid, linear, seed),
            gaussian: SamplePath::from_parts(*grid, gaussian, seed),
            large_jumps: SamplePath::from_parts(*grid, large, seed),
            small_jumps: SamplePath::from_parts(*grid, small, seed),
        },
        wiener,
    })
}
