use serde::{Deserialize, Serialize};

use super::params::{ErgodicBsParams, PdeGrid};
use super::solver::{solve_ergodic_bs, PdeSolution, Scheme};
use crate::error::{Error, Result};

/// Window of the `(|z|, delta)` plane kept away from the payoff kink, the
/// pinned node and the far-field boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothRegion {
    pub z_abs_min: f64,
    pub z_abs_max: f64,
    pub delta_lo: f64,
    pub delta_hi: f64,
}

impl SmoothRegion {
    /// `|z|` in `[z/8, z/2]` of the nearer boundary, middle half of the
    /// `delta` range.
    pub fn default_for(grid: &PdeGrid) -> Self {
        let z = grid.z_max.min(-grid.z_min);
        let span = grid.delta_t - grid.delta_min;
        SmoothRegion {
            z_abs_min: z / 8.0,
            z_abs_max: z / 2.0,
            delta_lo: grid.delta_min + 0.25 * span,
            delta_hi: grid.delta_min + 0.75 * span,
        }
    }

    pub fn contains(&self, z: f64, delta: f64) -> bool {
        let a = z.abs();
        a >= self.z_abs_min && a <= self.z_abs_max && delta >= self.delta_lo && delta <= self.delta_hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub d_delta: f64,
    /// Max residual over the smooth region.
    pub residual: f64,
    /// Max difference from the finest solution at shared nodes of the smooth
    /// region.
    pub error_vs_finest: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub scheme: Scheme,
    pub region: SmoothRegion,
    pub rows: Vec<ConvergenceRow>,
}

fn orders(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let v: Vec<f64> = values.collect();
    v.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

impl ConvergenceTable {
    /// `log2` ratios of successive residuals.
    pub fn residual_orders(&self) -> Vec<f64> {
        orders(self.rows.iter().map(|r| r.residual))
    }

    /// `log2` ratios of successive errors against the finest level (the
    /// finest row itself is excluded).
    pub fn error_orders(&self) -> Vec<f64> {
        let n = self.rows.len().saturating_sub(1);
        orders(self.rows[..n].iter().map(|r| r.error_vs_finest))
    }

    /// Residual order between the two finest levels.
    pub fn observed_order(&self) -> f64 {
        self.residual_orders().last().copied().unwrap_or(f64::NAN)
    }
}

/// Solves on `base_grid` refined by `2^k` in both `z` and `delta` for
/// `k = 0..refinements`.
pub fn convergence_study(
    params: &ErgodicBsParams,
    base_grid: &PdeGrid,
    refinements: usize,
    scheme: Scheme,
) -> Result<ConvergenceTable> {
    convergence_study_in(params, base_grid, refinements, scheme, &SmoothRegion::default_for(base_grid))
}

pub fn convergence_study_in(
    params: &ErgodicBsParams,
    base_grid: &PdeGrid,
    refinements: usize,
    scheme: Scheme,
    region: &SmoothRegion,
) -> Result<ConvergenceTable> {
    if refinements < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 levels, got {refinements}")));
    }
    let solutions: Vec<PdeSolution> = (0..refinements)
        .map(|k| solve_ergodic_bs(params, &base_grid.refined(1 << k), scheme))
        .collect::<Result<_>>()?;
    let finest = solutions.last().expect("at least two levels");
    let rows = solutions
        .iter()
        .enumerate()
        .map(|(k, sol)| {
            let g = sol.grid;
            let stride = 1usize << (refinements - 1 - k);
            let mut err = 0.0f64;
            for j in 0..=g.n_delta {
                let d = g.delta(j);
                for i in 0..=g.n_z {
                    if region.contains(g.z(i), d) {
                        let diff = sol.value(i, j) - finest.value(i * stride, j * stride);
                        err = err.max(diff.abs());
                    }
                }
            }
            ConvergenceRow {
                h: g.dz(),
                d_delta: g.d_delta(),
                residual: sol.max_residual_where(|z, d| region.contains(z, d)),
                error_vs_finest: err,
            }
        })
        .collect();
    Ok(ConvergenceTable { scheme, region: *region, rows })
}
