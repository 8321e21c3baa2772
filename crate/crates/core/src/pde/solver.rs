use serde::{Deserialize, Serialize};

use super::params::{ErgodicBsParams, PdeGrid};
use super::tridiag::solve_in_place;
use crate::error::{Error, Result};

/// Time-stepping scheme for the backward march in `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Implicit,
    /// Theta = 1/2 after two implicit start-up steps.
    CrankNicolson,
}

impl Scheme {
    const RANNACHER_STEPS: usize = 2;

    fn theta(self, step: usize) -> f64 {
        match self {
            Scheme::Implicit => 1.0,
            Scheme::CrankNicolson if step < Self::RANNACHER_STEPS => 1.0,
            Scheme::CrankNicolson => 0.5,
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "implicit" => Ok(Scheme::Implicit),
            "crank_nicolson" | "crank-nicolson" | "cn" => Ok(Scheme::CrankNicolson),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Grid solution `C(z_i, delta_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeSolution {
    pub grid: PdeGrid,
    pub params: ErgodicBsParams,
    /// Row-major by time slice: `c[j * (n_z + 1) + i]`.
    c: Vec<f64>,
    pub max_residual: f64,
    pub scheme: Scheme,
}

impl PdeSolution {
    pub fn n_z_nodes(&self) -> usize {
        self.grid.n_z + 1
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.c[j * self.n_z_nodes() + i]
    }

    /// All `z` values at time slice `j`.
    pub fn slice(&self, j: usize) -> &[f64] {
        let n = self.n_z_nodes();
        &self.c[j * n..(j + 1) * n]
    }

    pub fn terminal_slice(&self) -> &[f64] {
        self.slice(self.grid.n_delta)
    }

    pub fn z_nodes(&self) -> Vec<f64> {
        (0..self.n_z_nodes()).map(|i| self.grid.z(i)).collect()
    }

    /// Bilinear interpolation inside the grid.
    pub fn interpolate(&self, z: f64, delta: f64) -> Result<f64> {
        let g = &self.grid;
        if !(z >= g.z_min && z <= g.z_max && delta >= g.delta_min && delta <= g.delta_t) {
            return Err(Error::InvalidArgument(format!(
                "point ({z}, {delta}) lies outside the solution grid"
            )));
        }
        let (i, wz) = locate((z - g.z_min) / g.dz(), g.n_z);
        let (j, wd) = locate((delta - g.delta_min) / g.d_delta(), g.n_delta);
        let at = |i: usize, j: usize| self.value(i, j);
        let lo = at(i, j) * (1.0 - wz) + at(i + 1, j) * wz;
        let hi = at(i, j + 1) * (1.0 - wz) + at(i + 1, j + 1) * wz;
        Ok(lo * (1.0 - wd) + hi * wd)
    }

    /// Residual of the continuous equation at node `(i, j)`, using central
    /// differences in both directions. `None` on boundary, pinned and
    /// end-of-march nodes.
    pub fn residual_at(&self, i: usize, j: usize) -> Option<f64> {
        let g = &self.grid;
        if i == 0 || i >= g.n_z || i == g.zero_index() || j == 0 || j >= g.n_delta {
            return None;
        }
        let h = g.dz();
        let dd = g.d_delta();
        let z = g.z(i);
        let b = self.params.diffusion_unchecked(g.delta(j));
        let r = self.params.r;
        let c = |i: usize, j: usize| self.value(i, j);
        let c_delta = (c(i, j + 1) - c(i, j - 1)) / (2.0 * dd);
        let c_z = (c(i + 1, j) - c(i - 1, j)) / (2.0 * h);
        let c_zz = (c(i + 1, j) - 2.0 * c(i, j) + c(i - 1, j)) / (h * h);
        Some(c_delta + r * z * c_z + 0.5 * b * b * c_zz - r * c(i, j))
    }

    /// Largest `|residual|` over interior nodes satisfying `keep(z, delta)`.
    pub fn max_residual_where(&self, keep: impl Fn(f64, f64) -> bool) -> f64 {
        let g = &self.grid;
        let mut worst = 0.0f64;
        for j in 1..g.n_delta {
            let d = g.delta(j);
            for i in 1..g.n_z {
                if !keep(g.z(i), d) {
                    continue;
                }
                if let Some(res) = self.residual_at(i, j) {
                    worst = worst.max(res.abs());
                }
            }
        }
        worst
    }

    /// Rows `(z, delta, C)` ordered by time slice then `z`.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.n_z_nodes();
        self.c.iter().enumerate().map(move |(k, &v)| {
            let (j, i) = (k / n, k % n);
            (self.grid.z(i), self.grid.delta(j), v)
        })
    }
}

fn locate(x: f64, n: usize) -> (usize, f64) {
    let k = (x.floor().max(0.0) as usize).min(n - 1);
    (k, x - k as f64)
}

struct Stencil {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl Stencil {
    /// Coefficients of the spatial operator at every node for one time slice.
    /// Boundary and pinned rows are left at zero.
    fn at(params: &ErgodicBsParams, grid: &PdeGrid, delta: f64) -> Self {
        let n = grid.n_z + 1;
        let h = grid.dz();
        let b = params.diffusion_unchecked(delta);
        let diff = 0.5 * b * b / (h * h);
        let mut s = Stencil { lower: vec![0.0; n], diag: vec![0.0; n], upper: vec![0.0; n] };
        let zero = grid.zero_index();
        for i in 1..grid.n_z {
            if i == zero {
                continue;
            }
            let conv = params.r * grid.z(i) / (2.0 * h);
            s.lower[i] = diff - conv;
            s.upper[i] = diff + conv;
            s.diag[i] = -2.0 * diff - params.r;
        }
        s
    }

    fn apply(&self, v: &[f64], i: usize) -> f64 {
        self.lower[i] * v[i - 1] + self.diag[i] * v[i] + self.upper[i] * v[i + 1]
    }
}

/// Backward march of the ergodic Black-Scholes equation from the call payoff
/// at `delta_T` down to `delta_min`.
pub fn solve_ergodic_bs(params: &ErgodicBsParams, grid: &PdeGrid, scheme: Scheme) -> Result<PdeSolution> {
    params.validate()?;
    grid.validate()?;
    let n = grid.n_z + 1;
    let zero = grid.zero_index();
    let dd = grid.d_delta();
    let z: Vec<f64> = (0..n).map(|i| grid.z(i)).collect();
    let z_abs = grid.z_max.max(-grid.z_min);
    let blowup = 10.0 * (z_abs + params.log_strike().abs());

    let mut c = vec![0.0; n * (grid.n_delta + 1)];
    {
        let last = &mut c[grid.n_delta * n..];
        for (slot, &zi) in last.iter_mut().zip(&z) {
            *slot = params.payoff(zi);
        }
        last[zero] = 0.0;
    }

    let mut next = Stencil::at(params, grid, grid.delta_t);
    let mut lower = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut rhs = vec![0.0; n];
    let mut scratch = Vec::new();

    for step in 0..grid.n_delta {
        let j = grid.n_delta - 1 - step;
        let delta = grid.delta(j);
        let theta = scheme.theta(step);
        let cur = Stencil::at(params, grid, delta);
        let (before, after) = c.split_at_mut((j + 1) * n);
        let known = &after[..n];
        let target = &mut before[j * n..];

        let tau = grid.delta_t - delta;
        target[0] = params.far_field(z[0], tau);
        target[n - 1] = params.far_field(z[n - 1], tau);
        target[zero] = 0.0;

        for (lo, hi) in [(1, zero), (zero + 1, n - 1)] {
            lower.clear();
            diag.clear();
            upper.clear();
            for i in lo..hi {
                lower.push(-theta * dd * cur.lower[i]);
                diag.push(1.0 - theta * dd * cur.diag[i]);
                upper.push(-theta * dd * cur.upper[i]);
                let explicit = if theta < 1.0 {
                    (1.0 - theta) * dd * next.apply(known, i)
                } else {
                    0.0
                };
                rhs[i] = known[i] + explicit;
            }
            rhs[lo] += theta * dd * cur.lower[lo] * target[lo - 1];
            rhs[hi - 1] += theta * dd * cur.upper[hi - 1] * target[hi];
            let seg = &mut rhs[lo..hi];
            solve_in_place(&lower, &diag, &upper, seg, &mut scratch);
            target[lo..hi].copy_from_slice(seg);
        }

        if let Some(bad) = target[..n].iter().position(|v| !v.is_finite() || v.abs() > blowup) {
            return Err(Error::Solver(format!(
                "unstable march: C = {} at z = {}, delta = {delta}",
                target[bad], z[bad]
            )));
        }
        next = cur;
    }

    let mut sol = PdeSolution { grid: *grid, params: *params, c, max_residual: 0.0, scheme };
    sol.max_residual = sol.max_residual_where(|_, _| true);
    Ok(sol)
}
