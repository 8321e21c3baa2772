use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform time axis `t_start + k * dt` for `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct TimeGrid {
    t_start: f64,
    horizon: f64,
    n_steps: usize,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    t_start: f64,
    horizon: f64,
    n_steps: usize,
}

impl TryFrom<RawGrid> for TimeGrid {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        TimeGrid::new(raw.t_start, raw.horizon, raw.n_steps)
    }
}

impl From<TimeGrid> for RawGrid {
    fn from(g: TimeGrid) -> Self {
        RawGrid {
            t_start: g.t_start,
            horizon: g.horizon,
            n_steps: g.n_steps,
        }
    }
}

impl TimeGrid {
    pub fn new(t_start: f64, horizon: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::InvalidGrid("n_steps must be at least 1".into()));
        }
        if !t_start.is_finite() || !horizon.is_finite() {
            return Err(Error::InvalidGrid("grid endpoints must be finite".into()));
        }
        if horizon <= t_start {
            return Err(Error::InvalidGrid(format!(
                "horizon {horizon} must exceed start {t_start}"
            )));
        }
        Ok(TimeGrid {
            t_start,
            horizon,
            n_steps,
        })
    }

    /// Grid on `[0, horizon]`.
    pub fn from_horizon(horizon: f64, n_steps: usize) -> Result<Self> {
        Self::new(0.0, horizon, n_steps)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Length of the covered interval, `horizon - t_start`.
    pub fn span(&self) -> f64 {
        self.horizon - self.t_start
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.span() / self.n_steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.dt()
    }

    /// Elapsed time since `t_start` at node `k`.
    pub fn elapsed(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(move |k| self.time(k))
    }
}
