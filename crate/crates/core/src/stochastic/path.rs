use rayon::prelude::*;

use super::grid::TimeGrid;
use super::rng::derive_seed;
use crate::error::{Error, Result};

/// One realized trajectory on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: TimeGrid,
    values: Vec<f64>,
    seed: u64,
}

impl SamplePath {
    pub fn new(grid: TimeGrid, values: Vec<f64>, seed: u64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "path has {} values but grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(SamplePath { grid, values, seed })
    }

    /// Deterministic path `values[k] = f(t_k)`, seed 0.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.times().map(f).collect();
        SamplePath {
            grid,
            values,
            seed: 0,
        }
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        SamplePath {
            grid,
            values: vec![0.0; grid.len()],
            seed: 0,
        }
    }

    pub(crate) fn from_parts(grid: TimeGrid, values: Vec<f64>, seed: u64) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        SamplePath { grid, values, seed }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Pointwise map, keeping grid and seed.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SamplePath {
        SamplePath {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            seed: self.seed,
        }
    }

    /// Pointwise combination of two paths on the same grid.
    pub fn zip_with(&self, other: &SamplePath, f: impl Fn(f64, f64) -> f64) -> Result<SamplePath> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("paths live on different grids".into()));
        }
        Ok(SamplePath {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            seed: self.seed,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// A set of paths sharing one grid, seeded from a single master seed.
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    grid: TimeGrid,
    paths: Vec<SamplePath>,
    master_seed: u64,
}

impl PathEnsemble {
    pub fn new(grid: TimeGrid, paths: Vec<SamplePath>, master_seed: u64) -> Result<Self> {
        if let Some(i) = paths.iter().position(|p| *p.grid() != grid) {
            return Err(Error::InvalidArgument(format!(
                "path {i} does not share the ensemble grid"
            )));
        }
        Ok(PathEnsemble {
            grid,
            paths,
            master_seed,
        })
    }

    /// Builds `n_paths` paths in parallel. Path `i` receives the seed
    /// `derive_seed(master_seed, i)`, so the result does not depend on the
    /// number of worker threads.
    pub fn generate<F>(grid: TimeGrid, n_paths: usize, master_seed: u64, make_path: F) -> Result<Self>
    where
        F: Fn(u64) -> Result<SamplePath> + Sync,
    {
        let paths = (0..n_paths as u64)
            .into_par_iter()
            .map(|i| make_path(derive_seed(master_seed, i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, paths, master_seed)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn paths(&self) -> &[SamplePath] {
        &self.paths
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Values of every path at grid node `k`, in path order.
    pub fn slice(&self, k: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.paths.iter().map(move |p| p.values[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_must_match_grid() {
        let g = TimeGrid::from_horizon(1.0, 4).unwrap();
        assert!(SamplePath::new(g, vec![0.0; 4], 1).is_err());
        assert!(SamplePath::new(g, vec![0.0; 5], 1).is_ok());
    }

    #[test]
    fn ensemble_rejects_foreign_grid() {
        let g = TimeGrid::from_horizon(1.0, 4).unwrap();
        let h = TimeGrid::from_horizon(2.0, 4).unwrap();
        let paths = vec![SamplePath::zeros(g), SamplePath::zeros(h)];
        assert!(PathEnsemble::new(g, paths, 0).is_err());
    }

    #[test]
    fn generated_seeds_follow_index() {
        let g = TimeGrid::from_horizon(1.0, 2).unwrap();
        let ens = PathEnsemble::generate(g, 5, 11, |seed| SamplePath::new(g, vec![0.0; 3], seed)).unwrap();
        for (i, p) in ens.paths().iter().enumerate() {
            assert_eq!(p.seed(), derive_seed(11, i as u64));
        }
    }
}
