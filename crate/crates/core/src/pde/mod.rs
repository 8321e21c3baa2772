//! Finite differences for the ergodic Black-Scholes equation
//!
//! `C_delta + r z C_z + B_delta^2 C_zz / 2 - r C = 0`
//!
//! with `B_delta = q / delta^(beta - 1) + sigma / delta^beta`, plus a
//! Feynman-Kac Monte Carlo oracle for cross-checking.

mod convergence;
mod mc;
mod params;
mod solver;
mod tridiag;

pub use convergence::{convergence_study, convergence_study_in, ConvergenceRow, ConvergenceTable, SmoothRegion};
pub use mc::{mc_price, mc_price_with, McBoundary, McConfig};
pub use params::{diffusion_coefficient, sde_coefficients, ErgodicBsParams, PdeConfig, PdeGrid};
pub use solver::{solve_ergodic_bs, PdeSolution, Scheme};
