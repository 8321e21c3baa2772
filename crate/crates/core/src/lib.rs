//! Simulation and analysis of log-ergodic price processes.
//!
//! The crate is organized around one pipeline: simulate a positive price
//! process in log space ([`stochastic`]), tame it with the ergodic maker
//! operator ([`emo`]), and check the result for mean ergodicity
//! ([`ergodicity`]). [`data`] runs the same pipeline on historical closes and
//! [`pde`] solves the ergodic Black-Scholes equation for the tamed variable.
//!
//! Runnable walkthroughs live in `examples/`; the `logergo` binary exposes
//! the pipeline from the command line.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod data;
pub mod emo;
pub mod ergodicity;
pub mod error;
pub mod io;
pub mod pde;
pub mod stochastic;

pub use error::{Error, Result};
