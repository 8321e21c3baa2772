//! Path generation for Wiener, Ito and Levy processes on uniform grids, and
//! the drift/noise split of log-price processes.

mod grid;
mod levy;
mod path;
pub mod rng;
mod simulate;
mod spec;

pub use grid::TimeGrid;
pub use levy::{simulate_levy, LevyComponents, LevySimulation};
pub use path::{PathEnsemble, SamplePath};
pub use simulate::{
    generate_wiener, integrated_wiener, log_price_ensemble, price_ensemble, simulate_log_price,
    simulate_vol_driver, wiener_ensemble, ItoDecomposition, LogPriceSimulation,
};
pub use spec::{
    BoundedSinParams, GbmParams, JumpLaw, LevyParams, OuParams, ProcessSpec, StochVolParams,
    JUMP_THRESHOLD,
};
