//! Time-average growth rate of price paths versus the ensemble drift.

use logergo::ergodicity::growth_rate_time_average;
use logergo::stochastic::{price_ensemble, GbmParams, ProcessSpec, TimeGrid};

fn main() -> logergo::Result<()> {
    let grid = TimeGrid::from_horizon(10.0, 2520)?;
    for (mu, sigma) in [(0.05, 0.1), (0.05, 0.3), (0.02, 0.2)] {
        let spec = ProcessSpec::Gbm(GbmParams { mu, sigma, s0: 1.0 });
        let g = growth_rate_time_average(&price_ensemble(&spec, &grid, 2_000, 4)?, grid.dt())?;
        // Each path grows at mu - sigma^2/2 even though E[S_t] grows at mu.
        println!("mu {mu} sigma {sigma}: g = {:+.4} +- {:.4} (mu - sigma^2/2 = {:+.4})", g.mean, g.std_error, mu - sigma * sigma / 2.0);
    }
    Ok(())
}
