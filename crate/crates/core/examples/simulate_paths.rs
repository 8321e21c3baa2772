//! Simulates one log-price path per process family and prints where it ends.

use logergo::stochastic::{
    simulate_log_price, BoundedSinParams, GbmParams, JumpLaw, LevyParams, OuParams, ProcessSpec, StochVolParams,
    TimeGrid,
};

fn main() -> logergo::Result<()> {
    let grid = TimeGrid::from_horizon(1.0, 252)?;
    let specs = [
        ProcessSpec::Gbm(GbmParams { mu: 0.1, sigma: 0.2, s0: 1.0 }),
        ProcessSpec::Ou(OuParams { theta: 0.0, kappa: 2.0, sigma: 0.3, x0: 0.5, stationary_start: false }),
        ProcessSpec::Levy(LevyParams {
            eta: 0.05,
            sigma: 0.2,
            jump_intensity: 2.0,
            jump_law: JumpLaw::Symmetric,
            jump_amplitude: 0.3,
            s0: 1.0,
        }),
        ProcessSpec::StochVol(StochVolParams {
            mu: 0.1,
            m1: 0.1,
            m2: 0.5,
            vol_theta: 0.2,
            vol_kappa: 1.0,
            vol_sigma: 0.1,
            vol_x0: 0.2,
            s0: 1.0,
        }),
        ProcessSpec::BoundedSin(BoundedSinParams { gamma: 1.0, mu: 2.0, sigma: 0.5 }),
    ];
    for spec in &specs {
        let sim = simulate_log_price(spec, &grid, 7)?;
        let d = &sim.decomposition;
        println!(
            "{:<11} Y'(1) = {:+.4}  drift {:+.4}  noise {:+.4}  W(1) = {:+.4}",
            spec.name(),
            sim.log_price.last(),
            d.drift_part().last(),
            d.random_part().last(),
            sim.terminal_wiener()
        );
    }
    // The JSON form used by `logergo simulate --spec`.
    println!("{}", serde_json::to_string(&specs[0]).unwrap());
    Ok(())
}
