//! Crossing times of a tamed path through zero, and of a toy quartic.

use logergo::emo::simulate_emo;
use logergo::ergodicity::detect_recurrence;
use logergo::stochastic::{GbmParams, ProcessSpec, SamplePath, TimeGrid};

fn main() -> logergo::Result<()> {
    let quartic = SamplePath::from_fn(TimeGrid::new(150.0, 180.0, 3000)?, |t| {
        (t - 158.0) * (t - 166.0) * (t - 168.0) * (t - 175.0) / 1000.0
    });
    let rec = detect_recurrence(&quartic, 0.0);
    println!("quartic crossings {:?}, intervals {:?}", rec.crossing_times, rec.interval_lengths);

    let spec = ProcessSpec::Gbm(GbmParams { mu: 0.1, sigma: 0.2, s0: 1.0 });
    let z = simulate_emo(&spec, &TimeGrid::from_horizon(100.0, 10_000)?, 11, 2.0)?.z_path;
    let rec = detect_recurrence(&z, 0.0);
    let longest = rec.interval_lengths.iter().copied().fold(0.0, f64::max);
    println!("Z returned to 0 {} times; longest excursion {longest:.2}", rec.crossing_times.len());
    Ok(())
}
