//! Mean-ergodicity verdicts for the same process, raw and through the EMO.

use logergo::ergodicity::{EnsembleConfig, Pipeline, DEFAULT_TOLERANCE};
use logergo::stochastic::{GbmParams, OuParams, ProcessSpec};

fn main() -> logergo::Result<()> {
    let config = EnsembleConfig { n_paths: 2_000, steps_per_unit: 2.0, seed: 1 };
    let horizons = [50.0, 100.0, 200.0, 400.0];
    let specs = [
        ProcessSpec::Gbm(GbmParams { mu: 0.1, sigma: 0.2, s0: 1.0 }),
        ProcessSpec::Ou(OuParams { theta: 0.0, kappa: 1.0, sigma: 0.3, x0: 0.0, stationary_start: true }),
    ];
    for spec in &specs {
        for pipeline in [Pipeline::RawLogPrice, Pipeline::Emo { beta: 2.0 }] {
            let report = pipeline.test(spec, &horizons, &config, DEFAULT_TOLERANCE)?;
            let f: Vec<String> = report.functional_values.iter().map(|(t, f)| format!("F({t})={f:.3e}")).collect();
            println!("{:<5} {:<16} {:?}: {}", spec.name(), format!("{pipeline:?}"), report.verdict, f.join(" "));
        }
    }
    Ok(())
}
