//! Price file -> GBM estimates -> tamed path on the last 300 trading days.
//!
//! `cargo run --example fig2_pipeline -- prices.csv`; without an argument the
//! bundled synthetic ten-year series is used.

use logergo::data::{empirical_z_path, estimate_gbm, load_price_csv_file, WienerSource};
use logergo::ergodicity::detect_recurrence;

fn main() -> logergo::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/synthetic_gbm_10y.csv").into());
    let series = load_price_csv_file(&path)?;
    let est = estimate_gbm(&series)?;
    println!("{} prices, mu_hat {:.4}, sigma_hat {:.4}", series.len(), est.mu_hat, est.sigma_hat);

    for source in [WienerSource::DataImplied, WienerSource::Simulated] {
        let out = empirical_z_path(&series, 2.0, 300, 0, source)?;
        let rec = detect_recurrence(&out.z_path, 0.0);
        println!(
            "{source:?}: T = {:.3} years, max|Z| = {:.3e}, {} zero crossings",
            out.horizon,
            out.z_path.max_abs(),
            rec.crossing_times.len()
        );
    }
    Ok(())
}
