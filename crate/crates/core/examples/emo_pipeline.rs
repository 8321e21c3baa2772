//! Log-price -> Ito decomposition -> tamed path Z, with the inhibition degree
//! chosen from alpha and the algebraic identities the operator satisfies.

use logergo::emo::{apply_emo, emo_product_l, inhibition_degree};
use logergo::io::{emo_csv, emo_sidecar_json};
use logergo::stochastic::{simulate_log_price, GbmParams, ProcessSpec, TimeGrid};

fn main() -> logergo::Result<()> {
    let spec = ProcessSpec::Gbm(GbmParams { mu: 0.1, sigma: 0.2, s0: 1.0 });
    let grid = TimeGrid::from_horizon(10.0, 1000)?;
    let sim = simulate_log_price(&spec, &grid, 3)?;
    let w_t = sim.terminal_wiener();

    for alpha in [0.5, 1.0, 1.5, 3.0] {
        println!("alpha {alpha}: beta = {}", inhibition_degree(alpha)?.beta);
    }

    let d = &sim.decomposition;
    let z = apply_emo(d, 2.0, w_t)?;
    println!("Z(0) = {}, Z(T) = {:+.3e}, max|Z| = {:.3e}", z.z_path.first(), z.z_path.last(), z.z_path.max_abs());

    // Y0 drops out and the map is linear.
    let shifted = apply_emo(&d.with_y0(100.0), 2.0, w_t)?;
    let doubled = apply_emo(&d.scale(2.0), 2.0, w_t)?;
    println!("y0 annihilated: {}", shifted.z_path.values() == z.z_path.values());
    println!("linear: {:.1e}", (doubled.z_path.last() - 2.0 * z.z_path.last()).abs());

    let l = emo_product_l(d, 2.0, w_t)?;
    println!("product factor L(T) = {:+.3e}", l.last());

    let csv = emo_csv(&z);
    println!("{}", csv.lines().take(3).collect::<Vec<_>>().join("\n"));
    println!("{}", emo_sidecar_json(&z)?);
    Ok(())
}
