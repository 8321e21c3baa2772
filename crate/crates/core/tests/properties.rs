//! Structural invariants over randomly drawn parameters.

use logergo::data::{load_price_csv, PriceSeries};
use logergo::emo::{apply_emo, apply_emo_levy, emo_product_l};
use logergo::ergodicity::{classify, detect_recurrence, limer_functional, CovarianceCurve, Verdict};
use logergo::io::{path_csv, read_path_csv};
use logergo::pde::{solve_ergodic_bs, ErgodicBsParams, PdeGrid, Scheme};
use logergo::stochastic::{
    simulate_levy, simulate_log_price, GbmParams, ItoDecomposition, JumpLaw, LevyParams, OuParams, ProcessSpec,
    SamplePath, TimeGrid,
};
use proptest::prelude::*;

fn grid() -> TimeGrid {
    TimeGrid::from_horizon(5.0, 50).unwrap()
}

fn close(a: &SamplePath, b: &SamplePath, tol: f64) -> bool {
    a.values().iter().zip(b.values()).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn decomposition(spec: &ProcessSpec, seed: u64) -> ItoDecomposition {
    simulate_log_price(spec, &grid(), seed).unwrap().decomposition
}

fn gbm_spec() -> impl Strategy<Value = ProcessSpec> {
    (-0.5..0.5f64, 0.01..1.0f64).prop_map(|(mu, sigma)| ProcessSpec::Gbm(GbmParams { mu, sigma, s0: 1.0 }))
}

fn ou_spec() -> impl Strategy<Value = ProcessSpec> {
    (-1.0..1.0f64, 0.1..3.0f64, 0.01..1.0f64).prop_map(|(theta, kappa, sigma)| {
        ProcessSpec::Ou(OuParams { theta, kappa, sigma, x0: theta, stationary_start: false })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reconstructs_log_price(spec in prop_oneof![gbm_spec(), ou_spec()], seed in any::<u64>()) {
        let sim = simulate_log_price(&spec, &grid(), seed).unwrap();
        prop_assert!(close(&sim.decomposition.reconstruct(), &sim.log_price, 1e-12));
    }

    #[test]
    fn simulation_is_deterministic(spec in prop_oneof![gbm_spec(), ou_spec()], seed in any::<u64>()) {
        let a = simulate_log_price(&spec, &grid(), seed).unwrap();
        let b = simulate_log_price(&spec, &grid(), seed).unwrap();
        prop_assert_eq!(a.log_price.values(), b.log_price.values());
    }

    #[test]
    fn emo_annihilates_initial_value(spec in gbm_spec(), seed in any::<u64>(), y0 in -10.0..10.0f64, beta in 1.6..3.0f64, w in -3.0..3.0f64) {
        let d = decomposition(&spec, seed);
        let a = apply_emo(&d, beta, w).unwrap();
        let b = apply_emo(&d.with_y0(y0), beta, w).unwrap();
        prop_assert_eq!(a.z_path.values(), b.z_path.values());
    }

    #[test]
    fn emo_is_linear(spec in gbm_spec(), s1 in any::<u64>(), s2 in any::<u64>(), c in -5.0..5.0f64, beta in 1.6..3.0f64, w in -3.0..3.0f64) {
        let (d1, d2) = (decomposition(&spec, s1), decomposition(&spec, s2));
        let z1 = apply_emo(&d1, beta, w).unwrap().z_path;
        let z2 = apply_emo(&d2, beta, w).unwrap().z_path;
        let scaled = apply_emo(&d1.scale(c), beta, w).unwrap().z_path;
        prop_assert!(close(&scaled, &z1.map(|z| c * z), 1e-12));
        let summed = apply_emo(&d1.add(&d2).unwrap(), beta, w).unwrap().z_path;
        prop_assert!(close(&summed, &z1.zip_with(&z2, |a, b| a + b).unwrap(), 1e-12));
    }

    #[test]
    fn emo_starts_at_zero(spec in prop_oneof![gbm_spec(), ou_spec()], seed in any::<u64>(), beta in 1.6..3.0f64, w in -3.0..3.0f64) {
        let z = apply_emo(&decomposition(&spec, seed), beta, w).unwrap().z_path;
        prop_assert_eq!(z.first(), 0.0);
    }

    #[test]
    fn product_factor_reuses_emo_scaling(spec in gbm_spec(), seed in any::<u64>(), beta in 1.6..3.0f64, w in -3.0..3.0f64) {
        // L of a decomposition with the parts swapped is the EMO of the original.
        let d = decomposition(&spec, seed);
        let swapped = ItoDecomposition::new(0.0, d.random_part().clone(), d.drift_part().clone()).unwrap();
        let l = emo_product_l(&swapped, beta, w).unwrap();
        prop_assert!(close(&l, &apply_emo(&d, beta, w).unwrap().z_path, 1e-12));
    }

    #[test]
    fn levy_emo_closure(eta in -0.5..0.5f64, sigma in 0.0..0.5f64, nu in 0.0..3.0f64, a in 0.1..2.0f64, seed in any::<u64>(), beta in 1.6..3.0f64, w in -3.0..3.0f64) {
        let p = LevyParams { eta, sigma, jump_intensity: nu, jump_law: JumpLaw::Symmetric, jump_amplitude: a, s0: 1.0 };
        let sim = simulate_levy(&p, &grid(), seed).unwrap();
        let z = apply_emo_levy(&sim.components, beta, w).unwrap().z_path;
        let via_log_price = apply_emo(&sim.into_log_price(0.0).unwrap().decomposition, beta, w).unwrap().z_path;
        prop_assert!(close(&z, &via_log_price, 1e-12));
    }

    #[test]
    fn recurrence_times_increase(values in prop::collection::vec(-1.0..1.0f64, 3..200), level in -0.5..0.5f64) {
        let n = values.len() - 1;
        let path = SamplePath::new(TimeGrid::from_horizon(n as f64, n).unwrap(), values, 0).unwrap();
        let rec = detect_recurrence(&path, level);
        prop_assert!(rec.crossing_times.windows(2).all(|w| w[1] > w[0]));
        prop_assert_eq!(rec.interval_lengths.len(), rec.crossing_times.len().saturating_sub(1));
        prop_assert!(rec.interval_lengths.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn functional_of_constant_covariance_is_half(c in 0.0..10.0f64, horizon in 0.5..50.0f64) {
        let lags: Vec<f64> = (0..=100).map(|k| horizon * k as f64 / 100.0).collect();
        let curve = CovarianceCurve::from_fn(lags, |_| c).unwrap();
        prop_assert!((limer_functional(&curve, horizon).unwrap() - c / 2.0).abs() <= 1e-12 * (1.0 + c));
    }

    #[test]
    fn mean_ergodic_verdict_respects_tolerance(f in prop::collection::vec(-1.0..1.0f64, 3..8), tol in 0.0..0.5f64) {
        if classify(&f, tol) == Verdict::MeanErgodic {
            prop_assert!(f.last().unwrap().abs() < tol);
        }
    }

    #[test]
    fn path_csv_round_trips(values in prop::collection::vec(-1e6..1e6f64, 2..100), t0 in -5.0..5.0f64, span in 0.1..100.0f64) {
        let n = values.len() - 1;
        let path = SamplePath::new(TimeGrid::new(t0, t0 + span, n).unwrap(), values, 0).unwrap();
        let back = read_path_csv(path_csv(&path).as_bytes()).unwrap();
        prop_assert_eq!(back.values(), path.values());
        prop_assert!((back.grid().dt() - path.grid().dt()).abs() <= 1e-9 * path.grid().dt());
    }

    #[test]
    fn price_csv_round_trips(closes in prop::collection::vec(0.01..1e4f64, 2..100)) {
        let start = chrono::NaiveDate::from_ymd_opt(2010, 1, 4).unwrap();
        let dates = (0..closes.len()).map(|k| start + chrono::Days::new(k as u64)).collect();
        let series = PriceSeries::new(dates, closes, 1.0 / 252.0).unwrap();
        let mut buf = Vec::new();
        series.write_csv(&mut buf).unwrap();
        let back = load_price_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.dates(), series.dates());
        prop_assert_eq!(back.closes(), series.closes());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pde_solution_is_nonnegative_and_monotone_in_abs_z(
        r in 0.0..0.1f64,
        log_k in -1.0..1.0f64,
        beta in 1.6..3.0f64,
        mu in -0.2..0.3f64,
        sigma in 0.05..0.5f64,
    ) {
        let p = ErgodicBsParams { r, strike: log_k.exp(), beta, mu, sigma };
        let grid = PdeGrid { z_min: -4.0, z_max: 4.0, n_z: 80, delta_min: 0.2, delta_t: 1.0, n_delta: 20 };
        let sol = solve_ergodic_bs(&p, &grid, Scheme::Implicit).unwrap();
        let mid = grid.zero_index();
        for j in 0..=grid.n_delta {
            let s = sol.slice(j);
            prop_assert!(s.iter().all(|&c| c >= -1e-12));
            prop_assert!(s[mid..].windows(2).all(|w| w[1] >= w[0] - 1e-12));
            prop_assert!(s[..=mid].windows(2).all(|w| w[0] >= w[1] - 1e-12));
        }
    }
}
