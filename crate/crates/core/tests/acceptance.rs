//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p logergo-acceptance --test acceptance`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use logergo::emo::{apply_emo, emo_product_l};
use logergo::ergodicity::{
    detect_recurrence, growth_rate_time_average, inhibition_limit_check, limer_functional,
    variance_additivity_check, CovarianceCurve, EnsembleConfig, InhibitedProcess, Pipeline, Verdict,
};
use logergo::pde::{
    convergence_study, mc_price_with, solve_ergodic_bs, ErgodicBsParams, McConfig, PdeGrid, Scheme,
};
use logergo::stochastic::rng::derive_seed;
use logergo::stochastic::{
    price_ensemble, simulate_log_price, GbmParams, ItoDecomposition, JumpLaw, LevyParams, OuParams,
    ProcessSpec, SamplePath, StochVolParams, TimeGrid,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

fn gbm(mu: f64, sigma: f64) -> ProcessSpec {
    ProcessSpec::Gbm(GbmParams { mu, sigma, s0: 1.0 })
}

// ---- 1: inhibition limits ----

const INHIBITION_PATHS: usize = 100_000;

fn inhibition_data() -> Vec<(InhibitedProcess, f64, f64, f64, f64)> {
    let mut rows = Vec::new();
    for (k, process) in [InhibitedProcess::Wiener, InhibitedProcess::IntegratedWiener].into_iter().enumerate() {
        for (j, beta) in [2.0, 2.5].into_iter().enumerate() {
            let seed = derive_seed(1001, (2 * k + j) as u64);
            let table = inhibition_limit_check(process, beta, &[1.0, 10.0, 100.0], INHIBITION_PATHS, seed)
                .expect("inhibition check");
            rows.extend(table.into_iter().map(|r| (process, beta, r.t, r.sample_var, r.theory_var)));
        }
    }
    rows
}

fn criterion_1(rows: &[(InhibitedProcess, f64, f64, f64, f64)]) -> Outcome {
    let mut worst_w = 0.0f64;
    let mut worst_m = 0.0f64;
    let mut pass = true;
    for &(process, _, _, sample, theory) in rows {
        let dev = (sample / theory - 1.0).abs();
        match process {
            InhibitedProcess::Wiener => {
                worst_w = worst_w.max(dev);
                pass &= dev <= 0.03;
            }
            InhibitedProcess::IntegratedWiener => {
                worst_m = worst_m.max(dev);
                pass &= dev <= 0.05;
            }
        }
    }
    Outcome {
        pass,
        detail: format!(
            "max |sample/theory - 1|: W {:.2}% (limit 3%), M {:.2}% (limit 5%), {} rows",
            100.0 * worst_w,
            100.0 * worst_m,
            rows.len()
        ),
    }
}

// ---- 2: EMO algebra ----

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut track = |a: &[f64], b: &[f64]| {
        for (x, y) in a.iter().zip(b) {
            worst = worst.max((x - y).abs());
        }
    };
    for case in 0..100u64 {
        let seed = derive_seed(2002, case);
        let u = |k: u64| (derive_seed(seed, k) >> 11) as f64 / (1u64 << 53) as f64;
        let mu = -0.2 + 0.6 * u(1);
        let sigma = 0.05 + 0.5 * u(2);
        let horizon = 0.5 + 4.5 * u(3);
        let beta = 1.6 + 2.0 * u(4);
        let a = -3.0 + 6.0 * u(5);
        let grid = TimeGrid::from_horizon(horizon, 64 + (case as usize % 5) * 50).unwrap();
        let y = simulate_log_price(&gbm(mu, sigma), &grid, derive_seed(seed, 10)).unwrap();
        let z = simulate_log_price(&gbm(0.5 * mu, 1.5 * sigma), &grid, derive_seed(seed, 11)).unwrap();
        let w_t = y.terminal_wiener();
        let (dy, ry) = (&y.decomposition, &y.decomposition);
        let xi = |d: &ItoDecomposition| apply_emo(d, beta, w_t).unwrap().z_path;

        let base = xi(dy);
        // scalar
        let scaled = xi(&dy.scale(a));
        let expect: Vec<f64> = base.values().iter().map(|v| a * v).collect();
        track(scaled.values(), &expect);
        // additivity
        let sum = xi(&dy.add(&z.decomposition).unwrap());
        let parts: Vec<f64> = base.values().iter().zip(xi(&z.decomposition).values()).map(|(p, q)| p + q).collect();
        track(sum.values(), &parts);
        // annihilation of the constant
        track(xi(&dy.with_y0(123.456)).values(), base.values());
        // product rule
        let (d_y, r_y) = (dy.drift_part().values(), ry.random_part().values());
        let (d_z, r_z) = (z.decomposition.drift_part().values(), z.decomposition.random_part().values());
        let prod_drift: Vec<f64> = (0..grid.len()).map(|k| d_y[k] * d_z[k] + r_y[k] * r_z[k]).collect();
        let prod_noise: Vec<f64> = (0..grid.len()).map(|k| d_y[k] * r_z[k] + r_y[k] * d_z[k]).collect();
        let product = ItoDecomposition::new(
            0.0,
            SamplePath::new(grid, prod_drift, 0).unwrap(),
            SamplePath::new(grid, prod_noise, 0).unwrap(),
        )
        .unwrap();
        let lhs = xi(&product);
        let l = emo_product_l(dy, beta, w_t).unwrap();
        let rhs: Vec<f64> = (0..grid.len())
            .map(|k| d_z[k] * base.values()[k] + r_z[k] * l.values()[k])
            .collect();
        track(lhs.values(), &rhs);
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max pointwise deviation {worst:.3e} over 100 GBM decompositions (limit 1e-10)"),
    }
}

// ---- 3: main theorem verdicts ----

const HORIZONS: [f64; 4] = [50.0, 100.0, 200.0, 400.0];

fn verdict_cases() -> Vec<(&'static str, ProcessSpec, Pipeline, Verdict)> {
    let emo = Pipeline::Emo { beta: 2.0 };
    let levy = |nu: f64| {
        ProcessSpec::Levy(LevyParams {
            eta: 0.05,
            sigma: 0.2,
            jump_intensity: nu,
            jump_law: JumpLaw::Fixed,
            jump_amplitude: 1.5,
            s0: 1.0,
        })
    };
    vec![
        ("GBM", gbm(0.1, 0.2), emo, Verdict::MeanErgodic),
        (
            "OU",
            ProcessSpec::Ou(OuParams { theta: 0.5, kappa: 1.0, sigma: 0.3, x0: 0.5, stationary_start: true }),
            emo,
            Verdict::MeanErgodic,
        ),
        ("Levy nu=0", levy(0.0), emo, Verdict::MeanErgodic),
        ("Levy nu=2", levy(2.0), emo, Verdict::MeanErgodic),
        (
            "stoch-vol",
            ProcessSpec::StochVol(StochVolParams {
                mu: 0.1,
                m1: 0.1,
                m2: 0.5,
                vol_theta: 0.2,
                vol_kappa: 1.0,
                vol_sigma: 0.3,
                vol_x0: 0.2,
                s0: 1.0,
            }),
            emo,
            Verdict::MeanErgodic,
        ),
        ("raw log-GBM", gbm(0.1, 0.2), Pipeline::RawLogPrice, Verdict::Rejected),
    ]
}

fn verdict_data() -> Vec<(&'static str, Verdict, Verdict, Vec<f64>)> {
    verdict_cases()
        .into_iter()
        .enumerate()
        .map(|(k, (name, spec, pipeline, expected))| {
            let config = EnsembleConfig { n_paths: 10_000, steps_per_unit: 2.0, seed: derive_seed(3003, k as u64) };
            let report = pipeline
                .test(&spec, &HORIZONS, &config, logergo::ergodicity::DEFAULT_TOLERANCE)
                .expect("ergodicity test");
            let f = report.functional_values.iter().map(|&(_, v)| v).collect();
            (name, expected, report.verdict, f)
        })
        .collect()
}

fn criterion_3(data: &[(&'static str, Verdict, Verdict, Vec<f64>)]) -> Outcome {
    let pass = data.iter().all(|(_, want, got, _)| want == got);
    let detail = data
        .iter()
        .map(|(name, _, got, f)| format!("{name}: {got:?} (F(400) = {:.3e})", f[f.len() - 1]))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

// ---- 4: variance additivity ----

fn criterion_4() -> Outcome {
    let grid = TimeGrid::from_horizon(10.0, 100).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, (gamma, nu)) in [(1.0, 1.0), (2.0, -1.0)].into_iter().enumerate() {
        let check = variance_additivity_check(
            &gbm(0.1, 0.2),
            &gbm(0.05, 0.3),
            &grid,
            10_000,
            gamma,
            nu,
            2.0,
            (derive_seed(4004, 2 * k as u64), derive_seed(4004, 2 * k as u64 + 1)),
        )
        .expect("additivity check");
        let ratio = check.gap.abs() / check.gap_std_error;
        pass &= ratio < 3.0;
        parts.push(format!("(gamma, nu) = ({gamma}, {nu}): |gap| = {:.2} SE", ratio));
    }
    Outcome { pass, detail: parts.join("; ") }
}

// ---- 5: growth rate ----

fn criterion_5() -> Outcome {
    let grid = TimeGrid::from_horizon(1.0, 252).unwrap();
    let prices = price_ensemble(&gbm(0.1, 0.2), &grid, 10_000, 5005).expect("prices");
    let est = growth_rate_time_average(&prices, grid.dt()).expect("growth rate");
    let z = (est.mean - 0.08) / est.std_error;
    Outcome {
        pass: z.abs() <= 3.0,
        detail: format!("estimate {:.5} +/- {:.5}, {:.2} SE from 0.08", est.mean, est.std_error, z),
    }
}

// ---- 6: functional on the synthetic curve ----

fn synthetic_cov(tau: f64) -> f64 {
    (-2.0 * tau).exp() - (-tau / 2.0).exp()
}

fn simpson_rule(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = simpson_rule(f, a, m);
    let right = simpson_rule(f, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, left, tol / 2.0, depth - 1) + adaptive_simpson(f, m, b, right, tol / 2.0, depth - 1)
    }
}

fn oracle_functional(t: f64) -> f64 {
    let g = move |tau: f64| (1.0 - tau / t) * synthetic_cov(tau);
    adaptive_simpson(&g, 0.0, t, simpson_rule(&g, 0.0, t), 1e-14, 50) / t
}

fn criterion_6() -> Outcome {
    let n = 400_000;
    let lags: Vec<f64> = (0..=n).map(|k| 50.0 * k as f64 / n as f64).collect();
    let curve = CovarianceCurve::from_fn(lags, synthetic_cov).expect("curve");
    let mut worst = 0.0f64;
    let mut values = Vec::new();
    for t in [10.0, 50.0] {
        let v = limer_functional(&curve, t).expect("functional");
        worst = worst.max((v - oracle_functional(t)).abs());
        values.push(v);
    }
    let ratio = values[0].abs() / values[1].abs();
    Outcome {
        pass: worst <= 1e-8 && ratio >= 4.0,
        detail: format!(
            "F(10) = {:.7}, F(50) = {:.7}; max |toolkit - oracle| = {worst:.2e} (limit 1e-8); |F(10)|/|F(50)| = {ratio:.3} (limit 4)",
            values[0], values[1]
        ),
    }
}

// ---- 7: ergodic Black-Scholes ----

fn bs_params() -> ErgodicBsParams {
    ErgodicBsParams { r: 0.05, strike: 0.5f64.exp(), beta: 2.0, mu: 0.1, sigma: 0.2 }
}

const PROBES: [(f64, f64); 5] = [(1.0, 0.5), (-1.0, 0.5), (0.8, 0.5), (1.5, 0.5), (2.0, 0.75)];

struct PdeData {
    conditions_exact: bool,
    residual_orders: Vec<f64>,
    residuals: Vec<f64>,
    probes: Vec<(f64, f64, f64)>,
}

fn pde_data() -> PdeData {
    let p = bs_params();
    let base = PdeGrid { z_min: -8.0, z_max: 8.0, n_z: 128, delta_min: 0.1, delta_t: 1.0, n_delta: 36 };
    let table = convergence_study(&p, &base, 5, Scheme::CrankNicolson).expect("convergence study");
    let fine = PdeGrid { n_z: 1600, n_delta: 900, ..base };
    let sol = solve_ergodic_bs(&p, &fine, Scheme::CrankNicolson).expect("solve");
    let zero = fine.zero_index();
    let mut exact = sol.terminal_slice().iter().zip(sol.z_nodes()).all(|(&c, z)| c == p.payoff(z));
    exact &= (0..=fine.n_delta).all(|j| sol.value(zero, j) == 0.0);
    let probes = PROBES
        .iter()
        .enumerate()
        .map(|(k, &(z, d))| {
            let mc = mc_price_with(&p, z, d, &fine, &McConfig::new(1_000_000, 100, derive_seed(7007, k as u64)))
                .expect("mc price");
            (sol.interpolate(z, d).expect("probe on grid"), mc.mean, mc.std_error)
        })
        .collect();
    PdeData {
        conditions_exact: exact,
        residual_orders: table.residual_orders(),
        residuals: table.rows.iter().map(|r| r.residual).collect(),
        probes,
    }
}

fn criterion_7(d: &PdeData) -> Outcome {
    let order = *d.residual_orders.last().expect("orders");
    let mut pass = d.conditions_exact && order >= 1.8;
    let mut worst_rel = 0.0f64;
    for &(pde, mc, se) in &d.probes {
        let tol = (0.01 * mc.abs()).max(3.0 * se);
        pass &= (pde - mc).abs() <= tol;
        worst_rel = worst_rel.max((pde - mc).abs() / mc.abs());
    }
    Outcome {
        pass,
        detail: format!(
            "terminal/z=0 exact: {}; CN residual orders {:?} (limit 1.8); max PDE-MC relative gap {:.3}% at 5 probes",
            d.conditions_exact,
            d.residual_orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>(),
            100.0 * worst_rel
        ),
    }
}

// ---- 8: empirical Z path ----

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logergo-acceptance-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn criterion_8() -> Outcome {
    let prices = fixture("synthetic_gbm_10y.csv");
    let run = |tag: &str| {
        let out = scratch_dir(tag);
        let args = ["logergo", "fig2", "--prices", prices.to_str().unwrap(), "--beta", "2", "--window", "300", "--out"];
        let manifest = logergo::cli::run_from(args.iter().map(|s| s.to_string()).chain([out.display().to_string()]))
            .expect("fig2 run");
        (out, manifest.outputs)
    };
    let (a, files) = run("a");
    let (b, _) = run("b");
    let mut identical = true;
    for f in files.iter().map(String::as_str).chain(["manifest.json"]) {
        identical &= std::fs::read(a.join(f)).unwrap() == std::fs::read(b.join(f)).unwrap();
    }
    let text = std::fs::read_to_string(a.join("z_path.csv")).unwrap();
    let values: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let grid = TimeGrid::from_horizon(1.0, values.len() - 1).unwrap();
    let record = detect_recurrence(&SamplePath::new(grid, values.clone(), 0).unwrap(), 0.0);
    let returns = record.crossing_times.iter().filter(|&&t| t > 0.0).count();
    let _ = std::fs::remove_dir_all(&a);
    let _ = std::fs::remove_dir_all(&b);
    Outcome {
        pass: values[0] == 0.0 && returns >= 1 && identical && values.len() == 300,
        detail: format!(
            "{} points, Z_0 = {}, {} returns to zero after the start, reruns byte-identical: {identical}",
            values.len(),
            values[0],
            returns
        ),
    }
}

// ---- 9: determinism across thread counts ----

fn fingerprint_1(rows: &[(InhibitedProcess, f64, f64, f64, f64)]) -> Vec<u64> {
    rows.iter().flat_map(|r| [r.2.to_bits(), r.3.to_bits()]).collect()
}

fn fingerprint_3(data: &[(&'static str, Verdict, Verdict, Vec<f64>)]) -> Vec<u64> {
    data.iter().flat_map(|(_, _, v, f)| f.iter().map(|x| x.to_bits()).chain([*v as u64])).collect()
}

fn fingerprint_7(d: &PdeData) -> Vec<u64> {
    d.residuals
        .iter()
        .copied()
        .chain(d.probes.iter().flat_map(|&(a, b, c)| [a, b, c]))
        .map(f64::to_bits)
        .collect()
}

fn report(id: usize, name: &str, outcome: &Outcome, secs: f64, budget: Option<f64>) -> bool {
    let timely = budget.is_none_or(|b| secs <= b);
    let pass = outcome.pass && timely;
    let budget_note = budget.map_or(String::new(), |b| format!(" / budget {b:.0} s"));
    println!(
        "{} criterion {id}: {name}: {} [{secs:.1} s{budget_note}]",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail
    );
    pass
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64())
}

fn main() {
    let mut all = true;

    let ((rows_1, t1a), (rows_8, t1b)) = (timed(|| in_pool(1, inhibition_data)), timed(|| in_pool(8, inhibition_data)));
    all &= report(1, "inhibition limits", &criterion_1(&rows_8), t1a.max(t1b), Some(60.0));

    let (o2, t2) = timed(criterion_2);
    all &= report(2, "EMO algebra exactness", &o2, t2, Some(5.0));

    let ((v_1, t3a), (v_8, t3b)) = (timed(|| in_pool(1, verdict_data)), timed(|| in_pool(8, verdict_data)));
    all &= report(3, "main-theorem verdicts", &criterion_3(&v_8), t3a.max(t3b), Some(300.0));

    let (o4, t4) = timed(criterion_4);
    all &= report(4, "variance additivity", &o4, t4, None);

    let (o5, t5) = timed(criterion_5);
    all &= report(5, "growth rate", &o5, t5, None);

    let (o6, t6) = timed(criterion_6);
    all &= report(6, "covariance functional on the synthetic curve", &o6, t6, None);

    let ((p_1, t7a), (p_8, t7b)) = (timed(|| in_pool(1, pde_data)), timed(|| in_pool(8, pde_data)));
    all &= report(7, "ergodic Black-Scholes PDE", &criterion_7(&p_8), t7a.max(t7b), Some(180.0));

    let (o8, t8) = timed(criterion_8);
    all &= report(8, "empirical Z path pipeline", &o8, t8, None);

    let same = [
        ("1", fingerprint_1(&rows_1) == fingerprint_1(&rows_8)),
        ("3", fingerprint_3(&v_1) == fingerprint_3(&v_8)),
        ("7", fingerprint_7(&p_1) == fingerprint_7(&p_8)),
    ];
    let o9 = Outcome {
        pass: same.iter().all(|s| s.1),
        detail: same.iter().map(|(c, ok)| format!("criterion {c} bitwise equal: {ok}")).collect::<Vec<_>>().join("; "),
    };
    all &= report(9, "determinism for 1 vs 8 threads", &o9, 0.0, None);

    if !all {
        std::process::exit(1);
    }
}
