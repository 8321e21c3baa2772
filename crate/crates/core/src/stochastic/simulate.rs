use rand::Rng;
use rand_distr::StandardNormal;

use super::grid::TimeGrid;
use super::levy::simulate_levy;
use super::path::{PathEnsemble, SamplePath};
use super::rng::{derive_seed, rng_from_seed, PathRng};
use super::spec::{BoundedSinParams, GbmParams, OuParams, ProcessSpec, StochVolParams};
use crate::error::{Error, Result};

/// Substream index for draws that do not drive `W` (initial states, jumps,
/// volatility drivers). Keeping them off the Wiener stream means the driving
/// `W` of any process equals `generate_wiener(grid, seed)`.
pub(crate) const AUX_STREAM: u64 = 0x5eed_a0c5;

pub(crate) fn aux_rng(seed: u64) -> PathRng {
    rng_from_seed(derive_seed(seed, AUX_STREAM))
}

pub(crate) fn normal(rng: &mut PathRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard Wiener path: `W_0 = 0`, independent `N(0, dt)` increments.
pub fn generate_wiener(grid: &TimeGrid, seed: u64) -> SamplePath {
    let mut rng = rng_from_seed(seed);
    let sqrt_dt = grid.dt().sqrt();
    let mut values = Vec::with_capacity(grid.len());
    let mut w = 0.0;
    values.push(w);
    for _ in 0..grid.n_steps() {
        w += sqrt_dt * normal(&mut rng);
        values.push(w);
    }
    SamplePath::from_parts(*grid, values, seed)
}

/// Cumulative trapezoidal integral `M_t = int_0^t w_s ds`.
pub fn integrated_wiener(w: &SamplePath) -> SamplePath {
    let half_dt = 0.5 * w.grid().dt();
    let v = w.values();
    let mut out = Vec::with_capacity(v.len());
    let mut acc = 0.0;
    out.push(acc);
    for pair in v.windows(2) {
        acc += half_dt * (pair[0] + pair[1]);
        out.push(acc);
    }
    SamplePath::from_parts(*w.grid(), out, w.seed())
}

/// `Y'_t = y0 + D_t + R_t` with `D_t = int mu ds` and `R_t = int sigma dW`.
#[derive(Debug, Clone, PartialEq)]
pub struct ItoDecomposition {
    y0: f64,
    drift_part: SamplePath,
    random_part: SamplePath,
}

impl ItoDecomposition {
    pub fn new(y0: f64, drift_part: SamplePath, random_part: SamplePath) -> Result<Self> {
        if drift_part.grid() != random_part.grid() {
            return Err(Error::InvalidArgument(
                "drift and random parts live on different grids".into(),
            ));
        }
        if drift_part.first() != 0.0 || random_part.first() != 0.0 {
            return Err(Error::InvalidArgument(
                "drift and random parts must start at 0".into(),
            ));
        }
        Ok(ItoDecomposition {
            y0,
            drift_part,
            random_part,
        })
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn drift_part(&self) -> &SamplePath {
        &self.drift_part
    }

    pub fn random_part(&self) -> &SamplePath {
        &self.random_part
    }

    pub fn grid(&self) -> &TimeGrid {
        self.drift_part.grid()
    }

    /// `y0 + D + R` pointwise.
    pub fn reconstruct(&self) -> SamplePath {
        let values = self
            .drift_part
            .values()
            .iter()
            .zip(self.random_part.values())
            .map(|(d, r)| self.y0 + d + r)
            .collect();
        SamplePath::from_parts(*self.grid(), values, self.drift_part.seed())
    }

    pub fn with_y0(&self, y0: f64) -> Self {
        ItoDecomposition { y0, ..self.clone() }
    }

    /// Decomposition of `a * Y'`.
    pub fn scale(&self, a: f64) -> Self {
        ItoDecomposition {
            y0: a * self.y0,
            drift_part: self.drift_part.map(|v| a * v),
            random_part: self.random_part.map(|v| a * v),
        }
    }

    /// Decomposition of `Y' + Z'`.
    pub fn add(&self, other: &ItoDecomposition) -> Result<Self> {
        Ok(ItoDecomposition {
            y0: self.y0 + other.y0,
            drift_part: self.drift_part.zip_with(&other.drift_part, |a, b| a + b)?,
            random_part: self.random_part.zip_with(&other.random_part, |a, b| a + b)?,
        })
    }

    /// Discrete `sum (sigma^2 + |mu|) dt`, using the realized quadratic
    /// variation of `R` for the `sigma^2 dt` terms and `|dD|` for `|mu| dt`.
    pub fn integrability_proxy(&self) -> f64 {
        let d = self.drift_part.values();
        let r = self.random_part.values();
        d.windows(2)
            .zip(r.windows(2))
            .map(|(dd, rr)| (rr[1] - rr[0]).powi(2) + (dd[1] - dd[0]).abs())
            .sum()
    }
}

/// Log-price path together with its decomposition and the Wiener path that
/// drove the stochastic integral.
#[derive(Debug, Clone)]
pub struct LogPriceSimulation {
    pub log_price: SamplePath,
    pub decomposition: ItoDecomposition,
    pub wiener: SamplePath,
}

impl LogPriceSimulation {
    /// `exp(Y')`, strictly positive by construction.
    pub fn price_path(&self) -> SamplePath {
        self.log_price.map(f64::exp)
    }

    pub fn terminal_wiener(&self) -> f64 {
        self.wiener.last()
    }
}

/// Accumulates `D` and `R` with left-point evaluation and checks every
/// accumulator for blow-up.
struct ItoAccumulator {
    y0: f64,
    drift: Vec<f64>,
    random: Vec<f64>,
    log_price: Vec<f64>,
}

impl ItoAccumulator {
    fn new(y0: f64, len: usize) -> Self {
        let mut acc = ItoAccumulator {
            y0,
            drift: Vec::with_capacity(len),
            random: Vec::with_capacity(len),
            log_price: Vec::with_capacity(len),
        };
        acc.drift.push(0.0);
        acc.random.push(0.0);
        acc.log_price.push(y0);
        acc
    }

    fn current(&self) -> f64 {
        self.log_price[self.log_price.len() - 1]
    }

    fn push(&mut self, step: usize, drift_increment: f64, random_increment: f64) -> Result<()> {
        let d = self.drift[self.drift.len() - 1] + drift_increment;
        let r = self.random[self.random.len() - 1] + random_increment;
        self.push_parts(step, d, r)
    }

    fn push_parts(&mut self, step: usize, d: f64, r: f64) -> Result<()> {
        let y = self.y0 + d + r;
        if !y.is_finite() || !d.is_finite() || !r.is_finite() {
            return Err(Error::Simulation {
                step,
                what: format!("non-finite state (D = {d}, R = {r})"),
            });
        }
        self.drift.push(d);
        self.random.push(r);
        self.log_price.push(y);
        Ok(())
    }

    fn finish(self, grid: &TimeGrid, seed: u64, wiener: SamplePath) -> LogPriceSimulation {
        let log_price = SamplePath::from_parts(*grid, self.log_price, seed);
        let decomposition = ItoDecomposition {
            y0: self.y0,
            drift_part: SamplePath::from_parts(*grid, self.drift, seed),
            random_part: SamplePath::from_parts(*grid, self.random, seed),
        };
        LogPriceSimulation {
            log_price,
            decomposition,
            wiener,
        }
    }
}

/// Euler-Maruyama simulation of the log-price `Y' = ln X` of `spec`.
pub fn simulate_log_price(spec: &ProcessSpec, grid: &TimeGrid, seed: u64) -> Result<LogPriceSimulation> {
    spec.validate()?;
    let wiener = generate_wiener(grid, seed);
    match spec {
        ProcessSpec::Gbm(p) => simulate_gbm(p, grid, seed, wiener),
        ProcessSpec::Ou(p) => simulate_ou(p, grid, seed, wiener),
        ProcessSpec::Levy(p) => {
            let levy = simulate_levy(p, grid, seed)?;
            levy.into_log_price(p.s0.ln())
        }
        ProcessSpec::StochVol(p) => simulate_stoch_vol(p, grid, seed, wiener),
        ProcessSpec::BoundedSin(p) => simulate_bounded_sin(p, grid, seed, wiener),
    }
}

fn simulate_gbm(p: &GbmParams, grid: &TimeGrid, seed: u64, wiener: SamplePath) -> Result<LogPriceSimulation> {
    // Constant coefficients: the Euler sums are exactly q t and sigma W.
    let q = p.log_drift();
    let mut acc = ItoAccumulator::new(p.s0.ln(), grid.len());
    for k in 1..grid.len() {
        acc.push_parts(k, q * grid.elapsed(k), p.sigma * wiener.values()[k])?;
    }
    Ok(acc.finish(grid, seed, wiener))
}

fn simulate_ou(p: &OuParams, grid: &TimeGrid, seed: u64, wiener: SamplePath) -> Result<LogPriceSimulation> {
    let y0 = if p.stationary_start {
        let mut aux = aux_rng(seed);
        p.theta + p.stationary_variance().sqrt() * normal(&mut aux)
    } else {
        p.x0
    };
    let dt = grid.dt();
    let w = wiener.values();
    let mut acc = ItoAccumulator::new(y0, grid.len());
    for k in 1..grid.len() {
        let mu = p.kappa * (p.theta - acc.current());
        acc.push(k, mu * dt, p.sigma * (w[k] - w[k - 1]))?;
    }
    Ok(acc.finish(grid, seed, wiener))
}

/// Simulates the volatility driver `V` on its own stream.
pub fn simulate_vol_driver(p: &StochVolParams, grid: &TimeGrid, seed: u64) -> SamplePath {
    let mut aux = aux_rng(seed);
    let dt = grid.dt();
    let sqrt_dt = dt.sqrt();
    let mut v = p.vol_x0;
    let mut values = Vec::with_capacity(grid.len());
    values.push(v);
    for _ in 0..grid.n_steps() {
        v += p.vol_kappa * (p.vol_theta - v) * dt + p.vol_sigma * sqrt_dt * normal(&mut aux);
        values.push(v);
    }
    SamplePath::from_parts(*grid, values, seed)
}

fn simulate_stoch_vol(
    p: &StochVolParams,
    grid: &TimeGrid,
    seed: u64,
    wiener: SamplePath,
) -> Result<LogPriceSimulation> {
    let driver = simulate_vol_driver(p, grid, seed);
    let dt = grid.dt();
    let w = wiener.values();
    let mut acc = ItoAccumulator::new(p.s0.ln(), grid.len());
    for k in 1..grid.len() {
        let sigma = p.clamp_vol(driver.values()[k - 1]);
        let mu = p.mu - 0.5 * sigma * sigma;
        acc.push(k, mu * dt, sigma * (w[k] - w[k - 1]))?;
    }
    Ok(acc.finish(grid, seed, wiener))
}

fn simulate_bounded_sin(
    p: &BoundedSinParams,
    grid: &TimeGrid,
    seed: u64,
    wiener: SamplePath,
) -> Result<LogPriceSimulation> {
    // d(gamma sin phi) = gamma cos(phi) dphi - gamma sigma^2 sin(phi) / 2 dt,
    // phi = mu t + sigma W.
    let dt = grid.dt();
    let w = wiener.values();
    let mut acc = ItoAccumulator::new(0.0, grid.len());
    for k in 1..grid.len() {
        let phi = p.mu * grid.elapsed(k - 1) + p.sigma * w[k - 1];
        let (s, c) = phi.sin_cos();
        let mu = p.gamma * (p.mu * c - 0.5 * p.sigma * p.sigma * s);
        let sigma = p.gamma * p.sigma * c;
        acc.push(k, mu * dt, sigma * (w[k] - w[k - 1]))?;
    }
    Ok(acc.finish(grid, seed, wiener))
}

/// Ensemble of log-price paths `Y'` for `spec`.
pub fn log_price_ensemble(spec: &ProcessSpec, grid: &TimeGrid, n_paths: usize, master_seed: u64) -> Result<PathEnsemble> {
    spec.validate()?;
    PathEnsemble::generate(*grid, n_paths, master_seed, |seed| {
        Ok(simulate_log_price(spec, grid, seed)?.log_price)
    })
}

/// Ensemble of price paths `exp(Y')` for `spec`.
pub fn price_ensemble(spec: &ProcessSpec, grid: &TimeGrid, n_paths: usize, master_seed: u64) -> Result<PathEnsemble> {
    spec.validate()?;
    PathEnsemble::generate(*grid, n_paths, master_seed, |seed| {
        Ok(simulate_log_price(spec, grid, seed)?.price_path())
    })
}

pub fn wiener_ensemble(grid: &TimeGrid, n_paths: usize, master_seed: u64) -> PathEnsemble {
    PathEnsemble::generate(*grid, n_paths, master_seed, |seed| Ok(generate_wiener(grid, seed)))
        .expect("wiener generation is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::spec::{JumpLaw, LevyParams};

    fn grid(t: f64, n: usize) -> TimeGrid {
        TimeGrid::from_horizon(t, n).unwrap()
    }

    fn gbm(mu: f64, sigma: f64) -> ProcessSpec {
        ProcessSpec::Gbm(GbmParams { mu, sigma, s0: 1.0 })
    }

    #[test]
    fn single_step_wiener_starts_at_zero() {
        let w = generate_wiener(&grid(1.0, 1), 99);
        assert_eq!(w.len(), 2);
        assert_eq!(w.first(), 0.0);
    }

    #[test]
    fn wiener_is_deterministic_per_seed() {
        let g = grid(1.0, 252);
        assert_eq!(generate_wiener(&g, 42), generate_wiener(&g, 42));
        assert_ne!(generate_wiener(&g, 42).values(), generate_wiener(&g, 43).values());
    }

    #[test]
    fn degenerate_gbm_is_flat_zero() {
        let sim = simulate_log_price(&gbm(0.0, 0.0), &grid(1.0, 50), 3).unwrap();
        assert!(sim.log_price.values().iter().all(|&v| v == 0.0));
        assert!(sim.decomposition.drift_part().values().iter().all(|&v| v == 0.0));
        assert!(sim.decomposition.random_part().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gbm_drift_part_is_log_drift_times_t() {
        let g = grid(2.0, 100);
        let sim = simulate_log_price(&gbm(0.1, 0.2), &g, 5).unwrap();
        for (k, d) in sim.decomposition.drift_part().values().iter().enumerate() {
            let t = g.elapsed(k);
            assert!((d - 0.08 * t).abs() <= 1e-15 * (1.0 + t), "k={k}");
        }
    }

    #[test]
    fn reconstruction_is_exact_for_every_variant() {
        let g = grid(3.0, 300);
        let specs = [
            gbm(0.1, 0.3),
            ProcessSpec::Ou(OuParams { theta: 0.5, kappa: 2.0, sigma: 0.4, x0: 0.0, stationary_start: true }),
            ProcessSpec::Levy(LevyParams {
                eta: 0.1,
                sigma: 0.2,
                jump_intensity: 3.0,
                jump_law: JumpLaw::Symmetric,
                jump_amplitude: 0.5,
                s0: 2.0,
            }),
            ProcessSpec::StochVol(StochVolParams {
                mu: 0.05,
                m1: 0.1,
                m2: 0.5,
                vol_theta: 0.2,
                vol_kappa: 1.0,
                vol_sigma: 0.3,
                vol_x0: 0.2,
                s0: 1.0,
            }),
            ProcessSpec::BoundedSin(BoundedSinParams { gamma: 1.0, mu: 0.3, sigma: 0.5 }),
        ];
        for spec in &specs {
            let sim = simulate_log_price(spec, &g, 17).unwrap();
            let rebuilt = sim.decomposition.reconstruct();
            for (a, b) in rebuilt.values().iter().zip(sim.log_price.values()) {
                assert!((a - b).abs() <= 1e-12, "{}", spec.name());
            }
            assert!(sim.decomposition.integrability_proxy().is_finite());
            assert!(sim.price_path().values().iter().all(|&x| x > 0.0));
            assert_eq!(sim.wiener, generate_wiener(&g, 17), "{}", spec.name());
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let spec = gbm(1e308, 0.0);
        let err = simulate_log_price(&spec, &grid(10.0, 10), 1).unwrap_err();
        assert!(err.is_numerical(), "{err}");
    }

    #[test]
    fn integrated_ramp_is_exact() {
        let g = grid(2.0, 40);
        let ramp = SamplePath::from_fn(g, |t| t);
        let m = integrated_wiener(&ramp);
        for (k, v) in m.values().iter().enumerate() {
            let t = g.time(k);
            assert!((v - 0.5 * t * t).abs() < 1e-13);
        }
        let zero = integrated_wiener(&SamplePath::zeros(g));
        assert!(zero.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sin_reconstruction_tracks_closed_form() {
        let p = BoundedSinParams { gamma: 1.5, mu: 0.4, sigma: 0.3 };
        let g = grid(5.0, 50_000);
        let sim = simulate_log_price(&ProcessSpec::BoundedSin(p), &g, 8).unwrap();
        let w = sim.wiener.values();
        let exact = p.gamma * (p.mu * 5.0 + p.sigma * w[w.len() - 1]).sin();
        assert!((sim.log_price.last() - exact).abs() < 1e-2);
    }
}
