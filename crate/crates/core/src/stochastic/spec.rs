use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jumps with `|size|` above this go to the large-jump part `J`; the rest are
/// compensated into the martingale part `M`.
pub const JUMP_THRESHOLD: f64 = 1.0;

/// Parametric family of simulable log-price processes.
///
/// Serialized as a flat JSON object with a `variant` discriminator, e.g.
/// `{"variant":"gbm","mu":0.1,"sigma":0.2,"s0":1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ProcessSpec {
    Gbm(GbmParams),
    Ou(OuParams),
    Levy(LevyParams),
    StochVol(StochVolParams),
    BoundedSin(BoundedSinParams),
}

/// `dS = mu S dt + sigma S dW`, i.e. log-drift `mu - sigma^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmParams {
    pub mu: f64,
    pub sigma: f64,
    pub s0: f64,
}

/// Ornstein-Uhlenbeck log-price `dY = kappa (theta - Y) dt + sigma dW`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuParams {
    pub theta: f64,
    pub kappa: f64,
    pub sigma: f64,
    pub x0: f64,
    /// Draw the start from the stationary law `N(theta, sigma^2 / (2 kappa))`
    /// instead of using `x0`.
    #[serde(default)]
    pub stationary_start: bool,
}

impl OuParams {
    pub fn stationary_variance(&self) -> f64 {
        self.sigma * self.sigma / (2.0 * self.kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpLaw {
    /// Every jump equals `+a`.
    Fixed,
    /// Jumps are `+a` or `-a` with probability 1/2 each.
    Symmetric,
}

/// `Y_t = eta t + sigma W_t + J_t + M_t` with Poisson jump arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyParams {
    pub eta: f64,
    pub sigma: f64,
    pub jump_intensity: f64,
    pub jump_law: JumpLaw,
    pub jump_amplitude: f64,
    #[serde(default = "one")]
    pub s0: f64,
}

impl LevyParams {
    /// Mean of a single jump restricted to `|size| <= JUMP_THRESHOLD`.
    pub fn small_jump_mean(&self) -> f64 {
        if self.jump_amplitude.abs() > JUMP_THRESHOLD {
            return 0.0;
        }
        match self.jump_law {
            JumpLaw::Fixed => self.jump_amplitude,
            JumpLaw::Symmetric => 0.0,
        }
    }
}

/// Stochastic volatility: `sigma_t = clamp(|V_t|, m1, m2)` with an OU driver
/// `V`, and log-drift `mu - sigma_t^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StochVolParams {
    pub mu: f64,
    pub m1: f64,
    pub m2: f64,
    pub vol_theta: f64,
    pub vol_kappa: f64,
    pub vol_sigma: f64,
    pub vol_x0: f64,
    #[serde(default = "one")]
    pub s0: f64,
}

impl StochVolParams {
    pub fn clamp_vol(&self, v: f64) -> f64 {
        v.abs().clamp(self.m1, self.m2)
    }
}

/// `Y_t = gamma * sin(mu t + sigma W_t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedSinParams {
    pub gamma: f64,
    pub mu: f64,
    pub sigma: f64,
}

fn one() -> f64 {
    1.0
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be finite, got {v}")))
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidSpec(msg()))
    }
}

impl GbmParams {
    pub fn validate(&self) -> Result<()> {
        finite("mu", self.mu)?;
        finite("sigma", self.sigma)?;
        finite("s0", self.s0)?;
        check(self.s0 > 0.0, || format!("GBM s0 must be positive, got {}", self.s0))?;
        check(self.sigma >= 0.0, || format!("GBM sigma must be non-negative, got {}", self.sigma))
    }

    /// Drift of the log-price, `mu - sigma^2 / 2`.
    pub fn log_drift(&self) -> f64 {
        self.mu - 0.5 * self.sigma * self.sigma
    }
}

impl OuParams {
    pub fn validate(&self) -> Result<()> {
        for (n, v) in [("theta", self.theta), ("kappa", self.kappa), ("sigma", self.sigma), ("x0", self.x0)] {
            finite(n, v)?;
        }
        check(self.kappa > 0.0, || format!("OU kappa must be positive, got {}", self.kappa))?;
        check(self.sigma >= 0.0, || format!("OU sigma must be non-negative, got {}", self.sigma))
    }
}

impl LevyParams {
    pub fn validate(&self) -> Result<()> {
        for (n, v) in [
            ("eta", self.eta),
            ("sigma", self.sigma),
            ("jump_intensity", self.jump_intensity),
            ("jump_amplitude", self.jump_amplitude),
            ("s0", self.s0),
        ] {
            finite(n, v)?;
        }
        check(self.jump_intensity >= 0.0, || {
            format!("jump intensity must be non-negative, got {}", self.jump_intensity)
        })?;
        check(self.sigma >= 0.0, || format!("Levy sigma must be non-negative, got {}", self.sigma))?;
        check(self.s0 > 0.0, || format!("Levy s0 must be positive, got {}", self.s0))
    }
}

impl StochVolParams {
    pub fn validate(&self) -> Result<()> {
        for (n, v) in [
            ("mu", self.mu),
            ("m1", self.m1),
            ("m2", self.m2),
            ("vol_theta", self.vol_theta),
            ("vol_kappa", self.vol_kappa),
            ("vol_sigma", self.vol_sigma),
            ("vol_x0", self.vol_x0),
            ("s0", self.s0),
        ] {
            finite(n, v)?;
        }
        check(self.m1 > 0.0 && self.m1 <= self.m2, || {
            format!("volatility bounds need 0 < m1 <= m2, got [{}, {}]", self.m1, self.m2)
        })?;
        check(self.vol_kappa > 0.0, || format!("vol_kappa must be positive, got {}", self.vol_kappa))?;
        check(self.vol_sigma >= 0.0, || format!("vol_sigma must be non-negative, got {}", self.vol_sigma))?;
        check(self.s0 > 0.0, || format!("s0 must be positive, got {}", self.s0))
    }
}

impl BoundedSinParams {
    pub fn validate(&self) -> Result<()> {
        finite("gamma", self.gamma)?;
        finite("mu", self.mu)?;
        finite("sigma", self.sigma)
    }
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::Gbm(p) => p.validate(),
            ProcessSpec::Ou(p) => p.validate(),
            ProcessSpec::Levy(p) => p.validate(),
            ProcessSpec::StochVol(p) => p.validate(),
            ProcessSpec::BoundedSin(p) => p.validate(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProcessSpec::Gbm(_) => "gbm",
            ProcessSpec::Ou(_) => "ou",
            ProcessSpec::Levy(_) => "levy",
            ProcessSpec::StochVol(_) => "stoch_vol",
            ProcessSpec::BoundedSin(_) => "bounded_sin",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ProcessSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_flat_with_variant_tag() {
        let spec = ProcessSpec::Gbm(GbmParams { mu: 0.1, sigma: 0.2, s0: 1.0 });
        let v: serde_json::Value = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["variant"], "gbm");
        assert_eq!(v["sigma"], 0.2);
        let back: ProcessSpec = serde_json::from_value(v).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn levy_json_defaults_s0() {
        let spec = ProcessSpec::from_json(
            r#"{"variant":"levy","eta":0.0,"sigma":0.1,"jump_intensity":2.0,"jump_law":"symmetric","jump_amplitude":1.5}"#,
        )
        .unwrap();
        match spec {
            ProcessSpec::Levy(p) => assert_eq!(p.s0, 1.0),
            _ => panic!("wrong variant"),
        }
    }

    #[test]
    fn invariants_are_enforced() {
        let gbm = |s0, sigma| ProcessSpec::Gbm(GbmParams { mu: 0.0, sigma, s0 });
        assert!(gbm(0.0, 0.1).validate().is_err());
        assert!(gbm(1.0, -0.1).validate().is_err());
        let ou = ProcessSpec::Ou(OuParams { theta: 0.0, kappa: 0.0, sigma: 1.0, x0: 0.0, stationary_start: false });
        assert!(ou.validate().is_err());
        let levy = LevyParams {
            eta: 0.0,
            sigma: 0.0,
            jump_intensity: -1.0,
            jump_law: JumpLaw::Fixed,
            jump_amplitude: 1.0,
            s0: 1.0,
        };
        assert!(levy.validate().is_err());
        let sv = StochVolParams {
            mu: 0.0,
            m1: 0.3,
            m2: 0.2,
            vol_theta: 0.2,
            vol_kappa: 1.0,
            vol_sigma: 0.1,
            vol_x0: 0.2,
            s0: 1.0,
        };
        assert!(sv.validate().is_err());
        assert!(StochVolParams { m1: 0.0, ..sv }.validate().is_err());
        assert!(StochVolParams { m1: 0.1, ..sv }.validate().is_ok());
    }

    #[test]
    fn clamp_keeps_vol_in_bounds() {
        let sv = StochVolParams {
            mu: 0.0,
            m1: 0.1,
            m2: 0.4,
            vol_theta: 0.2,
            vol_kappa: 1.0,
            vol_sigma: 0.1,
            vol_x0: 0.2,
            s0: 1.0,
        };
        assert_eq!(sv.clamp_vol(-0.05), 0.1);
        assert_eq!(sv.clamp_vol(-0.3), 0.3);
        assert_eq!(sv.clamp_vol(2.0), 0.4);
    }
}
