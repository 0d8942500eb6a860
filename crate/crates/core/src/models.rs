//! Parameter containers, scenario presets and the Bates intensity-matching rule.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Error, Result};

/// Self-exciting jump-clock parameters shared by the Q-Hawkes and Hawkes models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpParams {
    alpha: f64,
    beta: f64,
    lambda_star: f64,
    q0: u32,
}

impl JumpParams {
    /// Fails unless `0 <= alpha < beta` and `lambda_star >= 0`.
    pub fn new(alpha: f64, beta: f64, lambda_star: f64, q0: u32) -> Result<Self> {
        ensure_finite(alpha, "alpha")?;
        ensure_finite(beta, "beta")?;
        ensure_finite(lambda_star, "lambda_star")?;
        if alpha < 0.0 {
            return Err(invalid("alpha", format!("must be >= 0, got {alpha}")));
        }
        if beta <= 0.0 {
            return Err(invalid("beta", format!("must be > 0, got {beta}")));
        }
        if beta <= alpha {
            return Err(invalid(
                "beta",
                format!("stability requires beta > alpha, got beta={beta}, alpha={alpha}"),
            ));
        }
        if lambda_star < 0.0 {
            return Err(invalid("lambda_star", format!("must be >= 0, got {lambda_star}")));
        }
        Ok(Self {
            alpha,
            beta,
            lambda_star,
            q0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn lambda_star(&self) -> f64 {
        self.lambda_star
    }
    pub fn q0(&self) -> u32 {
        self.q0
    }

    /// Initial intensity `lambda_star + alpha * q0`.
    pub fn lambda0(&self) -> f64 {
        self.lambda_star + self.alpha * self.q0 as f64
    }

    /// Stationary intensity `beta * lambda_star / (beta - alpha)`.
    pub fn lambda_bar(&self) -> f64 {
        self.beta * self.lambda_star / (self.beta - self.alpha)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.beta, self.lambda_star, self.q0)
    }
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.alpha, beta, self.lambda_star, self.q0)
    }
    pub fn with_q0(&self, q0: u32) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.lambda_star, q0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HestonParams {
    s0: f64,
    r: f64,
    v0: f64,
    kappa: f64,
    theta: f64,
    eta: f64,
    rho: f64,
}

impl HestonParams {
    pub fn new(s0: f64, r: f64, v0: f64, kappa: f64, theta: f64, eta: f64, rho: f64) -> Result<Self> {
        for (x, name) in [
            (s0, "s0"),
            (r, "r"),
            (v0, "v0"),
            (kappa, "kappa"),
            (theta, "theta"),
            (eta, "eta"),
            (rho, "rho"),
        ] {
            ensure_finite(x, name)?;
        }
        if s0 <= 0.0 {
            return Err(invalid("s0", format!("must be > 0, got {s0}")));
        }
        if v0 < 0.0 {
            return Err(invalid("v0", format!("must be >= 0, got {v0}")));
        }
        if kappa <= 0.0 {
            return Err(invalid("kappa", format!("must be > 0, got {kappa}")));
        }
        if theta < 0.0 {
            return Err(invalid("theta", format!("must be >= 0, got {theta}")));
        }
        if eta <= 0.0 {
            return Err(invalid("eta", format!("must be > 0, got {eta}")));
        }
        if !(-1.0..=1.0).contains(&rho) {
            return Err(invalid("rho", format!("must lie in [-1, 1], got {rho}")));
        }
        Ok(Self {
            s0,
            r,
            v0,
            kappa,
            theta,
            eta,
            rho,
        })
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn v0(&self) -> f64 {
        self.v0
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Mean and variance of the CIR variance at time `t`.
    pub fn variance_moments(&self, t: f64) -> (f64, f64) {
        let (k, th, e, v0) = (self.kappa, self.theta, self.eta, self.v0);
        let ek = (-k * t).exp();
        let mean = th + (v0 - th) * ek;
        let var = v0 * e * e * ek * (1.0 - ek) / k + th * e * e * (1.0 - ek).powi(2) / (2.0 * k);
        (mean, var)
    }
}

/// Normally distributed log-jump sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpSizeDist {
    mu_y: f64,
    sigma_y: f64,
}

impl JumpSizeDist {
    pub fn new(mu_y: f64, sigma_y: f64) -> Result<Self> {
        ensure_finite(mu_y, "mu_y")?;
        ensure_finite(sigma_y, "sigma_y")?;
        if sigma_y <= 0.0 {
            return Err(invalid("sigma_y", format!("must be > 0, got {sigma_y}")));
        }
        Ok(Self { mu_y, sigma_y })
    }

    pub fn mu_y(&self) -> f64 {
        self.mu_y
    }
    pub fn sigma_y(&self) -> f64 {
        self.sigma_y
    }

    /// `E[e^Y - 1]`.
    pub fn mu_bar(&self) -> f64 {
        (self.mu_y + 0.5 * self.sigma_y * self.sigma_y).exp_m1()
    }

    /// Characteristic function of `Y`.
    pub fn psi(&self, v: f64) -> Complex64 {
        Complex64::new(-0.5 * v * v * self.sigma_y * self.sigma_y, v * self.mu_y).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Jumps {
    QHawkes(JumpParams, JumpSizeDist),
    Hawkes(JumpParams, JumpSizeDist),
    Bates { lambda_b: f64, dist: JumpSizeDist },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Hqh,
    Hh,
    Bates,
    Heston,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Hqh, ModelKind::Hh, ModelKind::Bates, ModelKind::Heston];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Hqh => "hqh",
            ModelKind::Hh => "hh",
            ModelKind::Bates => "bates",
            ModelKind::Heston => "heston",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hqh" => Ok(ModelKind::Hqh),
            "hh" => Ok(ModelKind::Hh),
            "bates" => Ok(ModelKind::Bates),
            "heston" => Ok(ModelKind::Heston),
            other => Err(Error::Config(format!("unknown model `{other}`"))),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub heston: HestonParams,
    pub jumps: Jumps,
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self.jumps {
            Jumps::QHawkes(..) => ModelKind::Hqh,
            Jumps::Hawkes(..) => ModelKind::Hh,
            Jumps::Bates { .. } => ModelKind::Bates,
            Jumps::None => ModelKind::Heston,
        }
    }
}

/// Average of `E[lambda_t]` over `[0, horizon]`.
pub fn bates_matching_intensity(jp: &JumpParams, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(invalid("horizon", format!("must be > 0, got {horizon}")));
    }
    let k = jp.beta - jp.alpha;
    let lbar = jp.lambda_bar();
    let x = k * horizon;
    // (1 - e^{-x}) / x, stable for small x
    let avg = if x < 1e-8 { 1.0 - 0.5 * x } else { -(-x).exp_m1() / x };
    Ok(lbar + (jp.lambda0() - lbar) * avg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    A,
    B,
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Scenario::A),
            "B" | "b" => Ok(Scenario::B),
            other => Err(Error::Config(format!("unknown scenario `{other}`"))),
        }
    }
}

/// Flat parameter set using the field names of the configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub alpha: f64,
    pub beta: f64,
    pub lambda_star: f64,
    pub q0: u32,
    pub mu_y: f64,
    pub sigma_y: f64,
    pub s0: f64,
    pub r: f64,
    pub v0: f64,
    pub kappa: f64,
    pub theta: f64,
    pub eta: f64,
    pub rho: f64,
}

impl Scenario {
    pub fn config(&self) -> ScenarioConfig {
        let (alpha, mu_y) = match self {
            Scenario::A => (2.0, -0.3),
            Scenario::B => (2.9, 0.3),
        };
        ScenarioConfig {
            alpha,
            beta: 3.0,
            lambda_star: 1.1,
            q0: 2,
            mu_y,
            sigma_y: 0.4,
            s0: 9.0,
            r: 0.1,
            v0: 0.0625,
            kappa: 5.0,
            theta: 0.16,
            eta: 0.9,
            rho: 0.1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::A => "A",
            Scenario::B => "B",
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn jump_params(&self) -> Result<JumpParams> {
        JumpParams::new(self.alpha, self.beta, self.lambda_star, self.q0)
    }
    pub fn jump_dist(&self) -> Result<JumpSizeDist> {
        JumpSizeDist::new(self.mu_y, self.sigma_y)
    }
    pub fn heston(&self) -> Result<HestonParams> {
        HestonParams::new(self.s0, self.r, self.v0, self.kappa, self.theta, self.eta, self.rho)
    }

    /// Builds the requested model. Bates uses the one-year matching intensity.
    pub fn model(&self, kind: ModelKind) -> Result<ModelSpec> {
        let heston = self.heston()?;
        let jumps = match kind {
            ModelKind::Heston => Jumps::None,
            _ => {
                let jp = self.jump_params()?;
                let jd = self.jump_dist()?;
                match kind {
                    ModelKind::Hqh => Jumps::QHawkes(jp, jd),
                    ModelKind::Hh => Jumps::Hawkes(jp, jd),
                    _ => Jumps::Bates {
                        lambda_b: bates_matching_intensity(&jp, 1.0)?,
                        dist: jd,
                    },
                }
            }
        };
        Ok(ModelSpec { heston, jumps })
    }
}

/// HQH model of a scenario together with its HH and Bates counterparts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioModels {
    pub hqh: ModelSpec,
    pub hh: ModelSpec,
    pub bates: ModelSpec,
}

pub fn scenario(name: Scenario) -> ScenarioModels {
    let cfg = name.config();
    let build = |k| cfg.model(k).expect("preset parameters are valid");
    ScenarioModels {
        hqh: build(ModelKind::Hqh),
        hh: build(ModelKind::Hh),
        bates: build(ModelKind::Bates),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scenario_a_preset() {
        let c = Scenario::A.config();
        assert_eq!((c.alpha, c.beta, c.lambda_star, c.q0), (2.0, 3.0, 1.1, 2));
        assert_eq!((c.mu_y, c.sigma_y, c.s0, c.r), (-0.3, 0.4, 9.0, 0.1));
        assert_eq!((c.v0, c.kappa, c.theta, c.eta, c.rho), (0.0625, 5.0, 0.16, 0.9, 0.1));
        let jp = c.jump_params().unwrap();
        assert!((jp.lambda0() - 5.1).abs() < 1e-15);
    }

    #[test]
    fn scenario_b_differs_only_in_alpha_and_mu() {
        let (a, b) = (Scenario::A.config(), Scenario::B.config());
        assert_eq!(b.alpha, 2.9);
        assert_eq!(b.mu_y, 0.3);
        assert_eq!(ScenarioConfig { alpha: 2.0, mu_y: -0.3, ..b }, a);
    }

    #[test]
    fn scenario_variants_share_heston() {
        let m = scenario(Scenario::B);
        assert_eq!(m.hqh.heston, m.bates.heston);
        assert_eq!(m.hh.kind(), ModelKind::Hh);
        match m.bates.jumps {
            Jumps::Bates { lambda_b, .. } => assert!(lambda_b > 0.0),
            _ => panic!("expected Bates jumps"),
        }
    }

    #[test]
    fn matching_degenerate_cases() {
        let jp = JumpParams::new(0.0, 3.0, 1.7, 0).unwrap();
        assert!((bates_matching_intensity(&jp, 1.0).unwrap() - 1.7).abs() < 1e-15);
        // lambda0 == lambda_bar: alpha q0 = alpha lambda* / (beta - alpha)
        let jp = JumpParams::new(1.0, 2.0, 1.0, 1).unwrap();
        assert!((jp.lambda0() - jp.lambda_bar()).abs() < 1e-15);
        assert!((bates_matching_intensity(&jp, 1.0).unwrap() - jp.lambda_bar()).abs() < 1e-14);
        let jp = JumpParams::new(1e-14, 3.0, 2.5, 4).unwrap();
        assert!((bates_matching_intensity(&jp, 1.0).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn config_roundtrip_and_errors() {
        let c = Scenario::B.config();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(ScenarioConfig::from_toml(&text).unwrap(), c);
        assert!(matches!(ScenarioConfig::from_toml("alpha = 1.0"), Err(Error::Config(_))));
        let bad = ScenarioConfig { beta: 1.0, ..c };
        assert!(bad.model(ModelKind::Hqh).is_err());
        assert!(bad.model(ModelKind::Heston).is_ok());
    }

    #[test]
    fn mu_bar_and_psi() {
        let jd = JumpSizeDist::new(-0.3, 0.4).unwrap();
        assert!((jd.mu_bar() - ((-0.3f64 + 0.08).exp() - 1.0)).abs() < 1e-15);
        assert_eq!(jd.psi(0.0), Complex64::new(1.0, 0.0));
        assert!((jd.psi(-1.3) - jd.psi(1.3).conj()).norm() < 1e-16);
    }

    proptest! {
        #[test]
        fn stability_condition(alpha in 0.0f64..10.0, beta in 0.01f64..10.0, ls in 0.0f64..5.0, q0 in 0u32..20) {
            let r = JumpParams::new(alpha, beta, ls, q0);
            prop_assert_eq!(r.is_ok(), beta > alpha);
        }

        #[test]
        fn matching_invariant_under_equivalent_parameterisations(
            alpha in 0.2f64..2.0, kappa in 0.2f64..3.0, ls in 0.1f64..2.0, q0 in 1u32..6, h in 0.1f64..3.0,
        ) {
            let a = JumpParams::new(alpha, alpha + kappa, ls, q0).unwrap();
            prop_assume!(a.lambda_bar() < a.lambda0());
            // same (lambda0, lambda_bar, beta - alpha) with one more activation
            let f = |x: f64| a.lambda_bar() * kappa / (x + kappa) + x * (q0 + 1) as f64 - a.lambda0();
            let (mut lo, mut hi) = (0.0, alpha);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 { lo = mid } else { hi = mid }
            }
            let a2 = 0.5 * (lo + hi);
            let b = JumpParams::new(a2, a2 + kappa, a.lambda_bar() * kappa / (a2 + kappa), q0 + 1).unwrap();
            prop_assert!((b.lambda0() - a.lambda0()).abs() < 1e-10);
            let (la, lb) = (bates_matching_intensity(&a, h).unwrap(), bates_matching_intensity(&b, h).unwrap());
            prop_assert!((la - lb).abs() < 1e-9 * la.max(1.0));
        }
    }
}
