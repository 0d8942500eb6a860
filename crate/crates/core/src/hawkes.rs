//! Exponential-kernel Hawkes analytics: intensity moments and the joint transform of
//! `(lambda_t, M_t)` from its affine Riccati system.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::models::{JumpParams, JumpSizeDist};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default RK4 resolution per unit of time.
pub const STEPS_PER_UNIT: f64 = 256.0;

/// Fixed-step classical RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OdeConfig {
    steps: usize,
}

impl OdeConfig {
    pub fn new(steps: usize) -> Result<Self> {
        if steps < 16 {
            return Err(invalid("steps", format!("must be >= 16, got {steps}")));
        }
        Ok(Self { steps })
    }

    /// Default resolution for a horizon: `max(16, ceil(256 tau))` steps.
    pub fn for_horizon(tau: f64) -> Self {
        Self {
            steps: ((STEPS_PER_UNIT * tau).ceil() as usize).max(16),
        }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// Solution `(A, B)` of the Riccati system after `tau` units of remaining time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HawkesCfState {
    pub a: Complex64,
    pub b: Complex64,
    pub tau: f64,
}

impl HawkesCfState {
    /// `exp(A + B lambda)` for a starting intensity `lambda`.
    pub fn eval(&self, lambda: f64) -> Complex64 {
        (self.a + self.b * lambda).exp()
    }
}

/// Integrates `dA = beta lambda* B`, `dB = e^{alpha B} psi_Y(v) - beta B - i v mu_bar - 1`
/// from `A = 0`, `B = iu`.
///
/// The free decay `iu e^{-beta t}` is split off and handled exactly, so RK4 only sees the
/// bounded remainder. This matters for large `u`, where the phase `u lambda` is large.
pub fn solve_riccati(
    u: f64,
    v: f64,
    tau: f64,
    jp: &JumpParams,
    jd: &JumpSizeDist,
    ode: OdeConfig,
) -> Result<HawkesCfState> {
    if tau < 0.0 {
        return Err(invalid("tau", "must be >= 0"));
    }
    let (al, be, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
    let psi = jd.psi(v);
    let shift = I * v * jd.mu_bar() + 1.0;
    let rhs = |t: f64, r: Complex64| (al * (I * u * (-be * t).exp() + r)).exp() * psi - be * r - shift;
    let n = ode.steps;
    let h = tau / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut r = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let t = i as f64 * h;
        let k1 = rhs(t, r);
        let r2 = r + 0.5 * h * k1;
        let k2 = rhs(t + 0.5 * h, r2);
        let r3 = r + 0.5 * h * k2;
        let k3 = rhs(t + 0.5 * h, r3);
        let r4 = r + h * k3;
        let k4 = rhs(t + h, r4);
        acc += h / 6.0 * (r + 2.0 * r2 + 2.0 * r3 + r4);
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    let a = I * u * ls * (-(-be * tau).exp_m1()) + be * ls * acc;
    let b = I * u * (-be * tau).exp() + r;
    if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
        return Err(Error::NonFinite("Hawkes Riccati integration"));
    }
    Ok(HawkesCfState { a, b, tau })
}

/// `E[exp(i u lambda_tau + i v M_tau)]` started from `lambda0`.
pub fn cf_joint_lambda_m(
    u: f64,
    v: f64,
    tau: f64,
    jp: &JumpParams,
    jd: &JumpSizeDist,
    ode: OdeConfig,
) -> Result<Complex64> {
    Ok(solve_riccati(u, v, tau, jp, jd, ode)?.eval(jp.lambda0()))
}

/// Jump factor of the log-asset characteristic function, `E[e^{i v M_tau}]`.
pub fn cf_m(v: f64, tau: f64, jp: &JumpParams, jd: &JumpSizeDist) -> Result<Complex64> {
    cf_joint_lambda_m(0.0, v, tau, jp, jd, OdeConfig::for_horizon(tau))
}

/// `E[lambda_tau]`; identical for the Hawkes and Q-Hawkes clocks.
pub fn intensity_mean(tau: f64, jp: &JumpParams) -> f64 {
    let lbar = jp.lambda_bar();
    lbar + (jp.lambda0() - lbar) * (-(jp.beta() - jp.alpha()) * tau).exp()
}

/// `Var[lambda_tau]` for the Hawkes intensity started at `lambda0`.
pub fn intensity_variance(tau: f64, jp: &JumpParams) -> f64 {
    let k = jp.beta() - jp.alpha();
    let lbar = jp.lambda_bar();
    let e1 = (-k * tau).exp();
    let stat = lbar * (-(-2.0 * k * tau).exp_m1()) / (2.0 * k);
    jp.alpha().powi(2) * (stat + (jp.lambda0() - lbar) * (e1 - e1 * e1) / k)
}

/// `E[integral of lambda over [0, tau]]`.
pub fn integrated_intensity_mean(tau: f64, jp: &JumpParams) -> f64 {
    let k = jp.beta() - jp.alpha();
    let lbar = jp.lambda_bar();
    lbar * tau + (jp.lambda0() - lbar) * (-(-k * tau).exp_m1()) / k
}
