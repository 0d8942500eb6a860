//! Heston diffusion analytics: log-price characteristic function, the transform kernel in
//! the variance direction, and the compound-Poisson factor of the Bates model.

pub mod bessel;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::models::{HestonParams, JumpSizeDist};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// CF of `ln(S_tau / S_0)` under Heston, without jumps.
pub fn cf_heston(u: f64, tau: f64, hp: &HestonParams) -> Complex64 {
    let (k, th, e, rho) = (hp.kappa(), hp.theta(), hp.eta(), hp.rho());
    let iu = I * u;
    let b = k - rho * e * iu;
    let s = iu + u * u;
    let d = (b * b + e * e * s).sqrt();
    // (b - d) / eta^2 without cancellation
    let bmd = -s / (b + d);
    let g = bmd * e * e / (b + d);
    let edt = (-d * tau).exp();
    let one_m_edt = -exp_m1(-d * tau);
    let c = iu * hp.r() * tau
        + k * th * (bmd * tau - 2.0 / (e * e) * (ln_1p(-g * edt) - ln_1p(-g)));
    let dd = bmd * one_m_edt / (1.0 - g * edt);
    (c + dd * hp.v0()).exp()
}

fn ln_1p(z: Complex64) -> Complex64 {
    let w = 1.0 + z;
    if w == Complex64::new(1.0, 0.0) {
        z
    } else {
        w.ln() * z / (w - 1.0)
    }
}

fn exp_m1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        z * (1.0 + z * (0.5 + z / 6.0))
    } else {
        z.exp() - 1.0
    }
}

/// Compound-Poisson jump factor `exp(lambda_b tau (psi_Y(v) - 1 - i v mu_bar))`.
pub fn cf_bates_jumps(v: f64, tau: f64, lambda_b: f64, jd: &JumpSizeDist) -> Complex64 {
    (lambda_b * tau * (jd.psi(v) - 1.0 - I * v * jd.mu_bar())).exp()
}

/// Kernel of the Heston transform in the variance direction:
/// `E[exp(i u (X_tau - X_0)) ; V_tau in dv_next | V_0 = v_now] / dv_next`.
///
/// CIR transition density times the conditional transform of the integrated variance,
/// assembled in log space with the Bessel function in its entire form.
pub fn psi_v(u: f64, v_next: f64, v_now: f64, tau: f64, hp: &HestonParams) -> Result<Complex64> {
    if !(tau > 0.0) {
        return Err(invalid("tau", format!("must be > 0, got {tau}")));
    }
    if v_next < 0.0 || v_now < 0.0 {
        return Err(invalid("v", "variances must be >= 0"));
    }
    let k = PsiVKernel::new(u, tau, hp)?;
    k.eval(v_next, v_now)
}

/// `psi_v` with all `(v_next, v_now)`-independent factors precomputed.
#[derive(Debug, Clone, Copy)]
pub struct PsiVKernel {
    u: f64,
    q: f64,
    ln_c: f64,
    c: f64,
    ekt: f64,
    rho_eta: f64,
    drift_const: f64,
    ln_r: Complex64,
    coth_term: Complex64,
    zk_scale: f64,
    zg_scale: Complex64,
}

impl PsiVKernel {
    pub fn new(u: f64, tau: f64, hp: &HestonParams) -> Result<Self> {
        let (k, th, e, rho) = (hp.kappa(), hp.theta(), hp.eta(), hp.rho());
        if th <= 0.0 {
            return Err(Error::Degenerate("variance kernel needs theta > 0".into()));
        }
        let e2 = e * e;
        let a = I * u * (k * rho / e - 0.5) - 0.5 * u * u * (1.0 - rho * rho);
        let gamma = (k * k - 2.0 * e2 * a).sqrt();
        let q = 2.0 * k * th / e2 - 1.0;
        let ekt = (-k * tau).exp();
        let one_k = -(-k * tau).exp_m1();
        let egt = (-gamma * tau).exp();
        let one_g = 1.0 - egt;
        let c = 2.0 * k / (e2 * one_k);
        let ln_r = gamma.ln() - k.ln() - 0.5 * (gamma - k) * tau + one_k.ln() - one_g.ln();
        let coth_term = (k * (1.0 + ekt) / one_k - gamma * (1.0 + egt) / one_g) / e2;
        Ok(Self {
            u,
            q,
            ln_c: c.ln(),
            c,
            ekt,
            rho_eta: rho / e,
            drift_const: hp.r() * tau - rho / e * k * th * tau,
            ln_r,
            coth_term,
            zk_scale: 4.0 * k * (-0.5 * k * tau).exp() / (e2 * one_k),
            zg_scale: 4.0 * gamma * (-0.5 * gamma * tau).exp() / (e2 * one_g),
        })
    }

    pub fn eval(&self, v_next: f64, v_now: f64) -> Result<Complex64> {
        let ln = self.ln_eval(v_next, v_now);
        let z = ln.exp();
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("variance kernel"));
        }
        Ok(z)
    }

    fn ln_eval(&self, vt: f64, vs: f64) -> Complex64 {
        let uu = self.c * vs * self.ekt;
        let w = self.c * vt;
        let root = (vs * vt).sqrt();
        let zg = self.zg_scale * root;
        let (ent, expo) = bessel::entire_scaled(self.q, zg);
        let drift = I * self.u * (self.drift_const + self.rho_eta * (vt - vs));
        drift + self.ln_c - (uu + w) + self.q * w.ln() + (1.0 + self.q) * self.ln_r
            + (vs + vt) * self.coth_term
            + ent.ln()
            + expo
    }

    /// Bessel argument of the pure CIR density, `2 sqrt(u w)`.
    pub fn z_kappa(&self, v_next: f64, v_now: f64) -> f64 {
        self.zk_scale * (v_next * v_now).sqrt()
    }
}

/// Quadrature nodes for the variance axis.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
}

impl VarianceGrid {
    /// Gauss-Legendre in `s` with `v = lower + (upper - lower) s^2` on the CIR range
    /// `[max(0, m - 20 sd), m + 20 sd]` at `horizon`.
    pub fn new(hp: &HestonParams, horizon: f64, n: usize) -> Result<Self> {
        Self::with_width(hp, horizon, n, 20.0)
    }

    /// As [`VarianceGrid::new`] with the range `m +- sds * sd`.
    pub fn with_width(hp: &HestonParams, horizon: f64, n: usize, sds: f64) -> Result<Self> {
        if !(sds > 0.0) {
            return Err(invalid("sds", format!("must be > 0, got {sds}")));
        }
        if n < 2 {
            return Err(invalid("n_v", "need at least 2 variance nodes"));
        }
        let (m, var) = hp.variance_moments(horizon);
        let sd = var.sqrt();
        let lower = (m - sds * sd).max(0.0);
        let upper = m + sds * sd;
        let gl = GaussLegendre::new(n).map_err(|e| invalid("n_v", e.to_string()))?;
        let span = upper - lower;
        let mut pairs: Vec<(f64, f64)> = gl
            .iter()
            .map(|(x, w)| {
                let s = 0.5 * (x + 1.0);
                (lower + span * s * s, 0.5 * w * 2.0 * span * s)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            lower,
            upper,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Scenario;
    use proptest::prelude::*;

    fn hp() -> HestonParams {
        Scenario::A.config().heston().unwrap()
    }

    fn integrate(u: f64, v0: f64, tau: f64, p: &HestonParams, f: impl Fn(f64) -> f64) -> Complex64 {
        let g = VarianceGrid::new(p, tau, 64).unwrap();
        let k = PsiVKernel::new(u, tau, p).unwrap();
        g.nodes
            .iter()
            .zip(&g.weights)
            .map(|(&v, &w)| k.eval(v, v0).unwrap() * w * f(v))
            .sum()
    }

    #[test]
    fn heston_normalization_and_symmetry() {
        let p = hp();
        assert!((cf_heston(0.0, 1.0, &p) - 1.0).norm() < 1e-15);
        let z = cf_heston(1.7, 0.8, &p);
        assert!((cf_heston(-1.7, 0.8, &p) - z.conj()).norm() < 1e-14);
    }

    #[test]
    fn heston_deterministic_variance_limit() {
        let p = HestonParams::new(9.0, 0.1, 0.16, 5.0, 0.16, 1e-5, 0.1).unwrap();
        for u in [0.5, 2.0, 5.0] {
            let bs = (I * u * (0.1 - 0.08) - 0.5 * u * u * 0.16).exp();
            assert!((cf_heston(u, 1.0, &p) - bs).norm() < 1e-5);
        }
    }

    #[test]
    fn heston_mean_log_return() {
        let p = hp();
        let h = 1e-5;
        let d = (cf_heston(h, 1.0, &p) - cf_heston(-h, 1.0, &p)) / (2.0 * h);
        let integrated_v = 0.16 + (0.0625 - 0.16) * (1.0 - (-5.0f64).exp()) / 5.0;
        assert!(((-I * d).re - (0.1 - 0.5 * integrated_v)).abs() < 1e-8);
    }

    #[test]
    fn bates_factor() {
        let jd = JumpSizeDist::new(-0.3, 0.4).unwrap();
        assert_eq!(cf_bates_jumps(1.0, 1.0, 0.0, &jd), Complex64::new(1.0, 0.0));
        assert!((cf_bates_jumps(0.0, 1.0, 3.0, &jd) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn kernel_marginalizes_to_cir_and_heston() {
        let p = hp();
        for &tau in &[1.0 / 24.0, 0.25, 1.0] {
            let mass = integrate(0.0, p.v0(), tau, &p, |_| 1.0);
            assert!((mass - 1.0).norm() < 1e-6, "tau={tau}: {mass}");
            let mean = integrate(0.0, p.v0(), tau, &p, |v| v);
            let want = p.theta() + (p.v0() - p.theta()) * (-p.kappa() * tau).exp();
            assert!((mean.re - want).abs() < 1e-6);
            for u in [0.5, 2.0, 7.0, -3.0] {
                let z = integrate(u, p.v0(), tau, &p, |_| 1.0);
                assert!((z - cf_heston(u, tau, &p)).norm() < 1e-6, "u={u} tau={tau}");
            }
        }
    }

    #[test]
    fn kernel_at_zero_variance_is_finite() {
        let p = hp();
        let z = psi_v(1.0, 0.1, 0.0, 0.5, &p).unwrap();
        assert!(z.norm().is_finite() && z.norm() > 0.0);
        assert!(psi_v(1.0, 0.1, 0.0, 0.0, &p).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn kernel_marginalization_randomized(u in -6.0f64..6.0, v0 in 0.01f64..0.4, tau in 0.05f64..1.5) {
            let c = Scenario::A.config();
            let p = HestonParams::new(c.s0, c.r, v0, c.kappa, c.theta, c.eta, c.rho).unwrap();
            let z = integrate(u, v0, tau, &p, |_| 1.0);
            prop_assert!((z - cf_heston(u, tau, &p)).norm() < 1e-6);
        }
    }
}
