//! Closed-form analytics of the Q-Hawkes clock: joint characteristic functions of
//! `(Q_t, N_t)` and `(Q_t, M_t)`, the PMF of `Q_t` and the analytic inverse in the `Q`
//! direction.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::models::{JumpParams, JumpSizeDist};

/// Below this clustering rate the self-exciting formulas are replaced by the Poisson limit.
/// They lose about `1e-16 / alpha` to cancellation, the limit is off by `O(alpha)`.
pub const ALPHA_EPS: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Log of the generalized binomial coefficient `C(n, k)` for real `n`, with its sign.
pub fn ln_binomial(n: f64, k: u32) -> (f64, f64) {
    let k = k as f64;
    let (a, sa) = libm::lgamma_r(n + 1.0);
    let (b, _) = libm::lgamma_r(k + 1.0);
    let (c, sc) = libm::lgamma_r(n - k + 1.0);
    (a - b - c, (sa * sc) as f64)
}

/// Generalized binomial coefficient `C(n, k)`.
pub fn binomial(n: f64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if n >= 0.0 && n.fract() == 0.0 && k as f64 > n {
        return 0.0;
    }
    let (l, s) = ln_binomial(n, k);
    s * l.exp()
}

/// Quantities shared by the `(Q, M)` transform at a given `(v, tau)`.
#[derive(Debug, Clone, Copy)]
pub struct QhAux {
    pub f_v: Complex64,
    /// `beta + alpha (1 + i v mu_bar)`
    pub c_v: Complex64,
    /// `alpha psi_Y(v)`
    pub a_psi: Complex64,
    pub h_vt: Complex64,
    pub h_hat_vt: Complex64,
    pub p_vt: Complex64,
    /// `e^{-tau f}`
    pub e_vt: Complex64,
    pub tau: f64,
}

impl QhAux {
    pub fn new(v: f64, tau: f64, jp: &JumpParams, jd: &JumpSizeDist) -> Self {
        Self::from_parts(jd.psi(v), Complex64::new(0.0, jp.alpha() * v * jd.mu_bar()), tau, jp)
    }

    /// Generic form with jump CF `psi` and drift term `drift = i alpha v mu_bar`.
    fn from_parts(psi: Complex64, drift: Complex64, tau: f64, jp: &JumpParams) -> Self {
        let (a, b) = (jp.alpha(), jp.beta());
        let c = b + a + drift;
        let f = (c * c - 4.0 * a * b * psi).sqrt();
        let e = (-tau * f).exp();
        let a_psi = a * psi;
        let h = (1.0 + e) * f + (1.0 - e) * c;
        let h_hat = (1.0 + e) * f - (1.0 - e) * c;
        let p = ((1.0 + e) * f + (1.0 - e) * (c - 2.0 * a_psi)) / h;
        debug_assert!((1.0 - p).norm() <= 1.0 + 1e-9, "|1-p| > 1 at tau={tau}");
        Self {
            f_v: f,
            c_v: c,
            a_psi,
            h_vt: h,
            h_hat_vt: h_hat,
            p_vt: p,
            e_vt: e,
            tau,
        }
    }

    /// Log of the joint transform at `u`, with every non-integer power taken on a
    /// continuous branch through `D = h (1 - (1 - p) e^{iu})`.
    fn ln_cf(&self, u: f64, jp: &JumpParams) -> Complex64 {
        let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
        let eu = (I * u).exp();
        let (f, c, h) = (self.f_v, self.c_v, self.h_vt);
        let one_w = 1.0 - (1.0 - self.p_vt) * eu;
        let nq = 2.0 * b * (1.0 - self.e_vt) + self.h_hat_vt * eu;
        ls * self.tau / (2.0 * a) * (2.0 * b - c - f) + ls / a * ((2.0 * f / h).ln() - one_w.ln())
            + jp.q0() as f64 * (nq / (h * one_w)).ln()
    }

    /// `c - 2 alpha psi_Y e^{iu}`
    pub fn g_uv(&self, u: f64) -> Complex64 {
        self.c_v - 2.0 * self.a_psi * (I * u).exp()
    }
}

/// Parameters of the activation-number PMF at elapsed time `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmfAux {
    pub p_t: f64,
    /// May exceed one for large `tau`; the PMF formula stays valid.
    pub g_t: f64,
    pub tau: f64,
}

impl PmfAux {
    pub fn new(tau: f64, jp: &JumpParams) -> Self {
        let (a, b) = (jp.alpha(), jp.beta());
        let ex = ((a - b) * tau).exp();
        Self {
            p_t: (b - a) / (b - a * ex),
            g_t: -b * ((a - b) * tau).exp_m1() / (b - a),
            tau,
        }
    }
}

/// `E[exp(i u Q_tau + i v N_tau)]` started from `Q_0 = q0`.
pub fn cf_joint_qn(u: f64, v: f64, tau: f64, jp: &JumpParams) -> Complex64 {
    let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
    let q0 = jp.q0() as f64;
    if tau == 0.0 {
        return (I * u * q0).exp();
    }
    if a < ALPHA_EPS {
        let s = (-b * tau).exp();
        let ev = (I * v).exp();
        let ln = ls * (tau * (ev - 1.0) + ev * ((I * u).exp() - 1.0) * (-(-b * tau).exp_m1()) / b)
            + q0 * (1.0 + ((I * u).exp() - 1.0) * s).ln();
        return ln.exp();
    }
    let aux = QhAux::from_parts((I * v).exp(), Complex64::new(0.0, 0.0), tau, jp);
    aux.ln_cf(u, jp).exp()
}

/// `E[exp(i u Q_tau + i v M_tau)]` where `M` is the compensated log-jump sum.
pub fn cf_joint_qm(u: f64, v: f64, tau: f64, jp: &JumpParams, jd: &JumpSizeDist) -> Complex64 {
    let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
    let q0 = jp.q0() as f64;
    if tau == 0.0 {
        return (I * u * q0).exp();
    }
    let eu = (I * u).exp();
    if a < ALPHA_EPS {
        let psi = jd.psi(v);
        let s = (-b * tau).exp();
        let ln = ls
            * (tau * (psi - 1.0 - I * v * jd.mu_bar()) + psi * (eu - 1.0) * (-(-b * tau).exp_m1()) / b)
            + q0 * (1.0 + (eu - 1.0) * s).ln();
        return ln.exp();
    }
    QhAux::new(v, tau, jp, jd).ln_cf(u, jp).exp()
}

/// Jump factor of the log-asset characteristic function, `E[e^{i v M_tau}]`.
pub fn cf_m(v: f64, tau: f64, jp: &JumpParams, jd: &JumpSizeDist) -> Complex64 {
    cf_joint_qm(0.0, v, tau, jp, jd)
}

fn check_alpha(jp: &JumpParams) -> Result<()> {
    if jp.alpha() < ALPHA_EPS {
        return Err(Error::Degenerate(format!(
            "alpha = {} is below {ALPHA_EPS}; use the Poisson branch",
            jp.alpha()
        )));
    }
    Ok(())
}

/// `P[Q_tau = x | Q_0 = q0]`.
pub fn pmf_q(x: u32, tau: f64, jp: &JumpParams) -> Result<f64> {
    check_alpha(jp)?;
    if tau < 0.0 {
        return Err(invalid("tau", "must be >= 0"));
    }
    let q0 = jp.q0();
    if tau == 0.0 {
        return Ok(if x == q0 { 1.0 } else { 0.0 });
    }
    let aux = PmfAux::new(tau, jp);
    let (p, g) = (aux.p_t, aux.g_t);
    let r = jp.lambda_star() / jp.alpha() + q0 as f64;
    let mut total = 0.0;
    for k in 0..=x.min(q0) {
        let y = x - k;
        let nb = if r == 0.0 {
            if y == 0 { 1.0 } else { 0.0 }
        } else {
            let (l, _) = ln_binomial(y as f64 + r - 1.0, y);
            (l + r * p.ln() + y as f64 * (1.0 - p).ln()).exp()
        };
        let bin = binomial(q0 as f64, k) * g.powi((q0 - k) as i32) * (1.0 - g).powi(k as i32);
        total += nb * bin;
    }
    Ok(total)
}

/// `(1 / 2 pi) * integral over u of cf_joint_qm(u, v, tau) e^{-iux}` for `x = 0..n`,
/// started from `q_start` activations.
pub fn partial_inverse_row(
    n: usize,
    v: f64,
    tau: f64,
    q_start: u32,
    jp: &JumpParams,
    jd: &JumpSizeDist,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if tau == 0.0 {
        if (q_start as usize) < n {
            out[q_start as usize] = Complex64::new(1.0, 0.0);
        }
        return out;
    }
    let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
    let q0 = q_start as usize;
    if a < ALPHA_EPS {
        poisson_row(&mut out, v, tau, q_start, jp, jd);
        return out;
    }
    let aux = QhAux::new(v, tau, jp, jd);
    let (f, h, hh, p, e) = (aux.f_v, aux.h_vt, aux.h_hat_vt, aux.p_vt, aux.e_vt);
    let r = ls / a + q_start as f64;
    let ln_pre = ls * tau / (2.0 * a) * (b - a - I * a * jd.mu_bar() * v - f) + ls / a * (2.0 * f / h).ln()
        - q_start as f64 * h.ln();
    let pre = ln_pre.exp();
    let omp = 1.0 - p;
    let mut i1 = Vec::with_capacity(n);
    let mut pw = Complex64::new(1.0, 0.0);
    for y in 0..n {
        let nb = if r == 0.0 {
            if y == 0 { 1.0 } else { 0.0 }
        } else {
            ln_binomial(y as f64 + r - 1.0, y as u32).0.exp()
        };
        i1.push(pre * nb * pw);
        pw *= omp;
    }
    let base = 2.0 * b * (1.0 - e);
    let i2: Vec<Complex64> = (0..=q0)
        .map(|k| binomial(q0 as f64, k as u32) * hh.powu(k as u32) * base.powu((q0 - k) as u32))
        .collect();
    for (x, slot) in out.iter_mut().enumerate() {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..=x.min(q0) {
            s += i1[x - k] * i2[k];
        }
        *slot = s;
    }
    out
}

fn poisson_row(out: &mut [Complex64], v: f64, tau: f64, q_start: u32, jp: &JumpParams, jd: &JumpSizeDist) {
    let (b, ls) = (jp.beta(), jp.lambda_star());
    let psi = jd.psi(v);
    let surv = (-b * tau).exp();
    let c = ls * psi * (-(-b * tau).exp_m1()) / b;
    let front = (ls * tau * (psi - 1.0 - I * v * jd.mu_bar()) - c).exp();
    let n = out.len();
    // complex Poisson weights c^y / y!
    let mut pois = Vec::with_capacity(n);
    let mut t = Complex64::new(1.0, 0.0);
    for y in 0..n {
        pois.push(t);
        t *= c / (y as f64 + 1.0);
    }
    let q0 = q_start as usize;
    let bin: Vec<f64> = (0..=q0)
        .map(|k| binomial(q0 as f64, k as u32) * surv.powi(k as i32) * (1.0 - surv).powi((q0 - k) as i32))
        .collect();
    for (x, slot) in out.iter_mut().enumerate() {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..=x.min(q0) {
            s += bin[k] * pois[x - k];
        }
        *slot = front * s;
    }
}

/// Inverse transform of `cf_joint_qm` in the `Q` direction evaluated at `Q = x`.
pub fn partial_inverse_qm(x: u32, v: f64, tau: f64, jp: &JumpParams, jd: &JumpSizeDist) -> Result<Complex64> {
    check_alpha(jp)?;
    if tau < 0.0 {
        return Err(invalid("tau", "must be >= 0"));
    }
    Ok(partial_inverse_row(x as usize + 1, v, tau, jp.q0(), jp, jd)[x as usize])
}

/// PMF of `Q_tau` for `x = 0..n` from any starting level, including the Poisson limit.
pub fn activation_pmf_row(n: usize, tau: f64, q_start: u32, jp: &JumpParams, jd: &JumpSizeDist) -> Vec<f64> {
    partial_inverse_row(n, 0.0, tau, q_start, jp, jd).iter().map(|z| z.re).collect()
}

/// `E[M_tau]` for a clock started at `lambda0`; the same for Q-Hawkes and Hawkes.
pub fn mean_m(tau: f64, jp: &JumpParams, jd: &JumpSizeDist) -> f64 {
    let k = jp.beta() - jp.alpha();
    let decay = -(-k * tau).exp_m1() / k;
    let lbar = jp.lambda_bar();
    let integrated = lbar * tau + (jp.lambda0() - lbar) * decay;
    (jd.mu_y() - jd.mu_bar()) * integrated
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Scenario;
    use proptest::prelude::*;

    fn sc(s: Scenario) -> (JumpParams, JumpSizeDist) {
        let c = s.config();
        (c.jump_params().unwrap(), c.jump_dist().unwrap())
    }

    /// Independent oracle: RK4 on the Riccati system of the (Q, M) transform.
    fn riccati(u: f64, v: f64, tau: f64, jp: &JumpParams, jd: &JumpSizeDist) -> Complex64 {
        let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
        let psi = jd.psi(v);
        let drift = I * v * jd.mu_bar();
        let rhs = |bb: Complex64| -> (Complex64, Complex64) {
            let j = bb.exp() * psi - 1.0 - drift;
            (ls * j, a * j + b * ((-bb).exp() - 1.0))
        };
        let steps = 20000;
        let h = tau / steps as f64;
        let (mut aa, mut bb) = (Complex64::new(0.0, 0.0), I * u);
        for _ in 0..steps {
            let (a1, b1) = rhs(bb);
            let (a2, b2) = rhs(bb + 0.5 * h * b1);
            let (a3, b3) = rhs(bb + 0.5 * h * b2);
            let (a4, b4) = rhs(bb + h * b3);
            aa += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            bb += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        }
        (aa + bb * jp.q0() as f64).exp()
    }

    #[test]
    fn cf_qm_matches_riccati_oracle() {
        for s in [Scenario::A, Scenario::B] {
            let (jp, jd) = sc(s);
            for &(u, v, tau) in &[(0.7, 0.3, 1.0), (0.0, 5.0, 1.0), (2.0, -12.0, 0.5), (0.0, 40.0, 2.0), (-1.1, 25.0, 0.1)] {
                let z = cf_joint_qm(u, v, tau, &jp, &jd);
                let w = riccati(u, v, tau, &jp, &jd);
                assert!((z - w).norm() < 1e-9, "{s:?} {u} {v} {tau}: {z} vs {w}");
            }
        }
    }

    #[test]
    fn frozen_values() {
        let (jp, jd) = sc(Scenario::A);
        let z = cf_joint_qm(0.7, 0.3, 1.0, &jp, &jd);
        assert!((z - Complex64::new(0.5556244188632, 0.3119883663977)).norm() < 1e-11);
        let expect = [0.447496378, 0.214102848, 0.129112886, 0.080142373, 0.049834597];
        for (x, e) in expect.iter().enumerate() {
            assert!((pmf_q(x as u32, 1.0, &jp).unwrap() - e).abs() < 1e-9);
        }
    }

    #[test]
    fn qn_boundary_and_marginal() {
        let (jp, jd) = sc(Scenario::B);
        let z = cf_joint_qn(0.4, 1.0, 0.0, &jp);
        assert!((z - (I * 0.4 * 2.0).exp()).norm() < 1e-15);
        assert!((cf_joint_qn(0.0, 0.0, 1.3, &jp) - 1.0).norm() < 1e-13);
        assert!((cf_joint_qm(0.0, 0.0, 1.3, &jp, &jd) - 1.0).norm() < 1e-13);
        for u in [0.3, 1.0, 2.5] {
            let a = cf_joint_qn(u, 0.0, 0.8, &jp);
            let b = cf_joint_qm(u, 0.0, 0.8, &jp, &jd);
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn qn_solves_transport_pde() {
        let (jp, _) = sc(Scenario::A);
        let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
        for &(u, v, t) in &[(0.5, 0.2, 0.7), (1.3, -0.8, 1.5), (-2.0, 2.0, 0.3)] {
            let h = 1e-4;
            let dt = (cf_joint_qn(u, v, t + h, &jp) - cf_joint_qn(u, v, t - h, &jp)) / (2.0 * h);
            let du = (cf_joint_qn(u + h, v, t, &jp) - cf_joint_qn(u - h, v, t, &jp)) / (2.0 * h);
            let euv = (I * (u + v)).exp();
            let coef = a * (1.0 - euv) + b * (1.0 - (-I * u).exp());
            let res = dt - I * coef * du + ls * (1.0 - euv) * cf_joint_qn(u, v, t, &jp);
            assert!(res.norm() < 1e-5, "residual {res}");
        }
    }

    #[test]
    fn pmf_normalizes_and_degenerates() {
        for s in [Scenario::A, Scenario::B] {
            let (jp, _) = sc(s);
            let total: f64 = (0..=200).map(|x| pmf_q(x, 1.0, &jp).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-10, "{total}");
            assert_eq!(pmf_q(2, 0.0, &jp).unwrap(), 1.0);
            assert_eq!(pmf_q(3, 0.0, &jp).unwrap(), 0.0);
        }
        let jp = JumpParams::new(0.0, 3.0, 1.0, 1).unwrap();
        assert!(matches!(pmf_q(0, 1.0, &jp), Err(Error::Degenerate(_))));
        let jd = JumpSizeDist::new(0.0, 0.1).unwrap();
        assert!(partial_inverse_qm(0, 0.3, 1.0, &jp, &jd).is_err());
    }

    #[test]
    fn g_can_exceed_one_but_pmf_stays_valid() {
        let (jp, _) = sc(Scenario::B);
        assert!(PmfAux::new(1.0, &jp).g_t > 1.0);
        for x in 0..100 {
            let p = pmf_q(x, 1.0, &jp).unwrap();
            assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn integer_ratio_binomials_match_exact() {
        // lambda*/alpha = 3 so the top index is an integer
        let exact = |n: u64, k: u64| -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        };
        for n in 0..40u64 {
            for k in 0..=n {
                let b = binomial(n as f64, k as u32);
                assert!((b - exact(n, k)).abs() <= 1e-12 * exact(n, k).max(1.0));
            }
        }
    }

    #[test]
    fn partial_inverse_reduces_to_pmf() {
        for s in [Scenario::A, Scenario::B] {
            let (jp, jd) = sc(s);
            for x in 0..60 {
                let z = partial_inverse_qm(x, 0.0, 1.0, &jp, &jd).unwrap();
                let p = pmf_q(x, 1.0, &jp).unwrap();
                assert!((z.re - p).abs() < 1e-10 && z.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_inverse_reconstructs_cf() {
        for s in [Scenario::A, Scenario::B] {
            let (jp, jd) = sc(s);
            for &(u, v, tau) in &[(0.4, 0.9, 1.0), (2.0, -3.0, 0.25), (-1.0, 7.5, 1.0)] {
                let row = partial_inverse_row(400, v, tau, jp.q0(), &jp, &jd);
                let rec: Complex64 = row.iter().enumerate().map(|(x, z)| z * (I * u * x as f64).exp()).sum();
                let cf = cf_joint_qm(u, v, tau, &jp, &jd);
                assert!((rec - cf).norm() < 1e-8, "{s:?} {u} {v}: {rec} vs {cf}");
            }
        }
    }

    #[test]
    fn q0_zero_collapses_to_first_factor() {
        let (jp, jd) = sc(Scenario::A);
        let jp = jp.with_q0(0).unwrap();
        let aux = QhAux::new(0.8, 1.0, &jp, &jd);
        let row = partial_inverse_row(5, 0.8, 1.0, 0, &jp, &jd);
        let r = jp.lambda_star() / jp.alpha();
        let pre = (jp.lambda_star() / (2.0 * jp.alpha())
            * (jp.beta() - jp.alpha() - I * jp.alpha() * jd.mu_bar() * 0.8 - aux.f_v)
            + r * (2.0 * aux.f_v / aux.h_vt).ln())
        .exp();
        for (y, z) in row.iter().enumerate() {
            let i1 = pre * binomial(y as f64 + r - 1.0, y as u32) * (1.0 - aux.p_vt).powu(y as u32);
            assert!((z - i1).norm() < 1e-13);
        }
    }

    #[test]
    fn poisson_limit_is_continuous() {
        let (jp, jd) = sc(Scenario::A);
        let tiny = jp.with_alpha(1e-8).unwrap();
        let zero = jp.with_alpha(0.0).unwrap();
        for &(u, v) in &[(0.0, 1.0), (0.5, -2.0), (1.2, 6.0)] {
            let a = cf_joint_qm(u, v, 1.0, &tiny, &jd);
            let b = cf_joint_qm(u, v, 1.0, &zero, &jd);
            assert!((a - b).norm() < 1e-6 * b.norm().max(1e-3));
            assert!((cf_joint_qn(u, v, 1.0, &tiny) - cf_joint_qn(u, v, 1.0, &zero)).norm() < 1e-6);
            let ra = partial_inverse_row(12, v, 1.0, 2, &tiny, &jd);
            let rb = partial_inverse_row(12, v, 1.0, 2, &zero, &jd);
            for (x, y) in ra.iter().zip(&rb) {
                assert!((x - y).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn mean_m_limits_and_derivative() {
        let (jp, jd) = sc(Scenario::A);
        assert_eq!(mean_m(0.0, &jp, &jd), 0.0);
        let jd0 = JumpSizeDist::new(0.0, 1e-6).unwrap();
        assert!(mean_m(1.0, &jp, &jd0).abs() < 1e-10);
        // E[M] = -i d/dv cf at 0
        let h = 1e-5;
        let d = (cf_m(h, 1.0, &jp, &jd) - cf_m(-h, 1.0, &jp, &jd)) / (2.0 * h);
        assert!(((-I * d).re - mean_m(1.0, &jp, &jd)).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn cf_bounded_and_hermitian(u in -5.0f64..5.0, v in -5.0f64..5.0, tau in 0.01f64..3.0,
                                    alpha in 0.05f64..2.5, gap in 0.1f64..3.0, q0 in 0u32..5) {
            let jp = JumpParams::new(alpha, alpha + gap, 1.1, q0).unwrap();
            let jd = JumpSizeDist::new(-0.2, 0.4).unwrap();
            let z = cf_joint_qn(u, v, tau, &jp);
            prop_assert!(z.norm() <= 1.0 + 1e-10);
            let w = cf_joint_qm(u, v, tau, &jp, &jd);
            prop_assert!(w.norm() <= 1.0 + 1e-10);
            let c = cf_joint_qm(-u, -v, tau, &jp, &jd);
            prop_assert!((c - w.conj()).norm() < 1e-12);
        }

        #[test]
        fn one_minus_p_in_unit_disc(v in -50.0f64..50.0, tau in 0.0f64..5.0, alpha in 0.05f64..2.9) {
            let jp = JumpParams::new(alpha, 3.0, 1.1, 2).unwrap();
            let jd = JumpSizeDist::new(0.3, 0.4).unwrap();
            let aux = QhAux::new(v, tau, &jp, &jd);
            prop_assert!((1.0 - aux.p_vt).norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn pmf_nonnegative_and_matches_inverse(x in 0u32..40, tau in 0.05f64..3.0, alpha in 0.05f64..2.9, q0 in 0u32..6) {
            let jp = JumpParams::new(alpha, 3.0, 1.1, q0).unwrap();
            let jd = JumpSizeDist::new(0.3, 0.4).unwrap();
            let p = pmf_q(x, tau, &jp).unwrap();
            prop_assert!(p >= 0.0);
            let z = partial_inverse_qm(x, 0.0, tau, &jp, &jd).unwrap();
            prop_assert!((z.re - p).abs() < 1e-10);
        }
    }
}
