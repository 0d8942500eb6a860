//! Fourier-cosine expansions: truncation, characteristic-function plumbing, DCOS,
//! dimension-reduced densities, European and Bermudan pricing.

pub mod bermudan;
pub mod dcos;
pub mod european;
pub mod reduced;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hawkes;
use crate::heston::{cf_bates_jumps, cf_heston};
use crate::models::{Jumps, ModelSpec};
use crate::option::PayoffKind;
use crate::qhawkes;

/// Characteristic function of a scalar random variable.
pub trait CharFn: Sync {
    fn eval(&self, u: f64) -> Complex64;
}

impl<F> CharFn for F
where
    F: Fn(f64) -> Complex64 + Sync,
{
    fn eval(&self, u: f64) -> Complex64 {
        self(u)
    }
}

/// Which kind of analytic inverse a joint transform offers along its second axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inversion {
    None,
    /// Integer-valued second variable; the inverse is a Fourier-series coefficient.
    Discrete,
    /// Continuous second variable; the inverse is a density.
    Continuous,
}

/// Joint characteristic function of `(X, Y)`, `(u, v) -> E[e^{i u X + i v Y}]`.
pub trait JointCharFn: Sync {
    fn eval(&self, u: f64, v: f64) -> Complex64;

    fn inversion(&self) -> Inversion {
        Inversion::None
    }

    /// Inverse transform in `v` evaluated at `Y = y`, as a function of the `X` frequency.
    fn partial_inverse(&self, _u: f64, _y: f64) -> Option<Complex64> {
        None
    }
}

/// Truncation interval and number of cosine terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosGrid {
    pub a: f64,
    pub b: f64,
    pub n_terms: usize,
}

impl CosGrid {
    pub fn new(a: f64, b: f64, n_terms: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(invalid("grid", format!("need finite a < b, got [{a}, {b}]")));
        }
        if n_terms < 4 {
            return Err(invalid("n_terms", format!("need at least 4 terms, got {n_terms}")));
        }
        Ok(Self { a, b, n_terms })
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// `k pi / (b - a)`
    pub fn freq(&self, k: usize) -> f64 {
        k as f64 * std::f64::consts::PI / self.width()
    }

    pub fn shifted(&self, by: f64) -> Self {
        Self {
            a: self.a + by,
            b: self.b + by,
            n_terms: self.n_terms,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a < x && x < self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cumulants {
    pub c1: f64,
    pub c2: f64,
    pub c4: f64,
}

/// `[c1 - L sqrt(c2 + sqrt(c4)), c1 + L sqrt(c2 + sqrt(c4))]`.
pub fn cos_truncation(c: Cumulants, width: f64, n_terms: usize) -> Result<CosGrid> {
    for (x, name) in [(c.c1, "c1"), (c.c2, "c2"), (c.c4, "c4")] {
        if !x.is_finite() {
            return Err(Error::NonFinite(name));
        }
    }
    if c.c2 <= 0.0 {
        return Err(invalid("c2", format!("must be > 0, got {}", c.c2)));
    }
    let half = width * (c.c2 + c.c4.max(0.0).sqrt()).sqrt();
    CosGrid::new(c.c1 - half, c.c1 + half, n_terms)
}

/// Cumulants 1, 2 and 4 from central differences of `ln cf` at zero.
///
/// `c1` and `c2` use step `h`. The fourth difference loses about `eps / h^4` to roundoff,
/// so `c4` uses the larger of `h` and `0.1 / sqrt(c2)`, a step matched to the spread.
pub fn cumulants(cf: impl Fn(f64) -> Result<Complex64>, h: f64) -> Result<Cumulants> {
    let stencil = |h: f64| -> Result<[Complex64; 7]> {
        let mut l = [Complex64::new(0.0, 0.0); 7];
        for (j, slot) in l.iter_mut().enumerate() {
            let u = (j as f64 - 3.0) * h;
            *slot = if j == 3 { Complex64::new(0.0, 0.0) } else { cf(u)?.ln() };
        }
        Ok(l)
    };
    let [_, m2, m1, z, p1, p2, _] = stencil(h)?;
    let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    let d2 = (-p2 + 16.0 * p1 - 30.0 * z + 16.0 * m1 - m2) / (12.0 * h * h);
    let c2 = -d2.re;
    let h4 = if c2 > 0.0 && c2.is_finite() { h.max(0.1 / c2.sqrt()) } else { h };
    let [m3, m2, m1, z, p1, p2, p3] = stencil(h4)?;
    let d4 = (-p3 + 12.0 * p2 - 39.0 * p1 + 56.0 * z - 39.0 * m1 + 12.0 * m2 - m3) / (6.0 * h4.powi(4));
    Ok(Cumulants {
        c1: d1.im,
        c2,
        c4: d4.re,
    })
}

/// COS engine settings for log-price expansions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CosSettings {
    pub n_terms: usize,
    pub width: f64,
    pub cumulant_step: f64,
}

impl Default for CosSettings {
    fn default() -> Self {
        Self {
            n_terms: 256,
            width: 10.0,
            cumulant_step: 1e-3,
        }
    }
}

/// Jump factor of the log-asset CF, `E[e^{i v M_tau}]`.
pub fn jump_cf(jumps: &Jumps, v: f64, tau: f64) -> Result<Complex64> {
    match jumps {
        Jumps::QHawkes(jp, jd) => Ok(qhawkes::cf_m(v, tau, jp, jd)),
        Jumps::Hawkes(jp, jd) => hawkes::cf_m(v, tau, jp, jd),
        Jumps::Bates { lambda_b, dist } => Ok(cf_bates_jumps(v, tau, *lambda_b, dist)),
        Jumps::None => Ok(Complex64::new(1.0, 0.0)),
    }
}

/// CF of `ln(S_tau / S_0)`: Heston factor times jump factor.
pub fn cf_total(model: &ModelSpec, u: f64, tau: f64) -> Result<Complex64> {
    Ok(cf_heston(u, tau, &model.heston) * jump_cf(&model.jumps, u, tau)?)
}

/// Truncation grid for `ln(S_tau / S_0)` under `model`.
pub fn model_grid(model: &ModelSpec, tau: f64, settings: &CosSettings) -> Result<CosGrid> {
    let c = cumulants(|u| cf_total(model, u, tau), settings.cumulant_step)?;
    cos_truncation(c, settings.width, settings.n_terms)
}

/// `int_c^d e^x cos(w (x - a)) dx` and `int_c^d cos(w (x - a)) dx`.
pub fn chi_psi(w: f64, a: f64, c: f64, d: f64) -> (f64, f64) {
    let (sd, cd) = (w * (d - a)).sin_cos();
    let (sc, cc) = (w * (c - a)).sin_cos();
    let (ed, ec) = (d.exp(), c.exp());
    let chi = (cd * ed - cc * ec + w * (sd * ed - sc * ec)) / (1.0 + w * w);
    let psi = if w == 0.0 { d - c } else { (sd - sc) / w };
    (chi, psi)
}

/// Cosine coefficients `2/(b-a) int_c^d payoff(e^x) cos(u_k (x - a)) dx` of a put or call
/// with strike `strike` on the log-price axis, restricted to `[c, d]` within the payoff's
/// support.
///
/// The phases `e^{i u_k (x - a)}` at both ends advance by rotation and are re-anchored
/// every 64 terms, which keeps the per-strike cost well below that of a CF evaluation.
pub fn payoff_coefficients(kind: PayoffKind, strike: f64, grid: &CosGrid, c: f64, d: f64) -> Vec<f64> {
    let scale = 2.0 / grid.width();
    let lk = strike.ln();
    let (lo, hi) = match kind {
        PayoffKind::Put => (c, d.min(lk)),
        PayoffKind::Call => (c.max(lk), d),
    };
    if hi <= lo {
        return vec![0.0; grid.n_terms];
    }
    let (e_lo, e_hi) = (lo.exp(), hi.exp());
    let om = grid.freq(1);
    let phase = |k: usize, x: f64| Complex64::from_polar(1.0, k as f64 * om * (x - grid.a));
    let (step_lo, step_hi) = (phase(1, lo), phase(1, hi));
    let (mut z_lo, mut z_hi) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    (0..grid.n_terms)
        .map(|k| {
            if k % 64 == 0 {
                z_lo = phase(k, lo);
                z_hi = phase(k, hi);
            }
            let w = k as f64 * om;
            let chi = (z_hi.re * e_hi - z_lo.re * e_lo + w * (z_hi.im * e_hi - z_lo.im * e_lo)) / (1.0 + w * w);
            let psi = if k == 0 { hi - lo } else { (z_hi.im - z_lo.im) / w };
            z_lo *= step_lo;
            z_hi *= step_hi;
            scale
                * match kind {
                    PayoffKind::Put => strike * psi - chi,
                    PayoffKind::Call => chi - strike * psi,
                }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_properties() {
        let c = Cumulants {
            c1: 0.3,
            c2: 0.5,
            c4: 0.04,
        };
        let g = cos_truncation(c, 10.0, 64).unwrap();
        assert!(((g.a + g.b) / 2.0 - 0.3).abs() < 1e-15);
        let g2 = cos_truncation(c, 20.0, 64).unwrap();
        assert!((g2.width() - 2.0 * g.width()).abs() < 1e-12);
        assert!(cos_truncation(Cumulants { c2: f64::NAN, ..c }, 10.0, 64).is_err());
        assert!(cos_truncation(Cumulants { c2: 0.0, ..c }, 10.0, 64).is_err());
        assert!(CosGrid::new(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn gaussian_cumulants() {
        let (m, s2) = (0.2, 0.7);
        let c = cumulants(|u| Ok(Complex64::new(-0.5 * s2 * u * u, m * u).exp()), 1e-3).unwrap();
        assert!((c.c1 - m).abs() < 1e-10);
        assert!((c.c2 - s2).abs() < 1e-8);
        assert!(c.c4.abs() < 1e-8);
    }

    #[test]
    fn poisson_fourth_cumulant() {
        // Poisson(3): every cumulant equals 3
        let c = cumulants(|u| Ok((3.0 * (Complex64::new(0.0, u).exp() - 1.0)).exp()), 1e-3).unwrap();
        assert!((c.c1 - 3.0).abs() < 1e-9 && (c.c2 - 3.0).abs() < 1e-7 && (c.c4 - 3.0).abs() < 1e-2);
    }

    #[test]
    fn payoff_coefficients_match_closed_form() {
        let g = CosGrid::new(-3.0, 4.0, 300).unwrap();
        for (kind, k) in [(PayoffKind::Put, 1.0), (PayoffKind::Call, 2.5), (PayoffKind::Put, 100.0)] {
            let fast = payoff_coefficients(kind, k, &g, g.a, g.b);
            let (lo, hi) = match kind {
                PayoffKind::Put => (g.a, g.b.min(k.ln())),
                PayoffKind::Call => (g.a.max(k.ln()), g.b),
            };
            for (i, f) in fast.iter().enumerate() {
                let (chi, psi) = chi_psi(g.freq(i), g.a, lo, hi);
                let sign = if kind == PayoffKind::Put { 1.0 } else { -1.0 };
                let want = 2.0 / g.width() * sign * (k * psi - chi);
                assert!((f - want).abs() < 1e-12 * (1.0 + want.abs()), "{kind:?} {i}: {f} vs {want}");
            }
        }
        assert!(payoff_coefficients(PayoffKind::Call, 1e3, &g, g.a, g.b).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn chi_psi_by_quadrature() {
        let (w, a, c, d) = (1.3, -2.0, -0.5, 0.7);
        let n = 20000;
        let h = (d - c) / n as f64;
        let (mut chi, mut psi) = (0.0, 0.0);
        for i in 0..n {
            let x = c + (i as f64 + 0.5) * h;
            chi += x.exp() * (w * (x - a)).cos() * h;
            psi += (w * (x - a)).cos() * h;
        }
        let (c1, p1) = chi_psi(w, a, c, d);
        assert!((c1 - chi).abs() < 1e-8 && (p1 - psi).abs() < 1e-8);
    }
}
