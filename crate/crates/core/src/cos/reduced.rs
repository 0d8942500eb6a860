//! Cosine expansion in one variable with the other variable inverted analytically.

use num_complex::Complex64;

use super::{CosGrid, Inversion, JointCharFn};
use crate::error::{Error, Result};
use crate::models::{JumpParams, JumpSizeDist};
use crate::qhawkes;

/// Joint transform of `(M_tau, Q_tau)` of the Q-Hawkes clock: `u` acts on `M`, `v` on `Q`.
#[derive(Debug, Clone, Copy)]
pub struct QHawkesJointCf {
    pub jp: JumpParams,
    pub jd: JumpSizeDist,
    pub tau: f64,
}

impl JointCharFn for QHawkesJointCf {
    fn eval(&self, u: f64, v: f64) -> Complex64 {
        qhawkes::cf_joint_qm(v, u, self.tau, &self.jp, &self.jd)
    }

    fn inversion(&self) -> Inversion {
        Inversion::Discrete
    }

    fn partial_inverse(&self, u: f64, y: f64) -> Option<Complex64> {
        if y < 0.0 || y.fract() != 0.0 {
            return Some(Complex64::new(0.0, 0.0));
        }
        let n = y as usize;
        Some(qhawkes::partial_inverse_row(n + 1, u, self.tau, self.jp.q0(), &self.jp, &self.jd)[n])
    }
}

/// Coefficients `2/(b-a) Re(e^{-i u_k a} inverse(u_k, y))` for a fixed `y`.
pub fn reduced_coefficients(cf2d: &dyn JointCharFn, y: f64, grid: &CosGrid) -> Result<Vec<f64>> {
    if cf2d.inversion() == Inversion::None {
        return Err(Error::Degenerate("joint transform has no analytic partial inverse".into()));
    }
    let scale = 2.0 / grid.width();
    (0..grid.n_terms)
        .map(|k| {
            let u = grid.freq(k);
            let z = cf2d
                .partial_inverse(u, y)
                .ok_or(Error::Degenerate("partial inverse unavailable".into()))?;
            Ok(scale * (Complex64::from_polar(1.0, -u * grid.a) * z).re)
        })
        .collect()
}

/// Joint density (or density times PMF for discrete `y`) of `(X, Y)` at `(x, y)`.
pub fn reduced_density(cf2d: &dyn JointCharFn, x: f64, y: f64, grid: &CosGrid) -> Result<f64> {
    let c = reduced_coefficients(cf2d, y, grid)?;
    Ok(sum_cos(&c, x, grid))
}

pub(crate) fn sum_cos(c: &[f64], x: f64, grid: &CosGrid) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, ck)| {
            let half = if k == 0 { 0.5 } else { 1.0 };
            half * ck * (grid.freq(k) * (x - grid.a)).cos()
        })
        .sum()
}
