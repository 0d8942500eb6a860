//! European puts and calls by cosine expansion of the log-price density.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{cf_total, model_grid, payoff_coefficients, CosGrid, CosSettings};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::option::{Exercise, OptionSpec, PayoffKind};

/// Expansion of one model at one maturity; reusable across strikes.
#[derive(Debug, Clone)]
pub struct EuropeanPricer {
    s0: f64,
    r: f64,
    maturity: f64,
    /// Grid on `ln(S_T / S_0)`.
    grid: CosGrid,
    /// `phi(u_k) e^{-i u_k a}`
    weights: Vec<Complex64>,
}

impl EuropeanPricer {
    pub fn new(model: &ModelSpec, maturity: f64, settings: &CosSettings) -> Result<Self> {
        let grid = model_grid(model, maturity, settings)?;
        Self::with_grid(model, maturity, grid)
    }

    /// `grid` is the truncation range of the log-return `ln(S_T / S_0)`.
    pub fn with_grid(model: &ModelSpec, maturity: f64, grid: CosGrid) -> Result<Self> {
        let weights = (0..grid.n_terms)
            .map(|k| {
                let u = grid.freq(k);
                let z = cf_total(model, u, maturity)? * Complex64::from_polar(1.0, -u * grid.a);
                if z.re.is_finite() && z.im.is_finite() {
                    Ok(z)
                } else {
                    Err(Error::NonFinite("characteristic function"))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            s0: model.heston.s0(),
            r: model.heston.r(),
            maturity,
            grid,
            weights,
        })
    }

    pub fn grid(&self) -> CosGrid {
        self.grid
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    /// Grid on the log-price axis `ln S_T`.
    pub fn log_price_grid(&self) -> CosGrid {
        self.grid.shifted(self.s0.ln())
    }

    /// Calls are priced from the put through parity: the call coefficients grow like
    /// `e^b` and wide jump-driven grids would amplify roundoff.
    pub fn price(&self, kind: PayoffKind, strike: f64) -> Result<f64> {
        let put = self.put(strike)?;
        Ok(match kind {
            PayoffKind::Put => put,
            PayoffKind::Call => put + self.s0 - strike * (-self.r * self.maturity).exp(),
        })
    }

    fn put(&self, strike: f64) -> Result<f64> {
        let kind = PayoffKind::Put;
        let g = self.log_price_grid();
        let lk = strike.ln();
        if !g.contains(lk) {
            return Err(Error::GridClip { a: g.a, b: g.b, x: lk });
        }
        let v = payoff_coefficients(kind, strike, &g, g.a, g.b);
        let sum: f64 = self
            .weights
            .iter()
            .zip(&v)
            .enumerate()
            .map(|(k, (w, vk))| {
                let half = if k == 0 { 0.5 } else { 1.0 };
                half * w.re * vk
            })
            .sum();
        let p = (-self.r * self.maturity).exp() * sum;
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::NonFinite("COS price"))
        }
    }

    pub fn prices(&self, kind: PayoffKind, strikes: &[f64]) -> Result<Vec<f64>> {
        strikes.par_iter().map(|&k| self.price(kind, k)).collect()
    }

    /// Density of `ln S_T` at `x`.
    pub fn density(&self, x: f64) -> f64 {
        let g = self.log_price_grid();
        let scale = 2.0 / g.width();
        self.weights
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let c = (g.freq(k) * (x - g.a)).cos();
                let half = if k == 0 { 0.5 } else { 1.0 };
                half * scale * w.re * c
            })
            .sum()
    }
}

/// Price of a European option with an explicit truncation grid on `ln(S_T / S_0)`.
pub fn price_european(model: &ModelSpec, opt: &OptionSpec, grid: CosGrid) -> Result<f64> {
    if opt.exercise != Exercise::European {
        return Err(crate::error::invalid("exercise", "expected a European contract"));
    }
    EuropeanPricer::with_grid(model, opt.maturity, grid)?.price(opt.kind, opt.strike)
}

/// Price of a European option with the cumulant-based grid.
pub fn price_european_default(model: &ModelSpec, opt: &OptionSpec, settings: &CosSettings) -> Result<f64> {
    let grid = model_grid(model, opt.maturity, settings)?;
    price_european(model, opt, grid)
}
