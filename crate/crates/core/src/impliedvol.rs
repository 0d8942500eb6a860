//! Black-Scholes prices and implied volatility.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::option::PayoffKind;

pub const SIGMA_MIN: f64 = 1e-6;
pub const SIGMA_MAX: f64 = 5.0;

fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn bs_price(s0: f64, strike: f64, r: f64, t: f64, sigma: f64, kind: PayoffKind) -> f64 {
    let df = (-r * t).exp();
    if sigma <= 0.0 {
        return kind.payoff(s0, strike * df);
    }
    let sq = sigma * t.sqrt();
    let d1 = ((s0 / strike).ln() + (r + 0.5 * sigma * sigma) * t) / sq;
    let d2 = d1 - sq;
    match kind {
        PayoffKind::Call => s0 * norm_cdf(d1) - strike * df * norm_cdf(d2),
        PayoffKind::Put => strike * df * norm_cdf(-d2) - s0 * norm_cdf(-d1),
    }
}

pub fn bs_vega(s0: f64, strike: f64, r: f64, t: f64, sigma: f64) -> f64 {
    let sq = sigma * t.sqrt();
    let d1 = ((s0 / strike).ln() + (r + 0.5 * sigma * sigma) * t) / sq;
    s0 * norm_pdf(d1) * t.sqrt()
}

/// Volatility reproducing `price`, by Newton steps kept inside a shrinking bisection bracket.
pub fn implied_vol(price: f64, s0: f64, strike: f64, r: f64, t: f64, kind: PayoffKind) -> Result<f64> {
    let df = (-r * t).exp();
    let (lower, upper) = match kind {
        PayoffKind::Put => ((strike * df - s0).max(0.0), strike * df),
        PayoffKind::Call => ((s0 - strike * df).max(0.0), s0),
    };
    if !(price.is_finite() && price > lower && price < upper) {
        return Err(Error::OutOfBounds { price, lower, upper });
    }
    let f = |s: f64| bs_price(s0, strike, r, t, s, kind) - price;
    let (mut lo, mut hi) = (SIGMA_MIN, SIGMA_MAX);
    if f(lo) > 0.0 {
        return Err(Error::OutOfBounds { price, lower, upper });
    }
    if f(hi) < 0.0 {
        return Err(Error::NoConvergence(format!("price {price} needs sigma above {SIGMA_MAX}")));
    }
    // Brenner-Subrahmanyam
    let mut sigma = ((2.0 * PI / t).sqrt() * price / s0).clamp(lo, hi);
    let tol = 1e-12 * s0;
    for _ in 0..200 {
        let fs = f(sigma);
        if fs.abs() < tol {
            return Ok(sigma);
        }
        if fs > 0.0 {
            hi = sigma;
        } else {
            lo = sigma;
        }
        let vega = bs_vega(s0, strike, r, t, sigma);
        let newton = sigma - fs / vega;
        sigma = if vega > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-15 {
            break;
        }
    }
    if f(sigma).abs() < 1e-10 * s0 {
        Ok(sigma)
    } else {
        Err(Error::NoConvergence(format!("implied vol for price {price}")))
    }
}
