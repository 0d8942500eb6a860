//! Study designs shared by the command-line runner and the acceptance checks: smiles along
//! one axis, Bermudan date curves and the European timing grid.

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cos::bermudan::{bermudan_price, BermudanSettings};
use crate::cos::european::EuropeanPricer;
use crate::cos::CosSettings;
use crate::error::{invalid, Error, Result};
use crate::impliedvol::implied_vol;
use crate::models::{ModelKind, ScenarioConfig};
use crate::option::{OptionSpec, PayoffKind};

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// 21 strikes on `[0.6, 1.4] S0`.
pub fn strike_grid(s0: f64) -> Vec<f64> {
    linspace(0.6 * s0, 1.4 * s0, 21)
}

/// 20 maturities on `[0.1, 2]` years.
pub fn maturity_grid() -> Vec<f64> {
    linspace(0.1, 2.0, 20)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Strike,
    Maturity,
    Alpha,
    Beta,
    Q0,
    MuY,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Strike => "strike",
            Axis::Maturity => "maturity",
            Axis::Alpha => "alpha",
            Axis::Beta => "beta",
            Axis::Q0 => "q0",
            Axis::MuY => "mu_y",
        }
    }

    /// Grid used when the caller gives none.
    pub fn default_values(&self, cfg: &ScenarioConfig) -> Vec<f64> {
        match self {
            Axis::Strike => strike_grid(cfg.s0),
            Axis::Maturity => maturity_grid(),
            Axis::Alpha => linspace(0.0, 0.95 * cfg.beta, 20),
            Axis::Beta => linspace(1.05 * cfg.alpha, 10.0 * cfg.alpha.max(0.1), 20),
            Axis::Q0 => (0..=10).map(f64::from).collect(),
            Axis::MuY => linspace(-0.6, 0.6, 25),
        }
    }

    /// Fails when a value would leave the stable region or the field's domain.
    pub fn validate(&self, cfg: &ScenarioConfig, values: &[f64]) -> Result<()> {
        for &x in values {
            let ok = match self {
                Axis::Strike | Axis::Maturity => x > 0.0,
                Axis::Alpha => (0.0..cfg.beta).contains(&x),
                Axis::Beta => x > cfg.alpha,
                Axis::Q0 => x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64,
                Axis::MuY => x.is_finite(),
            };
            if !ok {
                return Err(invalid("axis", format!("{} value {x} outside its valid range", self.name())));
            }
        }
        Ok(())
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strike" => Ok(Axis::Strike),
            "maturity" => Ok(Axis::Maturity),
            "alpha" => Ok(Axis::Alpha),
            "beta" => Ok(Axis::Beta),
            "q0" => Ok(Axis::Q0),
            "mu_y" => Ok(Axis::MuY),
            other => Err(Error::Config(format!("unknown axis `{other}`"))),
        }
    }
}

/// European contract priced at every axis point; the axis overrides one of its fields or
/// one model parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepBase {
    pub kind: PayoffKind,
    pub strike: f64,
    pub maturity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmileRow {
    pub axis_value: f64,
    pub model: ModelKind,
    /// `None` when the point failed; the error text is kept for reporting.
    pub price: Option<f64>,
    pub implied_vol: Option<f64>,
    pub error: Option<String>,
}

fn point(cfg: &ScenarioConfig, axis: Axis, x: f64, base: SweepBase) -> Result<(ScenarioConfig, OptionSpec)> {
    let mut c = *cfg;
    let (mut k, mut t) = (base.strike, base.maturity);
    match axis {
        Axis::Strike => k = x,
        Axis::Maturity => t = x,
        Axis::Alpha => c.alpha = x,
        Axis::Beta => c.beta = x,
        Axis::Q0 => c.q0 = x as u32,
        Axis::MuY => c.mu_y = x,
    }
    Ok((c, OptionSpec::european(base.kind, k, t)?))
}

fn price_point(cfg: &ScenarioConfig, axis: Axis, x: f64, base: SweepBase, model: ModelKind, settings: &CosSettings) -> Result<(f64, f64)> {
    let (c, opt) = point(cfg, axis, x, base)?;
    let m = c.model(model)?;
    let p = EuropeanPricer::new(&m, opt.maturity, settings)?.price(opt.kind, opt.strike)?;
    let iv = implied_vol(p, c.s0, opt.strike, c.r, opt.maturity, opt.kind)?;
    Ok((p, iv))
}

/// Prices and implied vols of `models` along `axis`, rows ordered by axis point then model.
/// A failing point yields a row with empty cells and a warning.
pub fn sweep(
    cfg: &ScenarioConfig,
    axis: Axis,
    values: &[f64],
    models: &[ModelKind],
    base: SweepBase,
    settings: &CosSettings,
) -> Result<Vec<SmileRow>> {
    axis.validate(cfg, values)?;
    let jobs: Vec<(f64, ModelKind)> = values.iter().flat_map(|&x| models.iter().map(move |&m| (x, m))).collect();
    Ok(jobs
        .par_iter()
        .map(|&(x, model)| {
            match price_point(cfg, axis, x, base, model, settings) {
                Ok((p, iv)) => SmileRow {
                    axis_value: x,
                    model,
                    price: Some(p),
                    implied_vol: Some(iv),
                    error: None,
                },
                Err(e) => {
                    log::warn!("{} = {x}, {model}: {e}", axis.name());
                    SmileRow {
                        axis_value: x,
                        model,
                        price: None,
                        implied_vol: None,
                        error: Some(e.to_string()),
                    }
                }
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BermudanRow {
    pub dates: u32,
    pub model: ModelKind,
    pub price: f64,
    pub implied_vol: f64,
}

/// Bermudan prices and the implied vol of a European with the same price, per date count.
pub fn bermudan_curve(
    cfg: &ScenarioConfig,
    models: &[ModelKind],
    kind: PayoffKind,
    strike: f64,
    maturity: f64,
    dates: &[u32],
    settings: &BermudanSettings,
) -> Result<Vec<BermudanRow>> {
    let mut rows = Vec::new();
    for &model in models {
        let m = cfg.model(model)?;
        for &d in dates {
            let opt = OptionSpec::bermudan(kind, strike, maturity, d)?;
            let price = bermudan_price(&m, &opt, settings)?;
            let implied_vol = implied_vol(price, cfg.s0, strike, cfg.r, maturity, kind)?;
            rows.push(BermudanRow {
                dates: d,
                model,
                price,
                implied_vol,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub model: ModelKind,
    /// Wall time of one pass over the grid, per repeat.
    pub seconds: Vec<f64>,
}

impl BenchRow {
    pub fn mean(&self) -> f64 {
        self.seconds.iter().sum::<f64>() / self.seconds.len() as f64
    }
}

/// Prices the 21 x 20 strike-maturity grid once per model and maturity pricer.
pub fn price_grid(cfg: &ScenarioConfig, model: ModelKind, settings: &CosSettings) -> Result<Vec<f64>> {
    let m = cfg.model(model)?;
    let strikes = strike_grid(cfg.s0);
    let mut out = Vec::with_capacity(420);
    for t in maturity_grid() {
        let p = EuropeanPricer::new(&m, t, settings)?;
        for &k in &strikes {
            // strikes outside a short-maturity grid still count as evaluations
            out.push(p.price(PayoffKind::Put, k).unwrap_or(f64::NAN));
        }
    }
    Ok(out)
}

/// Mean wall time per model over `repeats` passes after one excluded warm-up pass. Models
/// alternate within each repeat so slow drifts in machine load hit all of them alike.
pub fn bench(cfg: &ScenarioConfig, models: &[ModelKind], repeats: usize, settings: &CosSettings) -> Result<Vec<BenchRow>> {
    if repeats == 0 {
        return Err(invalid("repeats", "need at least one repeat"));
    }
    for &m in models {
        price_grid(cfg, m, settings)?;
    }
    let mut rows: Vec<BenchRow> = models
        .iter()
        .map(|&model| BenchRow {
            model,
            seconds: Vec::with_capacity(repeats),
        })
        .collect();
    for _ in 0..repeats {
        for row in rows.iter_mut() {
            let t0 = Instant::now();
            price_grid(cfg, row.model, settings)?;
            row.seconds.push(t0.elapsed().as_secs_f64());
        }
    }
    Ok(rows)
}
