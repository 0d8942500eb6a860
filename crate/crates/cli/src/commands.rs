use num_complex::Complex64;

use hqh::cos::bermudan::bermudan_price;
use hqh::cos::dcos::DctCoefficients;
use hqh::cos::european::EuropeanPricer;
use hqh::experiments::{bench, bermudan_curve, sweep, Axis, SweepBase};
use hqh::impliedvol::implied_vol;
use hqh::models::{ModelKind, ModelSpec};
use hqh::montecarlo::{mc_price_european, path_table, simulate_asset, terminal_prices};
use hqh::option::{OptionSpec, PayoffKind};
use hqh::qhawkes::{cf_joint_qn, pmf_q};

use crate::config::RunConfig;
use crate::output::{cell, emit, Table};
use crate::{CliError, Cli, Command, Contract};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::load(cli.scenario, cli.config.as_deref())?;
    let (name, table) = match &cli.command {
        Command::Price { model, contract, dates } => ("price", price(&cfg, *model, contract, *dates)?),
        Command::Smile {
            axis,
            values,
            models,
            contract,
        } => ("smile", smile(&cfg, *axis, values.as_deref(), models, contract)?),
        Command::Bermudan { models, dates, contract } => ("bermudan", bermudan(&cfg, models, dates, contract)?),
        Command::Pmf { maturity, max_q, n_terms } => ("pmf", pmf(&cfg, *maturity, *max_q, *n_terms)?),
        Command::Density { models, maturity, points } => ("density", density(&cfg, models, *maturity, *points)?),
        Command::Dcos => ("dcos", dcos()),
        Command::Simulate {
            model,
            paths,
            kind,
            maturity,
            moneyness,
            dump,
        } => {
            if let Some(p) = dump {
                dump_path(&cfg, *model, *maturity, cli.seed, p)?;
            }
            let n = paths.unwrap_or(cfg.engine.mc_paths);
            ("simulate", simulate(&cfg, *model, n, *kind, *maturity, moneyness, cli.seed)?)
        }
        Command::Bench { models, repeats } => ("bench", bench_table(&cfg, models, *repeats)?),
    };
    emit(&table, cli.out.as_deref(), name, cli.seed, &cfg)
}

fn model(cfg: &RunConfig, kind: ModelKind) -> Result<ModelSpec, CliError> {
    cfg.model.model(kind).map_err(CliError::from_config)
}

fn f(x: f64) -> String {
    cell(Some(x))
}

fn strike_of(cfg: &RunConfig, c: &Contract) -> f64 {
    c.strike.unwrap_or(cfg.model.s0)
}

pub fn price(cfg: &RunConfig, kind: ModelKind, c: &Contract, dates: Option<u32>) -> Result<Table, CliError> {
    let m = model(cfg, kind)?;
    let k = strike_of(cfg, c);
    let p = match dates {
        None => {
            OptionSpec::european(c.kind, k, c.maturity)?;
            EuropeanPricer::new(&m, c.maturity, &cfg.engine.cos)?.price(c.kind, k)?
        }
        Some(d) => bermudan_price(&m, &OptionSpec::bermudan(c.kind, k, c.maturity, d)?, &cfg.engine.bermudan)?,
    };
    let iv = implied_vol(p, cfg.model.s0, k, cfg.model.r, c.maturity, c.kind).ok();
    let mut t = Table::new(&["model", "kind", "strike", "maturity", "dates", "price", "implied_vol"]);
    t.push(vec![
        kind.name().into(),
        kind_name(c.kind).into(),
        f(k),
        f(c.maturity),
        dates.map(|d| d.to_string()).unwrap_or_default(),
        f(p),
        cell(iv),
    ]);
    Ok(t)
}

fn kind_name(k: PayoffKind) -> &'static str {
    match k {
        PayoffKind::Put => "put",
        PayoffKind::Call => "call",
    }
}

pub fn smile(cfg: &RunConfig, axis: Axis, values: Option<&[f64]>, models: &[ModelKind], c: &Contract) -> Result<Table, CliError> {
    let values = values.map(<[f64]>::to_vec).unwrap_or_else(|| axis.default_values(&cfg.model));
    let base = SweepBase {
        kind: c.kind,
        strike: strike_of(cfg, c),
        maturity: c.maturity,
    };
    let rows = sweep(&cfg.model, axis, &values, models, base, &cfg.engine.cos)?;
    let mut t = Table::new(&["axis_value", "model", "price", "implied_vol"]);
    for r in rows {
        t.push(vec![f(r.axis_value), r.model.name().into(), cell(r.price), cell(r.implied_vol)]);
    }
    Ok(t)
}

pub fn bermudan(cfg: &RunConfig, models: &[ModelKind], dates: &[u32], c: &Contract) -> Result<Table, CliError> {
    let rows = bermudan_curve(
        &cfg.model,
        models,
        c.kind,
        strike_of(cfg, c),
        c.maturity,
        dates,
        &cfg.engine.bermudan,
    )?;
    let mut t = Table::new(&["dates", "model", "price", "implied_vol"]);
    for r in rows {
        t.push(vec![r.dates.to_string(), r.model.name().into(), f(r.price), f(r.implied_vol)]);
    }
    Ok(t)
}

pub fn pmf(cfg: &RunConfig, maturity: f64, max_q: u32, n_terms: usize) -> Result<Table, CliError> {
    let jp = cfg.model.jump_params().map_err(CliError::from_config)?;
    if n_terms <= max_q as usize {
        return Err(CliError::Config(format!("n_terms must exceed max_q, got {n_terms} <= {max_q}")));
    }
    let cf = |u: f64| -> Complex64 { cf_joint_qn(u, 0.0, maturity, &jp) };
    let dct = DctCoefficients::new(&cf, n_terms);
    let mut t = Table::new(&["q", "pmf", "dcos"]);
    for q in 0..=max_q {
        t.push(vec![q.to_string(), f(pmf_q(q, maturity, &jp)?), f(dct.pmf(q as usize))]);
    }
    Ok(t)
}

pub fn density(cfg: &RunConfig, models: &[ModelKind], maturity: f64, points: usize) -> Result<Table, CliError> {
    if points < 2 {
        return Err(CliError::Config("points must be at least 2".into()));
    }
    let pricers = models
        .iter()
        .map(|&k| Ok((k, EuropeanPricer::new(&model(cfg, k)?, maturity, &cfg.engine.cos)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    // common range: the narrowest truncation interval among the models
    let lo = pricers.iter().map(|(_, p)| p.log_price_grid().a).fold(f64::NEG_INFINITY, f64::max);
    let hi = pricers.iter().map(|(_, p)| p.log_price_grid().b).fold(f64::INFINITY, f64::min);
    let mut t = Table::new(&["x", "model", "density"]);
    for i in 0..points {
        let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        for (k, p) in &pricers {
            t.push(vec![f(x), k.name().into(), f(p.density(x))]);
        }
    }
    Ok(t)
}

pub fn dcos() -> Table {
    let m = 500.0;
    let uniform = move |u: f64| -> Complex64 {
        if u == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let i = Complex64::new(0.0, 1.0);
        (1.0 - (i * u * m).exp()) / (m * (1.0 - (i * u).exp()))
    };
    let poisson = |u: f64| (15.0 * (Complex64::new(0.0, u).exp() - 1.0)).exp();
    let p12 = (12.0 * 15f64.ln() - 15.0 - libm::lgamma(13.0)).exp();
    let mut t = Table::new(&["case", "n_terms", "error"]);
    for e in 4..=12 {
        let n = 1usize << e;
        let err = (DctCoefficients::new(&uniform, n).pmf(24) - 1.0 / m).abs();
        t.push(vec!["uniform_500_n24".into(), n.to_string(), f(err)]);
    }
    for e in 4..=12 {
        let n = 1usize << e;
        let err = (DctCoefficients::new(&poisson, n).pmf(12) - p12).abs();
        t.push(vec!["poisson_15_n12".into(), n.to_string(), f(err)]);
    }
    t
}

pub fn simulate(
    cfg: &RunConfig,
    kind: ModelKind,
    paths: usize,
    payoff: PayoffKind,
    maturity: f64,
    moneyness: &[f64],
    seed: u64,
) -> Result<Table, CliError> {
    let m = model(cfg, kind)?;
    let steps = ((cfg.engine.mc_steps_per_year as f64 * maturity).ceil() as usize).max(100);
    let st = terminal_prices(&simulate_asset(&m, maturity, paths, steps, seed)?);
    let pricer = EuropeanPricer::new(&m, maturity, &cfg.engine.cos)?;
    let mut t = Table::new(&["strike", "kind", "mc_price", "std_error", "cos_price", "z"]);
    for &mk in moneyness {
        let k = mk * cfg.model.s0;
        let opt = OptionSpec::european(payoff, k, maturity)?;
        let e = mc_price_european(&st, &opt, cfg.model.r)?;
        let cos = pricer.price(payoff, k).ok();
        t.push(vec![
            f(k),
            kind_name(payoff).into(),
            f(e.mean),
            f(e.se),
            cell(cos),
            cell(cos.map(|c| e.z_score(c))),
        ]);
    }
    Ok(t)
}

fn dump_path(cfg: &RunConfig, kind: ModelKind, maturity: f64, seed: u64, path: &std::path::Path) -> Result<(), CliError> {
    let steps = ((cfg.engine.mc_steps_per_year as f64 * maturity).ceil() as usize).max(1);
    let rows = path_table(&model(cfg, kind)?, maturity, steps, seed)?;
    let mut t = Table::new(&["t", "S", "V", "lambda", "N"]);
    for r in rows {
        t.push(vec![f(r[0]), f(r[1]), f(r[2]), f(r[3]), (r[4] as u64).to_string()]);
    }
    t.write_to(std::fs::File::create(path)?)
}

pub fn bench_table(cfg: &RunConfig, models: &[ModelKind], repeats: usize) -> Result<Table, CliError> {
    let rows = bench(&cfg.model, models, repeats, &cfg.engine.cos)?;
    let hh = rows.iter().find(|r| r.model == ModelKind::Hh).map(|r| r.mean());
    let mut t = Table::new(&["model", "repeats", "mean_seconds", "speedup_vs_hh"]);
    for r in &rows {
        t.push(vec![
            r.model.name().into(),
            repeats.to_string(),
            f(r.mean()),
            cell(hh.map(|h| h / r.mean())),
        ]);
    }
    Ok(t)
}
