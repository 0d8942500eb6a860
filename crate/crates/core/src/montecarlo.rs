//! Simulation oracle: thinning for the jump clocks, full-truncation Euler for the Heston
//! factor and discounted payoff averages with standard errors.
//!
//! Every path draws from its own ChaCha stream selected by the path index, and sums are
//! accumulated over fixed chunks in index order, so results do not depend on the thread
//! count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::models::{HestonParams, JumpParams, JumpSizeDist, Jumps, ModelSpec};
use crate::option::OptionSpec;

pub type PathRng = ChaCha8Rng;

const CHUNK: usize = 4096;

/// Euler steps per year used when a caller has no preference.
pub const STEPS_PER_YEAR: usize = 500;

/// Generator for path `index` under `seed`.
pub fn path_rng(seed: u64, index: u64) -> PathRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clock {
    /// Intensity `lambda* + alpha Q_t`, each active excitation expiring at rate `beta`.
    QHawkes,
    /// Intensity decaying exponentially between jumps.
    Hawkes,
}

/// One simulated jump clock on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpPath {
    pub clock: Clock,
    pub params: JumpParams,
    pub horizon: f64,
    pub event_times: Vec<f64>,
    /// Q-expiry times; empty for Hawkes paths.
    pub expiry_times: Vec<f64>,
}

impl JumpPath {
    /// `N_t`
    pub fn count(&self, t: f64) -> usize {
        self.event_times.partition_point(|&s| s <= t)
    }

    /// `Q_t` of a Q-Hawkes path.
    pub fn queue(&self, t: f64) -> Option<u32> {
        match self.clock {
            Clock::QHawkes => {
                let up = self.count(t);
                let down = self.expiry_times.partition_point(|&s| s <= t);
                Some((self.params.q0() as usize + up - down) as u32)
            }
            Clock::Hawkes => None,
        }
    }

    /// Right-continuous intensity `lambda_t`.
    pub fn intensity_at(&self, t: f64) -> f64 {
        let jp = &self.params;
        match self.clock {
            Clock::QHawkes => jp.lambda_star() + jp.alpha() * self.queue(t).unwrap_or(0) as f64,
            Clock::Hawkes => {
                let b = jp.beta();
                let excited: f64 = self.event_times[..self.count(t)]
                    .iter()
                    .map(|&s| (-b * (t - s)).exp())
                    .sum();
                jp.lambda_star() + (jp.lambda0() - jp.lambda_star()) * (-b * t).exp() + jp.alpha() * excited
            }
        }
    }

    /// `int_0^t lambda_s ds`, exact for both clocks.
    pub fn compensator(&self, t: f64) -> f64 {
        let jp = &self.params;
        let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
        match self.clock {
            Clock::QHawkes => {
                // Q is piecewise constant: integrate it over the merged change points
                let (mut i, mut j) = (0, 0);
                let (mut q, mut last, mut area) = (jp.q0() as f64, 0.0, 0.0);
                loop {
                    let up = self.event_times.get(i).copied().filter(|&s| s <= t);
                    let down = self.expiry_times.get(j).copied().filter(|&s| s <= t);
                    let (s, dq) = match (up, down) {
                        (Some(x), Some(y)) if x <= y => (x, 1.0),
                        (Some(x), None) => (x, 1.0),
                        (_, Some(y)) => (y, -1.0),
                        (None, None) => break,
                    };
                    if dq > 0.0 {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    area += q * (s - last);
                    q += dq;
                    last = s;
                }
                area += q * (t - last);
                ls * t + a * area
            }
            Clock::Hawkes => {
                let decay = |x: f64| -(-b * x).exp_m1() / b;
                let excited: f64 = self.event_times[..self.count(t)].iter().map(|&s| decay(t - s)).sum();
                ls * t + (jp.lambda0() - ls) * decay(t) + a * excited
            }
        }
    }
}

/// Exact simulation of the Q-Hawkes clock by competing exponential clocks: jumps at rate
/// `lambda_t`, expiries at rate `beta Q_t`. The initial `Q_0` excitations expire too.
/// With `alpha = 0` the jump count is Poisson(`lambda*`).
pub fn thin_qhawkes<R: Rng + ?Sized>(jp: &JumpParams, horizon: f64, rng: &mut R) -> JumpPath {
    let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
    let mut path = JumpPath {
        clock: Clock::QHawkes,
        params: *jp,
        horizon,
        event_times: Vec::new(),
        expiry_times: Vec::new(),
    };
    let mut q = jp.q0() as f64;
    let mut t = 0.0;
    loop {
        let lam = ls + a * q;
        let total = lam + b * q;
        if total <= 0.0 {
            break;
        }
        let e: f64 = Exp1.sample(rng);
        t += e / total;
        if t > horizon {
            break;
        }
        if rng.gen::<f64>() * total < lam {
            path.event_times.push(t);
            q += 1.0;
        } else {
            path.expiry_times.push(t);
            q -= 1.0;
        }
    }
    path
}

/// Ogata thinning for the exponential-kernel Hawkes clock. Between jumps the intensity
/// only decays, so its current value bounds the rate until the next proposal.
pub fn thin_hawkes<R: Rng + ?Sized>(jp: &JumpParams, horizon: f64, rng: &mut R) -> JumpPath {
    let (a, b, ls) = (jp.alpha(), jp.beta(), jp.lambda_star());
    let mut path = JumpPath {
        clock: Clock::Hawkes,
        params: *jp,
        horizon,
        event_times: Vec::new(),
        expiry_times: Vec::new(),
    };
    let mut excess = jp.lambda0() - ls;
    let mut t = 0.0;
    loop {
        let bound = ls + excess;
        if bound <= 0.0 {
            break;
        }
        let e: f64 = Exp1.sample(rng);
        let dt = e / bound;
        t += dt;
        if t > horizon {
            break;
        }
        excess *= (-b * dt).exp();
        if rng.gen::<f64>() * bound < ls + excess {
            path.event_times.push(t);
            excess += a;
        }
    }
    path
}

/// Terminal factors of one asset path, `S = D J` with `J = e^M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssetPath {
    /// Diffusion factor `D_T`.
    pub d: f64,
    /// Compensated log-jump sum `M_T`.
    pub m: f64,
}

impl AssetPath {
    pub fn j(&self) -> f64 {
        self.m.exp()
    }

    pub fn s(&self) -> f64 {
        self.d * self.m.exp()
    }
}

/// `M_T = sum Y_j - mu_bar int lambda dt` for a given jump count and compensator.
fn jump_factor<R: Rng + ?Sized>(n: usize, compensator: f64, jd: &JumpSizeDist, rng: &mut R) -> f64 {
    let mut m = -jd.mu_bar() * compensator;
    for _ in 0..n {
        let z: f64 = StandardNormal.sample(rng);
        m += jd.mu_y() + jd.sigma_y() * z;
    }
    m
}

/// `M_T` of one path under the model's jump component.
pub fn sample_jump_factor<R: Rng + ?Sized>(jumps: &Jumps, horizon: f64, rng: &mut R) -> f64 {
    match jumps {
        Jumps::QHawkes(jp, jd) => {
            let p = thin_qhawkes(jp, horizon, rng);
            jump_factor(p.event_times.len(), p.compensator(horizon), jd, rng)
        }
        Jumps::Hawkes(jp, jd) => {
            let p = thin_hawkes(jp, horizon, rng);
            jump_factor(p.event_times.len(), p.compensator(horizon), jd, rng)
        }
        Jumps::Bates { lambda_b, dist } => {
            let mean = lambda_b * horizon;
            let n = if mean > 0.0 {
                Poisson::new(mean).map(|p| p.sample(rng) as usize).unwrap_or(0)
            } else {
                0
            };
            jump_factor(n, mean, dist, rng)
        }
        Jumps::None => 0.0,
    }
}

/// `D_T` by full-truncation Euler on `(V, ln D)`.
pub fn sample_diffusion<R: Rng + ?Sized>(hp: &HestonParams, horizon: f64, n_steps: usize, rng: &mut R) -> f64 {
    let dt = horizon / n_steps as f64;
    let sdt = dt.sqrt();
    let (k, th, eta, rho) = (hp.kappa(), hp.theta(), hp.eta(), hp.rho());
    let rho_c = (1.0 - rho * rho).sqrt();
    let (mut v, mut x) = (hp.v0(), hp.s0().ln());
    for _ in 0..n_steps {
        let z1: f64 = StandardNormal.sample(rng);
        let z2: f64 = StandardNormal.sample(rng);
        let vp = v.max(0.0);
        let sv = vp.sqrt() * sdt;
        x += (hp.r() - 0.5 * vp) * dt + sv * z1;
        v += k * (th - vp) * dt + eta * sv * (rho * z1 + rho_c * z2);
    }
    x.exp()
}

/// Terminal asset factors for `n_paths` paths. `n_steps` must be at least 100.
pub fn simulate_asset(model: &ModelSpec, horizon: f64, n_paths: usize, n_steps: usize, seed: u64) -> Result<Vec<AssetPath>> {
    if n_steps < 100 {
        return Err(invalid("n_steps", format!("need at least 100 Euler steps, got {n_steps}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid("horizon", format!("must be > 0, got {horizon}")));
    }
    Ok((0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i);
            let m = sample_jump_factor(&model.jumps, horizon, &mut rng);
            let d = sample_diffusion(&model.heston, horizon, n_steps, &mut rng);
            AssetPath { d, m }
        })
        .collect())
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// `|x - mean|` in standard errors.
    pub fn z_score(&self, x: f64) -> f64 {
        (x - self.mean).abs() / self.se
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(self, o: Self) -> Self {
        Self {
            n: self.n + o.n,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }

    fn estimate(&self) -> Estimate {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        Estimate { mean, se: (var / n).sqrt() }
    }
}

fn chunked<T: Sync>(items: &[T], f: impl Fn(&T) -> f64 + Sync) -> Moments {
    let parts: Vec<Moments> = items
        .par_chunks(CHUNK)
        .map(|c| {
            let mut m = Moments::default();
            c.iter().for_each(|x| m.push(f(x)));
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// Mean of `f` over `n_paths` independent paths, path `i` drawing from `path_rng(seed, i)`.
pub fn mc_estimate(n_paths: usize, seed: u64, f: impl Fn(&mut PathRng) -> f64 + Sync) -> Estimate {
    let idx: Vec<u64> = (0..n_paths as u64).collect();
    chunked(&idx, |&i| f(&mut path_rng(seed, i))).estimate()
}

/// Real and imaginary parts of the mean of a complex `f`, as separate estimates.
pub fn mc_estimate_complex(n_paths: usize, seed: u64, f: impl Fn(&mut PathRng) -> Complex64 + Sync) -> (Estimate, Estimate) {
    let idx: Vec<u64> = (0..n_paths as u64).collect();
    let parts: Vec<(Moments, Moments)> = idx
        .par_chunks(CHUNK)
        .map(|c| {
            let (mut re, mut im) = (Moments::default(), Moments::default());
            for &i in c {
                let z = f(&mut path_rng(seed, i));
                re.push(z.re);
                im.push(z.im);
            }
            (re, im)
        })
        .collect();
    let (re, im) = parts
        .into_iter()
        .fold((Moments::default(), Moments::default()), |(a, b), (c, d)| (a.merge(c), b.merge(d)));
    (re.estimate(), im.estimate())
}

/// Discounted mean payoff over terminal prices `samples`, with its standard error.
pub fn mc_price_european(samples: &[f64], opt: &OptionSpec, r: f64) -> Result<Estimate> {
    if samples.is_empty() {
        return Err(invalid("samples", "need at least one sample"));
    }
    let df = (-r * opt.maturity).exp();
    let m = chunked(samples, |&s| df * opt.kind.payoff(s, opt.strike));
    if samples.len() == 1 {
        return Ok(Estimate { mean: m.sum, se: 0.0 });
    }
    Ok(m.estimate())
}

/// Monte Carlo European price of `opt` under `model`.
pub fn mc_price(model: &ModelSpec, opt: &OptionSpec, n_paths: usize, seed: u64) -> Result<Estimate> {
    let steps = ((STEPS_PER_YEAR as f64 * opt.maturity).ceil() as usize).max(100);
    let paths = simulate_asset(model, opt.maturity, n_paths, steps, seed)?;
    let s: Vec<f64> = paths.iter().map(AssetPath::s).collect();
    mc_price_european(&s, opt, model.heston.r())
}

/// Terminal prices for a list of path factors.
pub fn terminal_prices(paths: &[AssetPath]) -> Vec<f64> {
    paths.iter().map(AssetPath::s).collect()
}

/// Rows `t, S, V, lambda, N` of one path sampled on a regular grid.
pub fn path_table(model: &ModelSpec, horizon: f64, n_steps: usize, seed: u64) -> Result<Vec<[f64; 5]>> {
    if n_steps == 0 || !(horizon > 0.0) {
        return Err(invalid("n_steps", "need a positive horizon and step count"));
    }
    let mut rng = path_rng(seed, 0);
    let jumps = match model.jumps {
        Jumps::QHawkes(jp, jd) => Some((thin_qhawkes(&jp, horizon, &mut rng), jd)),
        Jumps::Hawkes(jp, jd) => Some((thin_hawkes(&jp, horizon, &mut rng), jd)),
        // a clock without excitation is a Poisson process
        Jumps::Bates { lambda_b, dist } => {
            let jp = JumpParams::new(0.0, 1.0, lambda_b, 0)?;
            Some((thin_qhawkes(&jp, horizon, &mut rng), dist))
        }
        Jumps::None => None,
    };
    let hp = &model.heston;
    let dt = horizon / n_steps as f64;
    let rho_c = (1.0 - hp.rho() * hp.rho()).sqrt();
    let (mut v, mut x) = (hp.v0(), hp.s0().ln());
    let mut log_j = 0.0;
    let mut done = 0;
    let mut rows = Vec::with_capacity(n_steps + 1);
    for step in 0..=n_steps {
        let t = step as f64 * dt;
        match &jumps {
            Some((p, jd)) => {
                let n = p.count(t);
                for _ in done..n {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    log_j += jd.mu_y() + jd.sigma_y() * z;
                }
                done = n;
                let m = log_j - jd.mu_bar() * p.compensator(t);
                rows.push([t, (x + m).exp(), v, p.intensity_at(t), n as f64]);
            }
            None => rows.push([t, x.exp(), v, 0.0, 0.0]),
        }
        if step < n_steps {
            let z1: f64 = StandardNormal.sample(&mut rng);
            let z2: f64 = StandardNormal.sample(&mut rng);
            let vp = v.max(0.0);
            let sv = (vp * dt).sqrt();
            x += (hp.r() - 0.5 * vp) * dt + sv * z1;
            v += hp.kappa() * (hp.theta() - vp) * dt + hp.eta() * sv * (hp.rho() * z1 + rho_c * z2);
        }
    }
    Ok(rows)
}

/// Kolmogorov-Smirnov distance of `x` from the unit exponential law.
pub fn ks_exponential(x: &mut [f64]) -> f64 {
    x.sort_by(|a, b| a.total_cmp(b));
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = -(-v).exp_m1();
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hawkes::{integrated_intensity_mean, intensity_mean};
    use crate::models::{scenario, Scenario};
    use crate::option::PayoffKind;
    use crate::qhawkes::pmf_q;

    fn jp(sc: Scenario) -> JumpParams {
        sc.config().jump_params().unwrap()
    }

    #[test]
    fn constant_samples() {
        let opt = OptionSpec::european(PayoffKind::Put, 9.0, 1.0).unwrap();
        let e = mc_price_european(&[9.0; 10], &opt, 0.1).unwrap();
        assert_eq!((e.mean, e.se), (0.0, 0.0));
        let e = mc_price_european(&[7.5; 10], &opt, 0.1).unwrap();
        assert!((e.mean - (-0.1f64).exp() * 1.5).abs() < 1e-14 && e.se < 1e-12);
        assert!(mc_price_european(&[], &opt, 0.1).is_err());
    }

    #[test]
    fn reproducible() {
        let m = scenario(Scenario::A).hqh;
        let a = simulate_asset(&m, 1.0, 50, 100, 7).unwrap();
        let b = simulate_asset(&m, 1.0, 50, 100, 7).unwrap();
        let c = simulate_asset(&m, 1.0, 50, 100, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(simulate_asset(&m, 1.0, 50, 99, 7).is_err());
    }

    #[test]
    fn queue_path_invariants() {
        let p = jp(Scenario::B);
        let mut rng = path_rng(3, 0);
        for _ in 0..200 {
            let path = thin_qhawkes(&p, 1.0, &mut rng);
            for k in 0..=20 {
                let t = k as f64 / 20.0;
                let q = path.queue(t).unwrap() as f64;
                assert!(((path.intensity_at(t) - p.lambda_star()) / p.alpha() - q).abs() < 1e-12);
                assert!(path.intensity_at(t) >= p.lambda_star());
            }
        }
    }

    #[test]
    fn compensator_matches_quadrature() {
        let p = jp(Scenario::A);
        let mut rng = path_rng(11, 0);
        for path in [thin_qhawkes(&p, 1.0, &mut rng), thin_hawkes(&p, 1.0, &mut rng)] {
            let n = 200_000;
            let h = 1.0 / n as f64;
            let q: f64 = (0..n).map(|i| path.intensity_at((i as f64 + 0.5) * h) * h).sum();
            assert!((q - path.compensator(1.0)).abs() < 1e-3, "{:?}", path.clock);
        }
    }

    #[test]
    fn poisson_limit_counts() {
        let p = JumpParams::new(0.0, 3.0, 2.0, 2).unwrap();
        let e = mc_estimate(100_000, 5, |r| thin_qhawkes(&p, 1.0, r).event_times.len() as f64);
        assert!(e.z_score(2.0) < 3.0, "{e:?}");
        let e = mc_estimate(100_000, 6, |r| thin_hawkes(&p, 1.0, r).event_times.len() as f64);
        assert!(e.z_score(2.0) < 3.0, "{e:?}");
    }

    #[test]
    fn mean_counts_match_moment_formula() {
        let p = jp(Scenario::A);
        let want = integrated_intensity_mean(1.0, &p);
        let q = mc_estimate(100_000, 1, |r| thin_qhawkes(&p, 1.0, r).event_times.len() as f64);
        let h = mc_estimate(100_000, 2, |r| thin_hawkes(&p, 1.0, r).event_times.len() as f64);
        assert!(q.z_score(want) < 3.0, "{q:?} vs {want}");
        assert!(h.z_score(want) < 3.0, "{h:?} vs {want}");
        let lam = mc_estimate(100_000, 4, |r| thin_hawkes(&p, 1.0, r).intensity_at(1.0));
        assert!(lam.z_score(intensity_mean(1.0, &p)) < 3.0);
    }

    #[test]
    fn queue_clock_has_larger_count_variance() {
        let p = jp(Scenario::A);
        let var = |f: &(dyn Fn(&mut PathRng) -> f64 + Sync)| {
            let m = mc_estimate(50_000, 9, f);
            let m2 = mc_estimate(50_000, 9, |r| f(r).powi(2));
            m2.mean - m.mean * m.mean
        };
        let vq = var(&|r| thin_qhawkes(&p, 1.0, r).event_times.len() as f64);
        let vh = var(&|r| thin_hawkes(&p, 1.0, r).event_times.len() as f64);
        assert!(vh < vq, "{vh} vs {vq}");
    }

    #[test]
    fn queue_histogram_matches_pmf() {
        let p = jp(Scenario::A);
        let n = 100_000;
        let mut hist = vec![0usize; 200];
        for i in 0..n {
            let q = thin_qhawkes(&p, 1.0, &mut path_rng(21, i)).queue(1.0).unwrap() as usize;
            hist[q.min(199)] += 1;
        }
        let tv: f64 = 0.5
            * hist
                .iter()
                .enumerate()
                .map(|(x, &c)| (c as f64 / n as f64 - pmf_q(x as u32, 1.0, &p).unwrap()).abs())
                .sum::<f64>();
        assert!(tv < 0.01, "{tv}");
    }

    #[test]
    fn rescaled_gaps_are_exponential() {
        // time-rescaling: compensator increments between jumps are unit exponentials.
        // One long path avoids the bias of dropping the gap censored at the horizon.
        for sc in [Scenario::A, Scenario::B] {
            let p = jp(sc);
            let horizon = 1.2e4 / p.lambda_bar();
            for hawkes in [false, true] {
                let mut rng = path_rng(31, 0);
                let path = if hawkes { thin_hawkes(&p, horizon, &mut rng) } else { thin_qhawkes(&p, horizon, &mut rng) };
                let c: Vec<f64> = path.event_times.iter().map(|&t| path.compensator(t)).collect();
                let mut gaps: Vec<f64> = std::iter::once(c[0]).chain(c.windows(2).map(|w| w[1] - w[0])).collect();
                assert!(gaps.len() >= 10_000, "{}", gaps.len());
                let n = gaps.len() as f64;
                let d = ks_exponential(&mut gaps);
                assert!(d < 1.628 / n.sqrt(), "{sc:?} hawkes={hawkes}: {d}");
            }
        }
    }

    #[test]
    fn martingale_and_heston_put() {
        let m = scenario(Scenario::A);
        let heston = ModelSpec { jumps: Jumps::None, ..m.hqh };
        for model in [m.hqh, m.hh, m.bates, heston] {
            let paths = simulate_asset(&model, 1.0, 40_000, 100, 13).unwrap();
            let df = (-0.1f64).exp();
            let s: Vec<f64> = paths.iter().map(|p| df * p.s()).collect();
            let e = chunked(&s, |&x| x).estimate();
            assert!(e.z_score(9.0) < 3.0, "{:?}: {e:?}", model.kind());
        }
    }

    #[test]
    fn heston_factor_moments() {
        let hp = scenario(Scenario::A).hqh.heston;
        let e = mc_estimate(20_000, 17, |r| sample_diffusion(&hp, 1.0, 200, r) * (-0.1f64).exp());
        assert!(e.z_score(9.0) < 3.0);
    }
}
