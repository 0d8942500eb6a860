//! Bermudan puts and calls by backward induction on cosine coefficients.
//!
//! The state at each date is `(ln S, V, jump state)`. `V` lives on a fixed quadrature grid
//! and the jump state is either absent, the activation number of a Q-Hawkes clock, or the
//! Hawkes intensity on a Gauss-Legendre grid. Value coefficients in `ln S` are carried per
//! `(V node, jump state)` slice.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{jump_cf, model_grid, payoff_coefficients, CosGrid, CosSettings};
use crate::error::{invalid, Error, Result};
use crate::hawkes::{intensity_variance, solve_riccati, OdeConfig};
use crate::heston::{PsiVKernel, VarianceGrid};
use gauss_quad::legendre::GaussLegendre;
use crate::models::{JumpParams, JumpSizeDist, Jumps, ModelKind, ModelSpec};
use crate::option::{OptionSpec, PayoffKind};
use crate::qhawkes::{activation_pmf_row, partial_inverse_row, ALPHA_EPS};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BermudanSettings {
    /// Log-price expansion; the range comes from the cumulants at maturity.
    pub cos: CosSettings,
    pub n_v: usize,
    /// Activation states kept: the smallest count holding `1 - nq_tol` of the mass at
    /// maturity, at most `nq_cap`.
    pub nq_tol: f64,
    pub nq_cap: usize,
    /// Hawkes intensity nodes and cosine terms of its transition density.
    pub n_h: usize,
    pub n_lambda: usize,
    /// Intensity range `[lambda*, lambda0 + width * sd(lambda_T)]`.
    pub intensity_width: f64,
}

impl Default for BermudanSettings {
    fn default() -> Self {
        Self {
            cos: CosSettings::default(),
            n_v: 64,
            nq_tol: 1e-10,
            nq_cap: 128,
            n_h: 64,
            n_lambda: 128,
            intensity_width: 10.0,
        }
    }
}

/// Discretisation of the jump state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum JumpLattice {
    /// Constant intensity or no jumps.
    Single,
    /// Activation numbers `0..n_q`.
    Activation { n_q: usize },
    /// Gauss-Legendre nodes on `[lower, upper]`.
    Intensity {
        lower: f64,
        upper: f64,
        n_h: usize,
        n_lambda: usize,
    },
}

impl JumpLattice {
    pub fn n_states(&self) -> usize {
        match *self {
            JumpLattice::Single => 1,
            JumpLattice::Activation { n_q } => n_q,
            JumpLattice::Intensity { n_h, .. } => n_h,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BermudanGrid {
    /// Grid on `ln S`.
    pub x: CosGrid,
    pub variance: VarianceGrid,
    pub jumps: JumpLattice,
}

impl BermudanGrid {
    pub fn new(model: &ModelSpec, opt: &OptionSpec, s: &BermudanSettings) -> Result<Self> {
        let x = model_grid(model, opt.maturity, &s.cos)?.shifted(model.heston.s0().ln());
        let variance = VarianceGrid::new(&model.heston, opt.maturity, s.n_v)?;
        let jumps = match &model.jumps {
            Jumps::Bates { .. } | Jumps::None => JumpLattice::Single,
            Jumps::QHawkes(jp, jd) => JumpLattice::Activation {
                n_q: activation_states(jp, jd, opt.maturity, s.nq_tol, s.nq_cap)?,
            },
            Jumps::Hawkes(jp, _) if jp.alpha() < ALPHA_EPS => JumpLattice::Single,
            Jumps::Hawkes(jp, _) => {
                if s.n_h < 2 || s.n_lambda < 1 {
                    return Err(invalid("n_h", "need at least 2 intensity nodes and 1 cosine term"));
                }
                let sd = intensity_variance(opt.maturity, jp).sqrt();
                JumpLattice::Intensity {
                    lower: jp.lambda_star(),
                    upper: jp.lambda0() + s.intensity_width * sd,
                    n_h: s.n_h,
                    n_lambda: s.n_lambda,
                }
            }
        };
        Ok(Self { x, variance, jumps })
    }
}

fn activation_states(jp: &JumpParams, jd: &JumpSizeDist, horizon: f64, tol: f64, cap: usize) -> Result<usize> {
    let floor = jp.q0() as usize + 1;
    if cap < floor {
        return Err(invalid("nq_cap", format!("must exceed Q0 = {}", jp.q0())));
    }
    let pmf = activation_pmf_row(cap, horizon, jp.q0(), jp, jd);
    let mut mass = 0.0;
    for (i, p) in pmf.iter().enumerate() {
        mass += p;
        if mass > 1.0 - tol {
            return Ok((i + 1).max(floor));
        }
    }
    log::warn!("activation truncation capped at {cap} states, mass {mass:.3e} short of {tol:.1e}", mass = 1.0 - mass);
    Ok(cap)
}

/// One-period transition of the jump state in the transform domain.
trait Transition: Sync {
    fn n_states(&self) -> usize;
    /// `E[e^{iu M_dt}; next | now]` times the quadrature weight of `next`, row-major `[next * n + now]`.
    fn step(&self, u: f64) -> Result<Vec<Complex64>>;
    /// The same from the initial jump state.
    fn initial(&self, u: f64) -> Result<Vec<Complex64>>;
}

struct ConstantJumps {
    jumps: Jumps,
    dt: f64,
}

impl Transition for ConstantJumps {
    fn n_states(&self) -> usize {
        1
    }
    fn step(&self, u: f64) -> Result<Vec<Complex64>> {
        Ok(vec![jump_cf(&self.jumps, u, self.dt)?])
    }
    fn initial(&self, u: f64) -> Result<Vec<Complex64>> {
        self.step(u)
    }
}

struct ActivationChain {
    jp: JumpParams,
    jd: JumpSizeDist,
    dt: f64,
    n: usize,
}

impl Transition for ActivationChain {
    fn n_states(&self) -> usize {
        self.n
    }
    fn step(&self, u: f64) -> Result<Vec<Complex64>> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for now in 0..n {
            let row = partial_inverse_row(n, u, self.dt, now as u32, &self.jp, &self.jd);
            for (next, z) in row.into_iter().enumerate() {
                out[next * n + now] = z;
            }
        }
        Ok(out)
    }
    fn initial(&self, u: f64) -> Result<Vec<Complex64>> {
        Ok(partial_inverse_row(self.n, u, self.dt, self.jp.q0(), &self.jp, &self.jd))
    }
}

/// Hawkes intensity on Gauss-Legendre nodes. The no-jump path gives an atom in the
/// transition law, which is handled exactly; the rest has a cosine expansion whose
/// coefficients use the joint transform at `+-` each frequency. The value function is
/// read between nodes by polynomial interpolation.
struct IntensityChain {
    jp: JumpParams,
    jd: JumpSizeDist,
    dt: f64,
    lower: f64,
    width: f64,
    nodes: Vec<f64>,
    /// Barycentric weights of the nodes mapped to `[-1, 1]`.
    bary: Vec<f64>,
    /// `[n][node]`: `int cos(n pi (l - lower) / width) ell_node(l) dl` over the range
    cells: Vec<Vec<f64>>,
}

impl IntensityChain {
    fn new(jp: JumpParams, jd: JumpSizeDist, dt: f64, lower: f64, upper: f64, n_h: usize, n_lambda: usize) -> Result<Self> {
        let width = upper - lower;
        if !(width > 0.0) {
            return Err(invalid("intensity range", format!("empty range [{lower}, {upper}]")));
        }
        let gl = GaussLegendre::new(n_h).map_err(|e| invalid("n_h", e.to_string()))?;
        let mut t: Vec<f64> = gl.iter().map(|(x, _)| *x).collect();
        t.sort_by(f64::total_cmp);
        let bary: Vec<f64> = (0..n_h)
            .map(|h| 1.0 / (0..n_h).filter(|&k| k != h).map(|k| t[h] - t[k]).product::<f64>())
            .collect();
        let nodes = t.iter().map(|x| lower + 0.5 * width * (x + 1.0)).collect();
        let quad = GaussLegendre::new(2 * n_lambda + n_h).map_err(|e| invalid("n_lambda", e.to_string()))?;
        let samples: Vec<(f64, f64, Vec<f64>)> = quad
            .iter()
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w, lagrange(&t, &bary, *x)))
            .collect();
        let cells = (0..n_lambda)
            .map(|n| {
                let mut row = vec![0.0; n_h];
                for (s, w, ell) in &samples {
                    let c = w * width * (n as f64 * PI * s).cos();
                    for (r, e) in row.iter_mut().zip(ell) {
                        *r += c * e;
                    }
                }
                row
            })
            .collect();
        Ok(Self { jp, jd, dt, lower, width, nodes, bary, cells })
    }

    fn interpolation_weights(&self, lambda: f64) -> Vec<f64> {
        let x = 2.0 * (lambda - self.lower) / self.width - 1.0;
        let t: Vec<f64> = self.nodes.iter().map(|l| 2.0 * (l - self.lower) / self.width - 1.0).collect();
        lagrange(&t, &self.bary, x)
    }

    /// Starting from `lambda`, the no-jump path ends at `lambda_d` with weight
    /// `E[e^{iu M_dt}; no jump]`.
    fn atom(&self, u: f64, lambda: f64) -> (f64, Complex64) {
        let (b, ls) = (self.jp.beta(), self.jp.lambda_star());
        let decay = (-b * self.dt).exp();
        let integral = ls * self.dt + (lambda - ls) * (-(-b * self.dt).exp_m1()) / b;
        let weight = (-integral * Complex64::new(1.0, u * self.jd.mu_bar())).exp();
        (ls + (lambda - ls) * decay, weight)
    }

    /// Cosine coefficients of the continuous part of the density of `lambda_dt`, weighted by
    /// `e^{iu M_dt}`, for each starting intensity in `starts`, as `[n][start]`.
    fn coefficients(&self, u: f64, starts: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        let ode = OdeConfig::for_horizon(self.dt);
        let atoms: Vec<(f64, Complex64)> = starts.iter().map(|&l| self.atom(u, l)).collect();
        (0..self.cells.len())
            .map(|n| {
                let w = n as f64 * PI / self.width;
                let plus = solve_riccati(w, u, self.dt, &self.jp, &self.jd, ode)?;
                let minus = solve_riccati(-w, u, self.dt, &self.jp, &self.jd, ode)?;
                let rot = Complex64::from_polar(1.0, -w * self.lower);
                let half = if n == 0 { 0.5 } else { 1.0 };
                Ok(starts
                    .iter()
                    .zip(&atoms)
                    .map(|(&l, &(ld, aw))| {
                        let e = Complex64::from_polar(1.0, w * ld);
                        let p = plus.eval(l) - aw * e;
                        let m = minus.eval(l) - aw * e.conj();
                        half / self.width * (p * rot + m * rot.conj())
                    })
                    .collect())
            })
            .collect()
    }

    fn densities(&self, u: f64, starts: &[f64]) -> Result<Vec<Complex64>> {
        let coef = self.coefficients(u, starts)?;
        let n_h = self.nodes.len();
        let ns = starts.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n_h * ns];
        for next in 0..n_h {
            for (row, cell) in coef.iter().zip(&self.cells) {
                let c = cell[next];
                for (now, z) in row.iter().enumerate() {
                    out[next * ns + now] += c * z;
                }
            }
        }
        for (now, &l) in starts.iter().enumerate() {
            let (ld, aw) = self.atom(u, l);
            for (next, e) in self.interpolation_weights(ld).into_iter().enumerate() {
                out[next * ns + now] += e * aw;
            }
        }
        Ok(out)
    }
}

impl Transition for IntensityChain {
    fn n_states(&self) -> usize {
        self.nodes.len()
    }
    fn step(&self, u: f64) -> Result<Vec<Complex64>> {
        self.densities(u, &self.nodes)
    }
    fn initial(&self, u: f64) -> Result<Vec<Complex64>> {
        self.densities(u, &[self.jp.lambda0()])
    }
}

/// Lagrange basis on nodes `t` with barycentric weights `bary`, evaluated at `x`.
fn lagrange(t: &[f64], bary: &[f64], x: f64) -> Vec<f64> {
    if let Some(h) = t.iter().position(|&th| (x - th).abs() < 1e-14) {
        let mut out = vec![0.0; t.len()];
        out[h] = 1.0;
        return out;
    }
    let terms: Vec<f64> = t.iter().zip(bary).map(|(th, b)| b / (x - th)).collect();
    let total: f64 = terms.iter().sum();
    terms.into_iter().map(|v| v / total).collect()
}

/// `sum_l a_l (m_{k+l} + m_{l-k})` for `k < N` with `m_j = int_{x1}^{x2} e^{i j omega (y - a)} dy`,
/// as one circulant product of size `2N` for the Toeplitz part and one for the Hankel part.
struct Convolver {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Convolver {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(2 * n),
            inv: planner.plan_fft_inverse(2 * n),
        }
    }

    fn apply(&self, a: &[Complex64], g: &CosGrid, x1: f64, x2: f64) -> Vec<Complex64> {
        let n = self.n;
        let omega = PI / g.width();
        let m = |j: i64| -> Complex64 {
            if j == 0 {
                Complex64::new(x2 - x1, 0.0)
            } else {
                let w = j as f64 * omega;
                (Complex64::from_polar(1.0, w * (x2 - g.a)) - Complex64::from_polar(1.0, w * (x1 - g.a))) / (I * w)
            }
        };
        let zero = Complex64::new(0.0, 0.0);
        let ni = n as i64;
        let mut toep = vec![zero; 2 * n];
        let mut hank = vec![zero; 2 * n];
        for d in 0..n {
            toep[d] = m(-(d as i64));
            hank[d] = m(d as i64 + ni - 1);
        }
        for j in 1..n {
            toep[2 * n - j] = m(j as i64);
            hank[2 * n - j] = m(ni - 1 - j as i64);
        }
        let mut fa = vec![zero; 2 * n];
        let mut fr = vec![zero; 2 * n];
        fa[..n].copy_from_slice(a);
        for (l, z) in a.iter().enumerate() {
            fr[n - 1 - l] = *z;
        }
        for buf in [&mut toep, &mut hank, &mut fa, &mut fr] {
            self.fwd.process(buf);
        }
        let mut acc: Vec<Complex64> = (0..2 * n).map(|i| toep[i] * fa[i] + hank[i] * fr[i]).collect();
        self.inv.process(&mut acc);
        let scale = 1.0 / (2 * n) as f64;
        acc.truncate(n);
        acc.iter_mut().for_each(|z| *z *= scale);
        acc
    }
}

/// Continuation value `disc * sum' Re(phi_l e^{i u_l (y - a)})` and its derivative in `y`.
fn continuation(phi: &[Complex64], g: &CosGrid, disc: f64, y: f64) -> (f64, f64) {
    let (mut c, mut dc) = (0.0, 0.0);
    for (l, p) in phi.iter().enumerate() {
        let u = g.freq(l);
        let z = p * Complex64::from_polar(1.0, u * (y - g.a));
        let half = if l == 0 { 0.5 } else { 1.0 };
        c += half * z.re;
        dc -= half * u * z.im;
    }
    (disc * c, disc * dc)
}

/// Root of `h` on `[lo, hi]` given opposite signs at the ends: Newton kept inside a bisection
/// bracket, then a dense scan if that fails.
fn bracketed_root(h: impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64) -> f64 {
    let flo = h(lo).0;
    let rising = flo < 0.0;
    let (lo0, hi0) = (lo, hi);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (f, df) = h(x);
        if f == 0.0 || hi - lo < 1e-13 {
            return x;
        }
        if (f < 0.0) == rising {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() < 1e-14 {
            return next;
        }
        x = next;
    }
    log::warn!("early-exercise root search did not converge on [{lo0}, {hi0}]; scanning");
    let n = 4096;
    let step = (hi0 - lo0) / n as f64;
    let mut prev = lo0;
    for i in 1..=n {
        let y = lo0 + i as f64 * step;
        if (h(y).0 < 0.0) != rising {
            return 0.5 * (prev + y);
        }
        prev = y;
    }
    hi0
}

/// New value coefficients of one slice from its continuation transform `phi`.
fn update_slice(phi: &[Complex64], g: &CosGrid, kind: PayoffKind, strike: f64, disc: f64, conv: &Convolver) -> Vec<f64> {
    let lk = strike.ln();
    let h = |y: f64| {
        let (c, dc) = continuation(phi, g, disc, y);
        let e = y.exp();
        match kind {
            PayoffKind::Put => (c - (strike - e), dc + e),
            PayoffKind::Call => (c - (e - strike), dc - e),
        }
    };
    // continuation region [c1, c2]
    let (c1, c2) = match kind {
        PayoffKind::Put => {
            let top = lk.min(g.b);
            let x = if h(g.a).0 >= 0.0 {
                g.a
            } else if h(top).0 <= 0.0 {
                top
            } else {
                bracketed_root(h, g.a, top)
            };
            (x, g.b)
        }
        PayoffKind::Call => {
            let bottom = lk.max(g.a);
            let x = if h(g.b).0 >= 0.0 {
                g.b
            } else if h(bottom).0 <= 0.0 {
                bottom
            } else {
                bracketed_root(h, bottom, g.b)
            };
            (g.a, x)
        }
    };
    let (e1, e2) = match kind {
        PayoffKind::Put => (g.a, c1),
        PayoffKind::Call => (c2, g.b),
    };
    let mut out = payoff_coefficients(kind, strike, g, e1, e2);
    if c2 > c1 {
        let mut a = phi.to_vec();
        a[0] *= 0.5;
        let s = conv.apply(&a, g, c1, c2);
        let scale = disc / g.width();
        for (o, z) in out.iter_mut().zip(&s) {
            *o += scale * z.re;
        }
    }
    out
}

struct Kernels {
    /// `[next * nv + now]`
    var: Vec<Complex64>,
    var0: Vec<Complex64>,
    jump: Vec<Complex64>,
    jump0: Vec<Complex64>,
}

fn induction(model: &ModelSpec, opt: &OptionSpec, grid: &BermudanGrid, tr: &dyn Transition) -> Result<f64> {
    let hp = &model.heston;
    let g = grid.x;
    let lk = opt.strike.ln();
    if !g.contains(lk) {
        return Err(Error::GridClip { a: g.a, b: g.b, x: lk });
    }
    let x0 = hp.s0().ln();
    if !g.contains(x0) {
        return Err(Error::GridClip { a: g.a, b: g.b, x: x0 });
    }
    let dates = opt.dates() as usize;
    let dt = opt.maturity / dates as f64;
    let disc = (-hp.r() * dt).exp();
    let n = g.n_terms;
    let vg = &grid.variance;
    let nv = vg.len();
    let ns = tr.n_states();
    let slices = nv * ns;

    let kernels: Vec<Kernels> = (0..n)
        .into_par_iter()
        .map(|l| -> Result<Kernels> {
            let u = g.freq(l);
            let k = PsiVKernel::new(u, dt, hp)?;
            let var0 = vg
                .nodes
                .iter()
                .zip(&vg.weights)
                .map(|(&v, &w)| Ok(w * k.eval(v, hp.v0())?))
                .collect::<Result<Vec<_>>>()?;
            let (var, jump) = if dates > 1 {
                let mut var = Vec::with_capacity(nv * nv);
                for (&vn, &w) in vg.nodes.iter().zip(&vg.weights) {
                    for &vc in &vg.nodes {
                        var.push(w * k.eval(vn, vc)?);
                    }
                }
                (var, tr.step(u)?)
            } else {
                (Vec::new(), Vec::new())
            };
            Ok(Kernels { var, var0, jump, jump0: tr.initial(u)? })
        })
        .collect::<Result<_>>()?;
    for k in &kernels {
        if k.var0.iter().chain(&k.var).chain(&k.jump).chain(&k.jump0).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("Bermudan transition kernel"));
        }
    }

    let terminal = payoff_coefficients(opt.kind, opt.strike, &g, g.a, g.b);
    // value coefficients, [slice][l] with slice = j * ns + s
    let mut values: Vec<Vec<f64>> = vec![terminal; slices];
    let conv = Convolver::new(n);

    for _ in 1..dates {
        // phi[l][slice]
        let phi: Vec<Vec<Complex64>> = kernels
            .par_iter()
            .enumerate()
            .map(|(l, k)| {
                let mut w = vec![Complex64::new(0.0, 0.0); slices];
                for jn in 0..nv {
                    for sn in 0..ns {
                        let vl = values[jn * ns + sn][l];
                        if vl == 0.0 {
                            continue;
                        }
                        for sc in 0..ns {
                            w[jn * ns + sc] += k.jump[sn * ns + sc] * vl;
                        }
                    }
                }
                let mut out = vec![Complex64::new(0.0, 0.0); slices];
                for jn in 0..nv {
                    for jc in 0..nv {
                        let kv = k.var[jn * nv + jc];
                        for sc in 0..ns {
                            out[jc * ns + sc] += kv * w[jn * ns + sc];
                        }
                    }
                }
                out
            })
            .collect();
        values = (0..slices)
            .into_par_iter()
            .map(|sl| {
                let a: Vec<Complex64> = phi.iter().map(|p| p[sl]).collect();
                update_slice(&a, &g, opt.kind, opt.strike, disc, &conv)
            })
            .collect();
    }

    let total: f64 = kernels
        .par_iter()
        .enumerate()
        .map(|(l, k)| {
            let mut z = Complex64::new(0.0, 0.0);
            for jn in 0..nv {
                for sn in 0..ns {
                    z += k.var0[jn] * k.jump0[sn] * values[jn * ns + sn][l];
                }
            }
            let half = if l == 0 { 0.5 } else { 1.0 };
            half * (z * Complex64::from_polar(1.0, g.freq(l) * (x0 - g.a))).re
        })
        .sum();
    let price = disc * total;
    if price.is_finite() {
        Ok(price)
    } else {
        Err(Error::NonFinite("Bermudan price"))
    }
}

fn transition(model: &ModelSpec, opt: &OptionSpec, lattice: JumpLattice) -> Result<Box<dyn Transition>> {
    let dt = opt.maturity / opt.dates() as f64;
    match (lattice, &model.jumps) {
        (JumpLattice::Single, Jumps::QHawkes(..)) => Err(invalid("lattice", "Q-Hawkes jumps need an activation lattice")),
        (JumpLattice::Single, Jumps::Hawkes(jp, _)) if jp.alpha() >= ALPHA_EPS => {
            Err(invalid("lattice", "Hawkes jumps need an intensity lattice"))
        }
        (JumpLattice::Single, jumps) => Ok(Box::new(ConstantJumps { jumps: *jumps, dt })),
        (JumpLattice::Activation { n_q }, Jumps::QHawkes(jp, jd)) => {
            if n_q <= jp.q0() as usize {
                return Err(invalid("n_q", format!("must exceed Q0 = {}", jp.q0())));
            }
            Ok(Box::new(ActivationChain { jp: *jp, jd: *jd, dt, n: n_q }))
        }
        (JumpLattice::Intensity { lower, upper, n_h, n_lambda }, Jumps::Hawkes(jp, jd)) => {
            Ok(Box::new(IntensityChain::new(*jp, *jd, dt, lower, upper, n_h, n_lambda)?))
        }
        _ => Err(invalid("lattice", "jump lattice does not match the model")),
    }
}

/// Bermudan price on an explicit grid for any model.
pub fn bermudan(model: &ModelSpec, opt: &OptionSpec, bg: &BermudanGrid) -> Result<f64> {
    let tr = transition(model, opt, bg.jumps)?;
    induction(model, opt, bg, tr.as_ref())
}

pub fn bermudan_hqh(model: &ModelSpec, opt: &OptionSpec, bg: &BermudanGrid) -> Result<f64> {
    if model.kind() != ModelKind::Hqh {
        return Err(invalid("model", "expected Q-Hawkes jumps"));
    }
    bermudan(model, opt, bg)
}

pub fn bermudan_hh(model: &ModelSpec, opt: &OptionSpec, bg: &BermudanGrid) -> Result<f64> {
    if model.kind() != ModelKind::Hh {
        return Err(invalid("model", "expected Hawkes jumps"));
    }
    bermudan(model, opt, bg)
}

/// Bermudan price with the default grid construction.
pub fn bermudan_price(model: &ModelSpec, opt: &OptionSpec, settings: &BermudanSettings) -> Result<f64> {
    let bg = BermudanGrid::new(model, opt, settings)?;
    bermudan(model, opt, &bg)
}
