//! Discrete cosine expansion for integer-valued random variables on `{0, ..., N-1}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::CharFn;

/// `A_k = (2/N) Re(psi(k pi / N) e^{i k pi / (2N)})`; the first term is halved on use.
#[derive(Debug, Clone, PartialEq)]
pub struct DctCoefficients {
    pub values: Vec<f64>,
}

impl DctCoefficients {
    pub fn new(cf: &dyn CharFn, n_terms: usize) -> Self {
        let nf = n_terms as f64;
        let values = (0..n_terms)
            .map(|k| {
                let w = k as f64 * PI / nf;
                let rot = Complex64::from_polar(1.0, 0.5 * w);
                2.0 / nf * (cf.eval(w) * rot).re
            })
            .collect();
        Self { values }
    }

    pub fn n_terms(&self) -> usize {
        self.values.len()
    }

    /// Recovered probability of the value `n`.
    pub fn pmf(&self, n: usize) -> f64 {
        let nf = self.n_terms() as f64;
        let theta = PI * (2 * n + 1) as f64 / (2.0 * nf);
        self.values
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let w = if k == 0 { 0.5 } else { 1.0 };
                w * a * (k as f64 * theta).cos()
            })
            .sum()
    }
}

/// DCOS estimate of `P[X = n]` from `n_terms` coefficients.
pub fn dcos_pmf(cf: &dyn CharFn, n: usize, n_terms: usize) -> f64 {
    DctCoefficients::new(cf, n_terms).pmf(n)
}

/// Aliasing sum `sum_{l >= 1} p(2lN + n) + p(2lN - 1 - n)`, the exact DCOS error at `n`.
/// Terms beyond `support_bound` are taken as zero.
pub fn dcos_error_identity(pmf: &dyn Fn(u64) -> f64, n: u64, n_terms: u64, support_bound: u64) -> f64 {
    let mut total = 0.0;
    let mut l = 1;
    loop {
        let left = 2 * l * n_terms - 1 - n;
        if left > support_bound {
            break;
        }
        total += pmf(left);
        let right = 2 * l * n_terms + n;
        if right <= support_bound {
            total += pmf(right);
        }
        l += 1;
    }
    total
}
