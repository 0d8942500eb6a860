//! Modified Bessel function of the first kind for real order and complex argument.
//!
//! Values are returned with an extracted real exponent so that arguments with large real
//! part do not overflow.

use num_complex::Complex64;

/// Below this modulus the power series is used, above it the Hankel expansion.
pub const SERIES_RADIUS: f64 = 20.0;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `I_order(argument) = value * exp(exponent)` on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub order: f64,
    pub argument: Complex64,
    pub value: Complex64,
    pub exponent: f64,
}

impl BesselEval {
    /// Unscaled value; may overflow for large arguments.
    pub fn unscaled(&self) -> Complex64 {
        self.value * self.exponent.exp()
    }

    pub fn ln(&self) -> Complex64 {
        self.value.ln() + self.exponent
    }
}

fn inv_gamma(x: f64) -> f64 {
    // 1 / Gamma(x), zero at the poles
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / libm::tgamma(x)
    }
}

/// Power series of `(z/2)^{-nu} I_nu(z) = sum (z^2/4)^k / (k! Gamma(nu + k + 1))`.
pub fn entire_series(nu: f64, z: Complex64) -> Complex64 {
    let q = z * z * 0.25;
    let first = inv_gamma(nu + 1.0);
    let mut sum;
    let mut term;
    let start;
    if first == 0.0 {
        // nu is a negative integer: the leading terms vanish, start from k = -nu
        let k0 = (-nu) as u32;
        start = k0;
        term = Complex64::new(1.0, 0.0);
        for k in 1..=k0 {
            term *= q / k as f64;
        }
        term *= inv_gamma(nu + k0 as f64 + 1.0);
        sum = term;
    } else {
        start = 0;
        term = Complex64::new(first, 0.0);
        sum = term;
    }
    let mut k = start + 1;
    loop {
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() || k > 10_000 {
            break;
        }
        k += 1;
    }
    sum
}

/// Hankel expansion of `I_nu(z) e^{-Re z}` for `Re z >= 0`.
pub fn hankel_scaled(nu: f64, z: Complex64) -> Complex64 {
    debug_assert!(z.re >= 0.0);
    let mu = 4.0 * nu * nu;
    let mut t1 = Complex64::new(1.0, 0.0);
    let mut t2 = Complex64::new(1.0, 0.0);
    let mut s1 = t1;
    let mut s2 = t2;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let c = (mu - ((2 * k - 1) * (2 * k - 1)) as f64) / (8.0 * k as f64);
        let step = c / z;
        let next = t1 * (-step);
        if next.norm() > last {
            break;
        }
        last = next.norm();
        t1 = next;
        t2 *= step;
        s1 += t1;
        s2 += t2;
        if last < 1e-17 * s1.norm() {
            break;
        }
    }
    let root = (2.0 * std::f64::consts::PI * z).sqrt();
    let grow = (I * z.im).exp();
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let decay = (-2.0 * z.re - I * z.im).exp();
    let rot = sign * I * (I * sign * nu * std::f64::consts::PI).exp();
    (grow * s1 + rot * decay * s2) / root
}

/// `(z/2)^{-nu} I_nu(z) = value * exp(exponent)`; even and entire in `z`.
pub fn entire_scaled(nu: f64, z: Complex64) -> (Complex64, f64) {
    if z.norm() < SERIES_RADIUS.max(nu * nu) {
        return (entire_series(nu, z), 0.0);
    }
    let zr = if z.re < 0.0 { -z } else { z };
    let scaled = hankel_scaled(nu, zr) * (zr * 0.5).powf(-nu);
    (scaled, zr.re)
}

/// `I_nu(z)` on the principal branch.
pub fn bessel_i(nu: f64, z: Complex64) -> BesselEval {
    let (e, exponent) = entire_scaled(nu, z);
    let value = if nu == 0.0 { e } else { e * (z * 0.5).powf(nu) };
    BesselEval {
        order: nu,
        argument: z,
        value,
        exponent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn real_reference_values() {
        let cases = [
            (0.0, 1.0, 1.2660658777520084),
            (1.0, 1.0, 0.5651591039924851),
            (0.0, 5.0, 27.239871823604442),
            (2.5, 3.0, 1.5153394466819651),
        ];
        for (nu, x, want) in cases {
            let got = bessel_i(nu, Complex64::new(x, 0.0)).unscaled();
            assert!((got.re - want).abs() < 1e-13 * want, "I_{nu}({x}) = {got}");
        }
    }

    #[test]
    fn complex_reference_values() {
        let a = bessel_i(0.975, Complex64::new(20.0, 15.0)).unscaled();
        assert!(rel(a, Complex64::new(-19998932.777397248, 32636034.341346698)) < 1e-12);
        let b = bessel_i(0.3, Complex64::new(-3.0, 4.0)).unscaled();
        assert!(rel(b, Complex64::new(-3.0674361459836602, -1.924377983742525)) < 1e-12);
    }

    #[test]
    fn half_order_closed_forms() {
        for &(r, th) in &[(0.5, 0.3), (4.0, 1.2), (15.0, -0.7), (25.0, 0.4), (60.0, -1.3), (35.0, 1.5)] {
            let z = Complex64::from_polar(r, th);
            let pre = (2.0 / (PI * z)).sqrt();
            let want_half = pre * z.sinh();
            let want_mhalf = pre * z.cosh();
            let want_3half = pre * (z.cosh() - z.sinh() / z);
            assert!(rel(bessel_i(0.5, z).unscaled(), want_half) < 1e-12, "{z}");
            assert!(rel(bessel_i(-0.5, z).unscaled(), want_mhalf) < 1e-12, "{z}");
            assert!(rel(bessel_i(1.5, z).unscaled(), want_3half) < 1e-12, "{z}");
        }
    }

    #[test]
    fn series_and_hankel_agree_on_overlap() {
        for nu in [0.0, 0.3, 0.975, 2.0, 3.7] {
            for r in [18.0, 20.0, 22.0, 24.0] {
                for th in [-1.0, -0.5, 0.0, 0.4, 1.0] {
                    let z = Complex64::from_polar(r, th);
                    let s = entire_series(nu, z) * (z * 0.5).powf(nu);
                    let h = hankel_scaled(nu, z) * z.re.exp();
                    assert!(rel(s, h) < 1e-10, "nu={nu} z={z}: {}", rel(s, h));
                }
            }
        }
    }

    #[test]
    fn entire_part_is_even_and_scaled() {
        let z = Complex64::new(-300.0, 40.0);
        let (a, ea) = entire_scaled(0.8, z);
        let (b, eb) = entire_scaled(0.8, -z);
        assert_eq!(ea, eb);
        assert!(rel(a, b) < 1e-14);
        assert!(ea == 300.0 && a.norm().is_finite());
        let small = Complex64::new(0.0, 0.0);
        assert!((entire_series(0.8, small).re - 1.0 / libm::tgamma(1.8)).abs() < 1e-15);
    }

    #[test]
    fn negative_integer_order_equals_positive() {
        let z = Complex64::new(3.0, 2.0);
        let a = bessel_i(-2.0, z).unscaled();
        let b = bessel_i(2.0, z).unscaled();
        assert!(rel(a, b) < 1e-13);
    }
}
