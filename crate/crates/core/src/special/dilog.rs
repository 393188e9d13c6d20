use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::zeta::zeta_even;
use crate::error::{Error, Result};

const PI2_6: f64 = PI * PI / 6.0;
const TERMS: usize = 30;

/// `B_{2k} / (2k+1)!` for k = 1..TERMS.
fn bernoulli_coefficients() -> &'static [f64; TERMS] {
    static C: OnceLock<[f64; TERMS]> = OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; TERMS];
        for (i, slot) in c.iter_mut().enumerate() {
            let k = i + 1;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta_even(k) / (TAU.powi(2 * k as i32) * (2 * k + 1) as f64);
        }
        c
    })
}

/// `ln(1 + w)` without losing the real part for small `w`.
fn ln_1p(w: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    Complex64::new(re, w.im.atan2(1.0 + w.re))
}

/// Σ zᵐ/m², for |z| ≤ 1/2.
fn power_series(z: Complex64) -> Complex64 {
    let mut pow = z;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..200 {
        let term = pow / (m * m) as f64;
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        pow *= z;
    }
    acc
}

/// Σ B_n u^{n+1}/(n+1)! with u = −ln(1−z); needs |z| ≤ 1 and Re z ≤ 1/2.
fn bernoulli_series(z: Complex64) -> Complex64 {
    let u = -ln_1p(-z);
    let u2 = u * u;
    let mut acc = u - 0.25 * u2;
    let mut pow = u * u2;
    for c in bernoulli_coefficients() {
        let term = pow * *c;
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        pow *= u2;
    }
    acc
}

/// Li₂ for |z| ≤ 1.
fn unit_disk(z: Complex64) -> Complex64 {
    if z.norm() <= 0.5 {
        power_series(z)
    } else if z.re > 0.5 {
        let w = Complex64::new(1.0, 0.0) - z;
        let tail = if w.norm() <= 0.5 {
            power_series(w)
        } else {
            bernoulli_series(w)
        };
        PI2_6 - z.ln() * w.ln() - tail
    } else {
        bernoulli_series(z)
    }
}

/// The dilogarithm `Li₂(z)` on the plane cut along `[1, ∞)`.
pub fn dilog(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite dilogarithm argument {z}")));
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::CutViolation { re: z.re, im: z.im });
    }
    if z.norm_sqr() <= 1.0 {
        return Ok(unit_disk(z));
    }
    let l = (-z).ln();
    Ok(-unit_disk(z.inv()) - PI2_6 - 0.5 * l * l)
}
