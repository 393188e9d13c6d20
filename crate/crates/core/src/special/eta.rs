use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `log|η(τ)| = −π Im τ / 12 + Σ_{k≥1} log|1 − q^k|`, `q = e^{2πiτ}`.
///
/// The product is taken directly, without modular reduction, and stops once
/// `k|q|^k < 10⁻¹⁸ (1 − |q|)`.
pub fn log_abs_eta(tau: Complex64) -> Result<f64> {
    if !(tau.im > 0.0) {
        return Err(Error::LowerHalfPlane { im: tau.im });
    }
    let q_abs = (-TAU * tau.im).exp();
    let mut acc = 0.0;
    let mut k = 1u64;
    loop {
        let kf = k as f64;
        let modulus = (-TAU * kf * tau.im).exp();
        if kf * modulus < 1e-18 * (1.0 - q_abs) || modulus == 0.0 {
            break;
        }
        let w = Complex64::from_polar(modulus, TAU * kf * tau.re);
        acc += 0.5 * (-2.0 * w.re + w.norm_sqr()).ln_1p();
        k += 1;
    }
    Ok(-PI * tau.im / 12.0 + acc)
}
