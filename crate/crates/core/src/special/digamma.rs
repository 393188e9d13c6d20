use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_{2k} / (2k)` for k = 1..6.
const ASYMPTOTIC: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
];

/// `cot w`, switching to exponential forms when `|Im w|` is large.
fn cot(w: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if w.im > 10.0 {
        let e = (Complex64::i() * 2.0 * w).exp();
        -Complex64::i() * (one + e) / (one - e)
    } else if w.im < -10.0 {
        let e = (-Complex64::i() * 2.0 * w).exp();
        Complex64::i() * (one + e) / (one - e)
    } else {
        w.cos() / w.sin()
    }
}

/// The complex digamma function `Γ'(z)/Γ(z)`.
///
/// Arguments with `Re z < 0` are reflected; the rest are shifted up by the
/// recurrence until `|z| ≥ 12`, where the asymptotic series through `B₁₂`
/// is used.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite digamma argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::PoleAt(z.re));
    }
    if z.re < 0.0 {
        // ψ(z) = ψ(1 − z) − π cot(πz)
        let one = Complex64::new(1.0, 0.0);
        return Ok(shifted(one - z) - PI * cot(PI * z));
    }
    Ok(shifted(z))
}

fn shifted(mut z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm_sqr() < 144.0 {
        acc -= z.inv();
        z += 1.0;
    }
    let w = z.inv();
    let w2 = w * w;
    let mut poly = Complex64::new(0.0, 0.0);
    for c in ASYMPTOTIC.iter().rev() {
        poly = poly * w2 + *c;
    }
    acc + z.ln() - 0.5 * w - poly * w2
}
