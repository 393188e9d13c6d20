use crate::error::{Error, Result};

/// Kummer's angle `ω = arctan(r sin θ / (1 − r cos θ))`.
///
/// For `r < 1` the denominator is positive, so the principal arctangent and
/// the two-argument form agree. At `r = 1` the same formula is used unchanged,
/// which is continuous away from `θ ≡ 0`.
pub fn kummer_omega(r: f64, theta: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidArgument(format!("Kummer radius must lie in (0, 1], got {r}")));
    }
    let den = 1.0 - r * theta.cos();
    if den == 0.0 {
        return Err(Error::DegeneratePoint { theta });
    }
    Ok((r * theta.sin()).atan2(den))
}
