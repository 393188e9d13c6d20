use std::sync::OnceLock;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest index served by [`bernoulli_numbers`].
pub const MAX_BERNOULLI: usize = 20;

fn table() -> &'static [Ratio<i128>] {
    static TABLE: OnceLock<Vec<Ratio<i128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Σ_{k=0}^{n} C(n+1, k) B_k = 0
        let mut b: Vec<Ratio<i128>> = Vec::with_capacity(MAX_BERNOULLI + 1);
        b.push(Ratio::from_integer(1));
        for n in 1..=MAX_BERNOULLI {
            let mut acc = Ratio::from_integer(0);
            let mut binom: i128 = 1;
            for (k, bk) in b.iter().enumerate() {
                acc += *bk * binom;
                binom = binom * (n as i128 + 1 - k as i128) / (k as i128 + 1);
            }
            b.push(-acc / (n as i128 + 1));
        }
        b
    })
}

/// `B_k` as an exact fraction (`B₁ = −1/2`).
pub fn bernoulli_rational(k: usize) -> Result<Ratio<i128>> {
    table().get(k).copied().ok_or_else(|| {
        Error::InvalidArgument(format!("Bernoulli index {k} exceeds {MAX_BERNOULLI}"))
    })
}

/// `B_k` rounded to binary64.
pub fn bernoulli_number(k: usize) -> Result<f64> {
    let r = bernoulli_rational(k)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

/// `B₀, …, B_p`.
pub fn bernoulli_numbers(p: usize) -> Result<Vec<f64>> {
    (0..=p).map(bernoulli_number).collect()
}

/// The periodic Bernoulli polynomial `B_p({x})`, `p ≤ 4`.
pub fn bernoulli_poly(p: usize, x: f64) -> Result<f64> {
    let t = x - x.floor();
    let v = match p {
        0 => 1.0,
        1 => t - 0.5,
        2 => t * t - t + 1.0 / 6.0,
        3 => t * (t * (t - 1.5) + 0.5),
        4 => t * t * (t * (t - 2.0) + 1.0) - 1.0 / 30.0,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "Bernoulli polynomial order {p} exceeds 4"
            )))
        }
    };
    Ok(v)
}
