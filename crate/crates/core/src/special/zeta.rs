use std::f64::consts::TAU;

use super::bernoulli::{bernoulli_number, MAX_BERNOULLI};

/// ζ(2k) for `k ≥ 1`.
pub fn zeta_even(k: usize) -> f64 {
    assert!(k >= 1, "zeta_even needs k >= 1");
    if 2 * k <= MAX_BERNOULLI {
        // ζ(2k) = (−1)^{k+1} B_{2k} (2π)^{2k} / (2 (2k)!)
        let b = bernoulli_number(2 * k).expect("index in table").abs();
        let mut v = 0.5 * b;
        for i in 1..=2 * k {
            v *= TAU / i as f64;
        }
        v
    } else {
        // 2^{−22} is already tiny; a short direct sum is exact to binary64
        (1..=16u32).rev().map(|m| (m as f64).powi(-(2 * k as i32))).sum()
    }
}
