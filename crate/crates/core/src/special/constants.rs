/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Catalan's constant G = Σ (−1)ᵏ/(2k+1)².
pub const CATALAN: f64 = 0.915_965_594_177_219;

/// Γ(1/4).
pub const GAMMA_ONE_QUARTER: f64 = 3.625_609_908_221_908_3;

/// Γ(1/3).
pub const GAMMA_ONE_THIRD: f64 = 2.678_938_534_707_747_6;

/// The named constants as a record.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Constants {
    pub euler_gamma: f64,
    pub catalan: f64,
    pub gamma_one_quarter: f64,
    pub gamma_one_third: f64,
}

pub fn constants() -> Constants {
    Constants {
        euler_gamma: EULER_GAMMA,
        catalan: CATALAN,
        gamma_one_quarter: GAMMA_ONE_QUARTER,
        gamma_one_third: GAMMA_ONE_THIRD,
    }
}
