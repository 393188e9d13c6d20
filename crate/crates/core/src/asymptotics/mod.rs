//! Closed-form asymptotic expansions of `G_n`, `H_n`, `U_n`, `F_n(f₁)` and
//! `I_n(f₁)`, the composite estimate of `F_n(f)`, and an empirical check of
//! error orders.

mod composite;
mod euler_maclaurin;
mod residual;

pub use composite::{composite_fn_estimate, surrogate_difference};
pub use euler_maclaurin::{
    euler_maclaurin, gn_expansion_from_profiles, gn_via_euler_maclaurin, un_via_euler_maclaurin, ArctanProfile, EmProfile,
    EulerMaclaurin, QuadraticProfile, SkewProfile, UProfile,
};
pub use residual::{residual_order_fit, ResidualReport};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Parity, QuadraticForm};
use crate::special::{clausen_cl2, log_abs_eta, EULER_GAMMA};

/// Growth class of the remainder an expansion leaves behind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorOrder {
    LogN,
    Const,
    LognOverN2,
    InvN2,
    LognOverN4,
    InvN5,
    Exact,
}

impl ErrorOrder {
    /// `(p, q)` in `n^p (log n)^q`, or `None` for [`ErrorOrder::Exact`].
    pub fn exponents(self) -> Option<(f64, f64)> {
        match self {
            ErrorOrder::LogN => Some((0.0, 1.0)),
            ErrorOrder::Const => Some((0.0, 0.0)),
            ErrorOrder::LognOverN2 => Some((-2.0, 1.0)),
            ErrorOrder::InvN2 => Some((-2.0, 0.0)),
            ErrorOrder::LognOverN4 => Some((-4.0, 1.0)),
            ErrorOrder::InvN5 => Some((-5.0, 0.0)),
            ErrorOrder::Exact => None,
        }
    }

    /// `n^p (log n)^q` at `n`; zero for [`ErrorOrder::Exact`].
    pub fn scale(self, n: usize) -> f64 {
        match self.exponents() {
            None => 0.0,
            Some((p, q)) => {
                let n = n as f64;
                n.powf(p) * n.ln().powf(q)
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorOrder::LogN => "log_n",
            ErrorOrder::Const => "const",
            ErrorOrder::LognOverN2 => "logn_over_n2",
            ErrorOrder::InvN2 => "inv_n2",
            ErrorOrder::LognOverN4 => "logn_over_n4",
            ErrorOrder::InvN5 => "inv_n5",
            ErrorOrder::Exact => "exact",
        }
    }
}

impl fmt::Display for ErrorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ErrorOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            ErrorOrder::LogN,
            ErrorOrder::Const,
            ErrorOrder::LognOverN2,
            ErrorOrder::InvN2,
            ErrorOrder::LognOverN4,
            ErrorOrder::InvN5,
            ErrorOrder::Exact,
        ]
        .into_iter()
        .find(|o| o.as_str() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown error order {s:?}")))
    }
}

/// Coefficients of an expansion in `n² log n, n², n, log n, 1, 1/n, 1/n², 1/n³`
/// with separate constants for even and odd `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerms {
    pub c_n2logn: f64,
    pub c_n2: f64,
    pub c_n: f64,
    pub c_logn: f64,
    pub c_1_even: f64,
    pub c_1_odd: f64,
    pub c_inv_n: f64,
    pub c_inv_n2: f64,
    pub c_inv_n3: f64,
    pub error_order: ErrorOrder,
}

impl ExpansionTerms {
    pub fn zero(error_order: ErrorOrder) -> Self {
        Self {
            c_n2logn: 0.0,
            c_n2: 0.0,
            c_n: 0.0,
            c_logn: 0.0,
            c_1_even: 0.0,
            c_1_odd: 0.0,
            c_inv_n: 0.0,
            c_inv_n2: 0.0,
            c_inv_n3: 0.0,
            error_order,
        }
    }

    /// The constant for the parity of `n`.
    pub fn constant(&self, n: usize) -> f64 {
        match Parity::of(n) {
            Parity::Even => self.c_1_even,
            Parity::Odd => self.c_1_odd,
        }
    }

    /// Evaluates the truncated expansion at `n ≥ 1`.
    pub fn eval(&self, n: usize) -> f64 {
        let x = n as f64;
        let l = x.ln();
        let inv = 1.0 / x;
        let tail = inv * (self.c_inv_n + inv * (self.c_inv_n2 + inv * self.c_inv_n3));
        self.c_n2logn * x * x * l + self.c_n2 * x * x + self.c_n * x + self.c_logn * l + self.constant(n) + tail
    }
}

/// `C(a,b,c) = Σ Cl₂(π − 2 arctan(X/√|d|))` over `X ∈ {2a−b, 2a+b, 2c−b, 2c+b}`.
pub fn clausen_sum(form: &QuadraticForm) -> f64 {
    let (a, b, c) = (form.a(), form.b(), form.c());
    let s = form.sqrt_abs_disc();
    [2.0 * a - b, 2.0 * a + b, 2.0 * c - b, 2.0 * c + b]
        .iter()
        .map(|x| clausen_cl2(PI - 2.0 * (x / s).atan()))
        .sum()
}

/// The bracket shared by the `G_n` and `F_n(f₁)` constants:
/// `(π/2 − arctan((c−a)/√|d|)) log(c/a) − C(a,b,c)`.
fn angular_bracket(form: &QuadraticForm) -> f64 {
    let (a, c) = (form.a(), form.c());
    let s = form.sqrt_abs_disc();
    (0.5 * PI - ((c - a) / s).atan()) * (c / a).ln() - clausen_sum(form)
}

/// The expansion of `G_n` evaluated with the coefficients as given, with no
/// normalization. Agrees with [`gn_expansion`] for every equivalent form.
pub fn gn_expansion_raw(form: &QuadraticForm) -> Result<ExpansionTerms> {
    let s = form.sqrt_abs_disc();
    let axis = form.axis_sum();
    let corner = form.corner_sum();
    let eta = log_abs_eta(form.mu())?;

    let constant = 2.0 * PI * EULER_GAMMA / s - PI * PI / 6.0 * axis - 4.0 * PI / s * eta
        + angular_bracket(form) / s;
    let mut t = ExpansionTerms::zero(ErrorOrder::LognOverN4);
    t.c_logn = 2.0 * PI / s;
    t.c_1_even = constant;
    t.c_1_odd = constant;
    t.c_inv_n = axis - PI / s;
    t.c_inv_n2 = 0.5 * axis + corner / 12.0 - PI / (6.0 * s);
    t.c_inv_n3 = axis / 6.0 + corner / 12.0;
    Ok(t)
}

/// Expansion of `G_n` in `log n, 1, 1/n, 1/n², 1/n³` with remainder
/// `O(log n / n⁴)`. The form is normalized to `a ≤ c`, `b ≥ 0` first.
pub fn gn_expansion(form: &QuadraticForm) -> Result<ExpansionTerms> {
    gn_expansion_raw(&form.normalized())
}

/// `H_n = π²/6 − 1/n − 1/(2n²) − 1/(6n³) + O(1/n⁵)`.
pub fn hn_expansion() -> ExpansionTerms {
    let mut t = ExpansionTerms::zero(ErrorOrder::InvN5);
    t.c_1_even = PI * PI / 6.0;
    t.c_1_odd = PI * PI / 6.0;
    t.c_inv_n = -1.0;
    t.c_inv_n2 = -0.5;
    t.c_inv_n3 = -1.0 / 6.0;
    t
}

/// `U_n = (2π/√|d|)/n + (σ − 1/a − 1/c)/n² − (σ/6)/n³ + O(1/n⁵)` with
/// `σ = 1/(a−b+c) + 1/(a+b+c)`.
pub fn un_expansion(form: &QuadraticForm) -> ExpansionTerms {
    let corner = form.corner_sum();
    let mut t = ExpansionTerms::zero(ErrorOrder::InvN5);
    t.c_inv_n = 2.0 * PI / form.sqrt_abs_disc();
    t.c_inv_n2 = corner - form.axis_sum();
    t.c_inv_n3 = -corner / 6.0;
    t
}

/// `|Φ| / (π √det(SᵀS))`, the common leading coefficient of `n² log n`.
pub fn leading_term(spec: &LatticeSpec) -> f64 {
    spec.size() as f64 / (PI * spec.det_sts().sqrt())
}

/// Expansion of `F_n(f₁)` through the constant term, remainder
/// `O(log n / n²)`.
pub fn fn_f1_expansion(spec: &LatticeSpec) -> Result<ExpansionTerms> {
    let form = spec.form();
    let l = spec.size() as f64;
    let s = form.sqrt_abs_disc();
    let eta = log_abs_eta(form.normalized().mu())?;
    let bracket = 2.0 * PI * (EULER_GAMMA - 2f64.ln()) - 4.0 * PI * eta + angular_bracket(&form.normalized());

    let odd = l / (PI * PI) * (form.corner_sum() + PI / s) / 3.0;
    let parity_shift = l / (PI * PI) * (PI / s + 2.0 / (form.a() - form.b() + form.c()));

    let mut t = ExpansionTerms::zero(ErrorOrder::LognOverN2);
    t.c_n2logn = 2.0 * l / (PI * s);
    t.c_n2 = l / (PI * PI * s) * bracket;
    t.c_1_odd = odd;
    t.c_1_even = odd - parity_shift;
    Ok(t)
}

/// Coefficients of `n² E(N)` in `n² log n, n², n, 1` for
/// `E(N) = α log N + β₀ + β₁/N + β₂/N²` at `N = (n + δ)/2`.
fn rescale_half(alpha: f64, beta: [f64; 3], delta: f64) -> [f64; 4] {
    [
        alpha,
        beta[0] - alpha * 2f64.ln(),
        alpha * delta + 2.0 * beta[1],
        -0.5 * alpha * delta * delta - 2.0 * beta[1] * delta + 4.0 * beta[2],
    ]
}

/// [`fn_f1_expansion`] rebuilt by substituting the `G`, `H` and `U`
/// expansions into the parity-split representation of `F_n(f₁)`:
///
/// ```text
/// odd:  (|Φ|n²/π²) (G_N + (1/a + 1/c) H_N),                   N = (n+1)/2
/// even: (|Φ|n²/π²) (G_N + (1/a + 1/c) H_N − ½ U_{n/2})
///       + (2|Φ|/π²)(1/(a+b+c) − 1/a − 1/c),                   N = (n+2)/2
/// ```
pub fn fn_f1_expansion_assembled(spec: &LatticeSpec) -> Result<ExpansionTerms> {
    let form = spec.form();
    let g = gn_expansion(form)?;
    let h = hn_expansion();
    let u = un_expansion(form);
    let axis = form.axis_sum();
    let scale = spec.size() as f64 / (PI * PI);

    let combined = |delta: f64| -> [f64; 4] {
        let gc = rescale_half(g.c_logn, [g.c_1_odd, g.c_inv_n, g.c_inv_n2], delta);
        let hc = rescale_half(0.0, [h.c_1_odd, h.c_inv_n, h.c_inv_n2], delta);
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = gc[i] + axis * hc[i];
        }
        out
    };
    let odd = combined(1.0);
    let mut even = combined(2.0);
    // n² U_{n/2} = 2u₁ n + 4u₂ + O(1/n)
    even[2] -= 0.5 * 2.0 * u.c_inv_n;
    even[3] -= 0.5 * 4.0 * u.c_inv_n2;

    let extra = 2.0 * spec.size() as f64 / (PI * PI)
        * (1.0 / (form.a() + form.b() + form.c()) - axis);

    let mut t = ExpansionTerms::zero(ErrorOrder::LognOverN2);
    t.c_n2logn = scale * odd[0];
    t.c_n2 = scale * odd[1];
    t.c_n = scale * odd[2];
    t.c_1_odd = scale * odd[3];
    t.c_1_even = scale * even[3] + extra;
    debug_assert!((even[0] - odd[0]).abs() < 1e-12 && (even[1] - odd[1]).abs() < 1e-9);
    Ok(t)
}

/// `I_n(f₁)` as an expansion for the given parity. Odd `n` is exact; even
/// `n` carries the constant `−(|Φ|/(π√|d|) + (2|Φ|/π²)/(a−b+c))` and an
/// `O(1/n²)` remainder.
pub fn in_f1_expansion(spec: &LatticeSpec, parity: Parity) -> ExpansionTerms {
    let form = spec.form();
    let l = spec.size() as f64;
    let s = form.sqrt_abs_disc();
    match parity {
        Parity::Odd => {
            let mut t = ExpansionTerms::zero(ErrorOrder::Exact);
            t.c_n2logn = 2.0 * l / (PI * s);
            t
        }
        Parity::Even => {
            let mut t = ExpansionTerms::zero(ErrorOrder::InvN2);
            t.c_n2logn = 2.0 * l / (PI * s);
            t.c_1_even = -(l / (PI * s) + 2.0 * l / (PI * PI) / (form.a() - form.b() + form.c()));
            t
        }
    }
}
