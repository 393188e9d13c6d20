//! Euler–Maclaurin evaluation of `(1/n) Σ_{j=1}^{n−1} g(j/n)` and the three
//! profiles that carry the `G_n` expansion.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ErrorOrder, ExpansionTerms};
use crate::error::{Error, Result};
use crate::lattice::QuadraticForm;
use crate::special::{bernoulli_number, dilog, log_abs_eta, EULER_GAMMA};
use crate::summation::Neumaier;
use crate::sums::hn_direct;

/// A smooth function on `[0, 1]` with closed-form derivatives and integral.
pub trait EmProfile {
    /// `g^{(k)}(x)`.
    fn derivative(&self, k: usize, x: f64) -> f64;

    /// `∫₀¹ g`.
    fn integral(&self) -> f64;

    fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }
}

/// Truncated expansion value and a bound on the dropped remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMaclaurin {
    pub value: f64,
    pub remainder_bound: f64,
    pub order: usize,
}

/// `sup |B_p({x})|` for `p = 1..4`.
const PERIODIC_BERNOULLI_SUP: [f64; 4] = [0.5, 1.0 / 6.0, 0.048_112_522_432_468_82, 1.0 / 30.0];

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// ```text
/// (1/n) Σ_{j=1}^{n−1} g(j/n) = ∫g − g(0)/n + Σ_{ℓ=1}^{p} (B_ℓ/ℓ!) [g^{(ℓ−1)}]₀¹ / n^ℓ + r
/// |r| ≤ sup|B_p| ∫|g^{(p)}| / (p! n^p)
/// ```
pub fn euler_maclaurin<P: EmProfile + ?Sized>(profile: &P, n: usize, p: usize) -> Result<EulerMaclaurin> {
    if n == 0 {
        return Err(Error::InvalidArgument("Euler-Maclaurin needs n >= 1".into()));
    }
    if !(1..=4).contains(&p) {
        return Err(Error::InvalidArgument(format!("Euler-Maclaurin order {p} outside 1..=4")));
    }
    let nf = n as f64;
    let mut acc = Neumaier::new();
    acc.add(profile.integral());
    acc.add(-profile.value(0.0) / nf);
    let mut scale = 1.0;
    for l in 1..=p {
        scale /= nf;
        let jump = profile.derivative(l - 1, 1.0) - profile.derivative(l - 1, 0.0);
        acc.add(bernoulli_number(l)? / factorial(l) * jump * scale);
    }

    // Simpson on |g^{(p)}|; only a bound, so the kink at sign changes is fine
    let panels = 2048;
    let h = 1.0 / panels as f64;
    let mut mass = Neumaier::new();
    for i in 0..=panels {
        let w = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        mass.add(w * profile.derivative(p, i as f64 * h).abs());
    }
    let mass = mass.value() * h / 3.0;
    let remainder_bound = PERIODIC_BERNOULLI_SUP[p - 1] * mass / (factorial(p) * nf.powi(p as i32));

    Ok(EulerMaclaurin {
        value: acc.value(),
        remainder_bound,
        order: p,
    })
}

/// `d^k/dx^k (x − r)^{−1} = (−1)^k k! (x − r)^{−k−1}`.
fn pole_derivative(r: Complex64, k: usize, x: f64) -> Complex64 {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let base = Complex64::new(x, 0.0) - r;
    sign * factorial(k) * base.powi(-(k as i32) - 1)
}

/// `g(x) = Σ_{w} Im log(1 + w x) / x` over `w ∈ {μ, −μ̄}`, which equals
/// `(1/x)[arctan(√|d|x/(2c − bx)) + arctan(√|d|x/(2c + bx))]` for a
/// normalized form.
#[derive(Debug, Clone, Copy)]
pub struct ArctanProfile {
    weights: [Complex64; 2],
    integral: f64,
}

impl ArctanProfile {
    pub fn new(form: &QuadraticForm) -> Result<Self> {
        let q = form.normalized();
        let mu = q.mu();
        // ∫₀¹ Im log(1 + wx)/x dx = −Im Li₂(−w)
        let integral = (dilog(mu)? - dilog(-mu)?).im;
        Ok(Self {
            weights: [mu, -mu.conj()],
            integral,
        })
    }

    fn single(w: Complex64, k: usize, x: f64) -> f64 {
        if x <= 0.5 {
            // log(1+wx)/x = Σ_m (−1)^m w^{m+1} x^m / (m+1), |wx| ≤ ½
            let mut power = w.powi(k as i32 + 1);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut falling = factorial(k);
            let mut xp = 1.0;
            for m in k..k + 200 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let term = sign * power * (falling * xp / (m as f64 + 1.0));
                sum += term;
                if term.norm() <= 1e-18 * sum.norm() || xp == 0.0 {
                    break;
                }
                power *= w;
                falling *= (m + 1) as f64 / (m + 1 - k) as f64;
                xp *= x;
            }
            sum.im
        } else {
            // Leibniz on log(1 + wx) · x^{−1}
            let one_plus = Complex64::new(1.0, 0.0) + w * x;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut binom = 1.0;
            for i in 0..=k {
                let u = if i == 0 {
                    one_plus.ln()
                } else {
                    let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                    sign * factorial(i - 1) * (w / one_plus).powi(i as i32)
                };
                let j = k - i;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let v = sign * factorial(j) / x.powi(j as i32 + 1);
                sum += binom * u * v;
                binom = binom * (k - i) as f64 / (i + 1) as f64;
            }
            sum.im
        }
    }
}

impl EmProfile for ArctanProfile {
    fn derivative(&self, k: usize, x: f64) -> f64 {
        self.weights.iter().map(|&w| Self::single(w, k, x)).sum()
    }

    fn integral(&self) -> f64 {
        self.integral
    }
}

/// Roots in the upper half plane of `ax² ± bx + c`, with
/// `1/(ax² + βx + c) = (2/√|d|) Im 1/(x − r)`.
fn upper_roots(a: f64, b: f64, s: f64) -> [Complex64; 2] {
    [
        Complex64::new(b, s) / (2.0 * a),
        Complex64::new(-b, s) / (2.0 * a),
    ]
}

/// `g(x) = 1/(ax² − bx + c) + 1/(ax² + bx + c)`.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticProfile {
    roots: [Complex64; 2],
    weight: f64,
    integral: f64,
}

impl QuadraticProfile {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let s = QuadraticForm::new(a, b, c)?.sqrt_abs_disc();
        Ok(Self {
            roots: upper_roots(a, b, s),
            weight: 2.0 / s,
            integral: 2.0 / s * (((2.0 * a - b) / s).atan() + ((2.0 * a + b) / s).atan()),
        })
    }

    pub fn from_form(form: &QuadraticForm) -> Result<Self> {
        let q = form.normalized();
        Self::new(q.a(), q.b(), q.c())
    }
}

impl EmProfile for QuadraticProfile {
    fn derivative(&self, k: usize, x: f64) -> f64 {
        self.roots
            .iter()
            .map(|&r| self.weight * pole_derivative(r, k, x).im)
            .sum()
    }

    fn integral(&self) -> f64 {
        self.integral
    }
}

/// `g(x) = (2c − bx)/(ax² − bx + c)² + (2c + bx)/(ax² + bx + c)²`, written as
/// `d/dx[x/q] + 1/q` summed over both signs.
#[derive(Debug, Clone, Copy)]
pub struct SkewProfile {
    base: QuadraticProfile,
    integral: f64,
}

impl SkewProfile {
    pub fn from_form(form: &QuadraticForm) -> Result<Self> {
        let base = QuadraticProfile::from_form(form)?;
        Ok(Self {
            base,
            integral: form.corner_sum() + base.integral,
        })
    }
}

impl EmProfile for SkewProfile {
    fn derivative(&self, k: usize, x: f64) -> f64 {
        // x/q = (2/√|d|) Im r/(x − r)
        let ratio: f64 = self
            .base
            .roots
            .iter()
            .map(|&r| self.base.weight * (r * pole_derivative(r, k + 1, x)).im)
            .sum();
        ratio + self.base.derivative(k, x)
    }

    fn integral(&self) -> f64 {
        self.integral
    }
}

/// The summand of `n² U_n`:
/// `1/(ax² ± bx + c) + 1/(cx² ± bx + a)`.
#[derive(Debug, Clone, Copy)]
pub struct UProfile {
    near: QuadraticProfile,
    far: QuadraticProfile,
}

impl UProfile {
    pub fn from_form(form: &QuadraticForm) -> Result<Self> {
        let (a, b, c) = (form.a(), form.b(), form.c());
        Ok(Self {
            near: QuadraticProfile::new(a, b, c)?,
            far: QuadraticProfile::new(c, b, a)?,
        })
    }
}

impl EmProfile for UProfile {
    fn derivative(&self, k: usize, x: f64) -> f64 {
        self.near.derivative(k, x) + self.far.derivative(k, x)
    }

    fn integral(&self) -> f64 {
        self.near.integral + self.far.integral
    }
}

/// `𝒢₄ = −(π√|d|/(24c) + log|η(μ)|)`, exact up to `O(|e^{2πiμ}|ⁿ)`.
fn eta_piece(q: &QuadraticForm) -> Result<f64> {
    Ok(-(PI * q.sqrt_abs_disc() / (24.0 * q.c()) + log_abs_eta(q.mu())?))
}

/// `G_n` rebuilt from its six pieces,
///
/// ```text
/// G_n = −(2/√|d|)𝒢₁ − 𝒢₂/(2n) − 𝒢₃/(12n²) + (4π/√|d|)𝒢₄ + (2π/√|d|)𝒢₅ − 𝒢₆/a
/// ```
///
/// with `𝒢₁..𝒢₃` from fourth-order Euler–Maclaurin, `𝒢₄` from η, and the
/// harmonic sums `𝒢₅ = Σ_{j<n} 1/j`, `𝒢₆ = H_n` summed directly. Accurate to
/// `O(log n / n⁴)`.
pub fn gn_via_euler_maclaurin(form: &QuadraticForm, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("G_n expansion needs n >= 2".into()));
    }
    let q = form.normalized();
    let s = q.sqrt_abs_disc();
    let nf = n as f64;
    let g1 = euler_maclaurin(&ArctanProfile::new(&q)?, n, 4)?.value;
    let g2 = euler_maclaurin(&QuadraticProfile::from_form(&q)?, n, 4)?.value;
    let g3 = euler_maclaurin(&SkewProfile::from_form(&q)?, n, 4)?.value;
    let harmonic: Neumaier = (1..n).rev().map(|j| 1.0 / j as f64).collect();

    let mut acc = Neumaier::new();
    acc.add(-2.0 / s * g1);
    acc.add(-g2 / (2.0 * nf));
    acc.add(-g3 / (12.0 * nf * nf));
    acc.add(4.0 * PI / s * eta_piece(&q)?);
    acc.add(2.0 * PI / s * harmonic.value());
    acc.add(-hn_direct(n) / q.a());
    Ok(acc.value())
}

/// `U_n` from the Euler–Maclaurin expansion of its summand; `O(n⁻⁶)`.
pub fn un_via_euler_maclaurin(form: &QuadraticForm, n: usize) -> Result<f64> {
    let profile = UProfile::from_form(form)?;
    let em = euler_maclaurin(&profile, n, 4)?;
    let nf = n as f64;
    Ok((em.value + profile.value(1.0) / nf) / nf)
}

/// The `G_n` expansion coefficients read off the Euler–Maclaurin pieces
/// instead of the closed forms.
pub fn gn_expansion_from_profiles(form: &QuadraticForm) -> Result<ExpansionTerms> {
    let q = form.normalized();
    let s = q.sqrt_abs_disc();
    let profiles: [Box<dyn EmProfile>; 3] = [
        Box::new(ArctanProfile::new(&q)?),
        Box::new(QuadraticProfile::from_form(&q)?),
        Box::new(SkewProfile::from_form(&q)?),
    ];
    // coefficients of n^{−ℓ}, ℓ = 0..3, in each Euler–Maclaurin series
    let mut series = [[0.0; 4]; 3];
    for (row, g) in series.iter_mut().zip(profiles.iter()) {
        row[0] = g.integral();
        row[1] = -g.value(0.0);
        for l in 1..=3 {
            let jump = g.derivative(l - 1, 1.0) - g.derivative(l - 1, 0.0);
            row[l] += bernoulli_number(l)? / factorial(l) * jump;
        }
    }
    let harmonic = [EULER_GAMMA, -0.5, -1.0 / 12.0, 0.0];
    let squares = [PI * PI / 6.0, -1.0, -0.5, -1.0 / 6.0];
    let mut coeff = [0.0; 4];
    for k in 0..4 {
        coeff[k] = -2.0 / s * series[0][k] + 2.0 * PI / s * harmonic[k] - squares[k] / q.a();
        if k >= 1 {
            coeff[k] -= 0.5 * series[1][k - 1];
        }
        if k >= 2 {
            coeff[k] -= series[2][k - 2] / 12.0;
        }
    }
    coeff[0] += 4.0 * PI / s * eta_piece(&q)?;

    let mut t = ExpansionTerms::zero(ErrorOrder::LognOverN4);
    t.c_logn = 2.0 * PI / s;
    t.c_1_even = coeff[0];
    t.c_1_odd = coeff[0];
    t.c_inv_n = coeff[1];
    t.c_inv_n2 = coeff[2];
    t.c_inv_n3 = coeff[3];
    Ok(t)
}
