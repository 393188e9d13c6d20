//! Brute-force evaluators for the finite sums: `F_n(f)`, `F_n(f_m)` and their
//! restricted versions, `G_n` (directly and through the digamma function),
//! `H_n` and `U_n`.
//!
//! Rows are evaluated in parallel, each with its own compensated accumulator;
//! the per-row partials are merged in row order, so results do not depend on
//! the number of worker threads.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{GridDomain, LatticeSpec, QuadraticForm};
use crate::special::digamma;
use crate::summation::Neumaier;

/// How a [`SumResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Digamma,
    Expansion,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Digamma => "digamma",
            Method::Expansion => "expansion",
            Method::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "digamma" => Ok(Method::Digamma),
            "expansion" => Ok(Method::Expansion),
            "quadrature" => Ok(Method::Quadrature),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// A computed scalar with its provenance and a heuristic accuracy estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumResult {
    pub value: f64,
    pub n: usize,
    pub method: Method,
    /// Number of summands (grid points, index pairs or digamma rows).
    pub terms: u64,
    pub err_estimate: f64,
}

/// Rows below this size are summed on the calling thread.
const PARALLEL_THRESHOLD: usize = 64;

/// Sums `row(i)` for `i` in `0..rows`, merging the row partials in index order.
fn sum_rows<F>(rows: usize, row: F) -> Result<(Neumaier, f64)>
where
    F: Fn(usize) -> Result<(Neumaier, f64)> + Sync,
{
    let partials: Vec<(Neumaier, f64)> = if rows >= PARALLEL_THRESHOLD {
        (0..rows).into_par_iter().map(&row).collect::<Result<_>>()?
    } else {
        (0..rows).map(&row).collect::<Result<_>>()?
    };
    let mut total = Neumaier::new();
    let mut abs = 0.0;
    for (p, a) in &partials {
        total.merge(p);
        abs += a;
    }
    Ok((total, abs))
}

fn rounding_estimate(abs_sum: f64) -> f64 {
    4.0 * f64::EPSILON * abs_sum
}

/// `F_n(f)` (when `m` is `None`) or `F_n(f_m)` over `D_n`, or over `D_n^β`
/// when `beta` is given.
pub fn fn_direct(spec: &LatticeSpec, n: usize, m: Option<u32>, beta: Option<f64>) -> Result<SumResult> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("F_n needs n >= 2, got {n}")));
    }
    if m == Some(0) {
        return Err(Error::InvalidArgument("Taylor order m must be at least 1".into()));
    }
    if matches!(m, Some(k) if k >= 2) && beta.is_none() {
        return Err(Error::InvalidArgument(
            "m >= 2 needs a restricted domain; pass beta".into(),
        ));
    }
    let domain = match beta {
        Some(b) => GridDomain::restricted(n, Some(b), spec)?,
        None => GridDomain::full(n)?,
    };

    let (total, abs) = match m {
        None => sum_f_table(spec, &domain)?,
        Some(order) => sum_rows(n, |k| {
            let mut acc = Neumaier::new();
            for p in domain.row(k) {
                acc.add(spec.fm(order, p.t)?);
            }
            let v = acc.value();
            Ok((acc, v))
        })?,
    };

    Ok(SumResult {
        value: total.value(),
        n,
        method: Method::Direct,
        terms: domain.len() as u64,
        err_estimate: rounding_estimate(abs),
    })
}

/// Sums `1/ψ` using the table `sin²(πr/n)`: at a node, `½ s·t = π (s·(j,k))/n`.
fn sum_f_table(spec: &LatticeSpec, domain: &GridDomain) -> Result<(Neumaier, f64)> {
    let n = domain.n();
    let sin2: Vec<f64> = (0..n)
        .map(|r| {
            let folded = r.min(n - r);
            let s = (PI * (folded as f64 / n as f64)).sin();
            s * s
        })
        .collect();
    let scale = 2.0 / spec.size() as f64;
    let modulus = n as i64;
    let vectors: Vec<[i64; 2]> = spec
        .vectors()
        .iter()
        .map(|v| [v[0].rem_euclid(modulus), v[1].rem_euclid(modulus)])
        .collect();
    let floor = spec.singular_floor();

    sum_rows(n, |k| {
        let mut acc = Neumaier::new();
        for p in domain.row(k) {
            let mut s = 0.0;
            for v in &vectors {
                let r = (v[0] * p.j + v[1] * p.k).rem_euclid(modulus);
                s += sin2[r as usize];
            }
            let psi = scale * s;
            if psi < floor {
                return Err(Error::SingularPoint {
                    x: p.t[0],
                    y: p.t[1],
                    value: psi,
                });
            }
            acc.add(1.0 / psi);
        }
        let v = acc.value();
        Ok((acc, v))
    })
}

/// `G_n = Σ_{j,k=1}^{n−1} [1/(aj² − bjk + ck²) + 1/(aj² + bjk + ck²)]`.
///
/// The form is normalized first, so swapping `a` and `c` or negating `b`
/// gives bit-identical results.
pub fn gn_direct(form: &QuadraticForm, n: usize) -> Result<SumResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("G_n needs n >= 1".into()));
    }
    let q = form.normalized();
    let (a, b, c) = (q.a(), q.b(), q.c());
    let rows = n.saturating_sub(1);
    let (total, abs) = sum_rows(rows, |i| {
        let j = (i + 1) as f64;
        let mut acc = Neumaier::new();
        for k in 1..n {
            let k = k as f64;
            let base = a * j * j + c * k * k;
            let cross = b * j * k;
            acc.add(1.0 / (base - cross));
            acc.add(1.0 / (base + cross));
        }
        let v = acc.value();
        Ok((acc, v))
    })?;
    Ok(SumResult {
        value: total.value(),
        n,
        method: Method::Direct,
        terms: (rows * rows) as u64,
        err_estimate: rounding_estimate(abs),
    })
}

/// `G_n` through the partial-fraction identity
/// `Σ_{k=1}^{n−1} 1/(k + z) = ψ(n + z) − ψ(1 + z)` applied in `k` for each `j`:
///
/// ```text
/// G_n = −(2/√|d|) Σ_j (1/j) Im[ψ(n+μj) − ψ(1+μj) − ψ(n−μj) + ψ(1−μj)]
/// ```
///
/// The conjugate terms are folded in through `ψ(z̄) = conj ψ(z)`.
pub fn gn_digamma(form: &QuadraticForm, n: usize) -> Result<SumResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("G_n needs n >= 1".into()));
    }
    let q = form.normalized();
    let mu = q.mu();
    let nn = Complex64::new(n as f64, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let rows = n.saturating_sub(1);
    let (total, abs) = sum_rows(rows, |i| {
        let j = (i + 1) as f64;
        let z = mu * j;
        let v = digamma(nn + z)? - digamma(one + z)? - digamma(nn - z)? + digamma(one - z)?;
        let mut acc = Neumaier::new();
        acc.add(v.im / j);
        Ok((acc, (v.im / j).abs()))
    })?;
    let scale = -2.0 / q.sqrt_abs_disc();
    Ok(SumResult {
        value: scale * total.value(),
        n,
        method: Method::Digamma,
        terms: rows as u64,
        err_estimate: 1e-14 * scale.abs() * abs,
    })
}

/// `H_n = Σ_{j=1}^{n−1} 1/j²`.
pub fn hn_direct(n: usize) -> f64 {
    (1..n.max(1))
        .rev()
        .map(|j| {
            let j = j as f64;
            1.0 / (j * j)
        })
        .collect::<Neumaier>()
        .value()
}

/// `U_n = Σ_{j=1}^{n} [1/(aj²+bjn+cn²) + 1/(aj²−bjn+cn²) + 1/(an²+bnj+cj²) + 1/(an²−bnj+cj²)]`.
pub fn un_direct(form: &QuadraticForm, n: usize) -> f64 {
    let (a, b, c) = (form.a(), form.b(), form.c());
    let nf = n as f64;
    let mut acc = Neumaier::new();
    for j in 1..=n {
        let j = j as f64;
        let cross = b * j * nf;
        let first = a * j * j + c * nf * nf;
        let second = a * nf * nf + c * j * j;
        acc.add(1.0 / (first + cross));
        acc.add(1.0 / (first - cross));
        acc.add(1.0 / (second + cross));
        acc.add(1.0 / (second - cross));
    }
    acc.value()
}

/// `F_n(f₁)` rebuilt from `G`, `H` and `U` at half size:
///
/// ```text
/// odd:  (|Φ|n²/π²) (G_N + (1/a + 1/c) H_N),                 N = (n+1)/2
/// even: (|Φ|n²/π²) (G_N + (1/a + 1/c) H_N − ½ U_{n/2})
///       + (2|Φ|/π²)(1/(a+b+c) − 1/a − 1/c),                 N = (n+2)/2
/// ```
///
/// The even box is `[−n/2, n/2 − 1]²`, which is why the sign of `b` matters
/// there.
pub fn fn_f1_assembled(spec: &LatticeSpec, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("F_n(f1) needs n >= 2".into()));
    }
    let form = spec.form();
    let l = spec.size() as f64;
    let nf = n as f64;
    let scale = l * nf * nf / (PI * PI);
    let axis = form.axis_sum();
    if n % 2 == 1 {
        let half = (n + 1) / 2;
        Ok(scale * (gn_direct(form, half)?.value + axis * hn_direct(half)))
    } else {
        let half = (n + 2) / 2;
        let body = gn_direct(form, half)?.value + axis * hn_direct(half) - 0.5 * un_direct(form, n / 2);
        let edge = 2.0 * l / (PI * PI) * (1.0 / (form.a() + form.b() + form.c()) - axis);
        Ok(scale * body + edge)
    }
}
