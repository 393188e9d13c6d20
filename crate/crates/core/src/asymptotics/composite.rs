use super::{fn_f1_expansion, in_f1_expansion, leading_term, ErrorOrder};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Parity, DEFAULT_BETA};
use crate::quadrature::{in_f_numeric, in_fm_numeric};
use crate::sums::{fn_direct, Method, SumResult};

/// `F_n(f) ≈ I_n(f) − I_n(f₁) + F_n(f₁)`, with `I_n(f)` by cubature and the
/// `f₁` terms from their expansions. The remainder is `O(log n)`; the reported
/// error is `κ log n` with `κ = 10 |Φ|/(π√det)`.
pub fn composite_fn_estimate(spec: &LatticeSpec, n: usize, tol: f64) -> Result<SumResult> {
    if n < 4 {
        return Err(Error::InvalidArgument("composite estimate needs n >= 4".into()));
    }
    let integral = in_f_numeric(spec, n, tol)?;
    let in_f1 = in_f1_expansion(spec, Parity::of(n)).eval(n);
    let fn_f1 = fn_f1_expansion(spec)?.eval(n);
    let nf = n as f64;
    Ok(SumResult {
        value: integral.value - in_f1 + fn_f1,
        n,
        method: Method::Expansion,
        terms: 0,
        err_estimate: 10.0 * leading_term(spec) * nf.ln(),
    })
}

/// `F_n(f) − I_n(f) + I_n^β(f_m) − F_n^β(f_m)` from a direct sum and cubature,
/// together with the order it should stay within: `O(log n)` for `m = 1`,
/// `O(1)` for `m ≥ 2`.
pub fn surrogate_difference(
    spec: &LatticeSpec,
    n: usize,
    m: u32,
    beta: Option<f64>,
    tol: f64,
) -> Result<(f64, ErrorOrder)> {
    if m == 0 {
        return Err(Error::InvalidArgument("surrogate order m must be >= 1".into()));
    }
    let beta = if m >= 2 { Some(beta.unwrap_or(DEFAULT_BETA)) } else { beta };
    let fn_f = fn_direct(spec, n, None, None)?.value;
    let in_f = in_f_numeric(spec, n, tol)?.value;
    let in_fm = in_fm_numeric(spec, n, m, beta, tol)?.value;
    let fn_fm = fn_direct(spec, n, Some(m), beta)?.value;
    let order = if m == 1 { ErrorOrder::LogN } else { ErrorOrder::Const };
    Ok((fn_f - in_f + in_fm - fn_fm, order))
}
