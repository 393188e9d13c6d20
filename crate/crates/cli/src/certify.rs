use latsum_core::asymptotics::{
    fn_f1_expansion, gn_expansion, in_f1_expansion, residual_order_fit, surrogate_difference, ErrorOrder,
};
use latsum_core::quadrature::in_f1_closed;
use latsum_core::sums::{fn_direct, gn_direct};
use latsum_core::Parity;
use rayon::prelude::*;

use crate::args::{CertifyArgs, Claim};
use crate::output::json;
use crate::{usage, CliError};

/// `n_{k+1} = 2 n_k − (n_min mod 2)`, which keeps the parity of `n_min`.
pub fn ladder(nmin: usize, nmax: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = nmin;
    while n <= nmax {
        out.push(n);
        n = 2 * n - nmin % 2;
    }
    out
}

pub fn run(args: &CertifyArgs) -> Result<(String, bool), CliError> {
    if args.nmin < 3 || args.nmax < args.nmin {
        return Err(usage("need 3 <= --nmin <= --nmax"));
    }
    let ns = ladder(args.nmin, args.nmax);

    let model = match args.claim {
        Claim::DifferenceM1 => ErrorOrder::LogN,
        Claim::DifferenceM2 => ErrorOrder::Const,
        Claim::Gn => ErrorOrder::LognOverN4,
        Claim::FnF1 => ErrorOrder::LognOverN2,
        Claim::InF1Even => ErrorOrder::InvN2,
    };
    if args.claim == Claim::InF1Even && args.nmin % 2 == 1 {
        return Err(usage("thm5-even needs an even --nmin"));
    }

    let residual = |n: usize| -> Result<f64, CliError> {
        Ok(match args.claim {
            Claim::DifferenceM1 => surrogate_difference(&args.lattice.require_spec()?, n, 1, None, args.tol)?.0,
            Claim::DifferenceM2 => {
                surrogate_difference(&args.lattice.require_spec()?, n, 2, Some(args.beta.unwrap_or(0.5)), args.tol)?.0
            }
            Claim::Gn => {
                let form = args.lattice.require_form()?;
                gn_direct(&form, n)?.value - gn_expansion(&form)?.eval(n)
            }
            Claim::FnF1 => {
                let spec = args.lattice.require_spec()?;
                fn_direct(&spec, n, Some(1), None)?.value - fn_f1_expansion(&spec)?.eval(n)
            }
            Claim::InF1Even => {
                let spec = args.lattice.require_spec()?;
                in_f1_closed(&spec, n)?.value - in_f1_expansion(&spec, Parity::Even).eval(n)
            }
        })
    };

    let samples = ns
        .par_iter()
        .map(|&n| residual(n).map(|r| (n, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let report = residual_order_fit(&samples, model)?;
    Ok((json(&report)?, report.passed))
}
