use latsum_core::asymptotics::{
    composite_fn_estimate, fn_f1_expansion, gn_expansion, hn_expansion, in_f1_expansion, un_expansion, ExpansionTerms,
};
use latsum_core::graph::{tau_and_kirchhoff, trace_pseudoinverse_dense, trace_pseudoinverse_spectral, TorusGraph};
use latsum_core::quadrature::{in_f1_closed, in_f_numeric, in_fm_numeric};
use latsum_core::sums::{fn_direct, gn_digamma, gn_direct, hn_direct, un_direct};
use latsum_core::{Method, Parity, SumResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{EvalArgs, ExpansionTarget, Format, MethodArg, ParityArg, Quantity};
use crate::output::{json, number, sweep_csv};
use crate::{usage, CliError};

fn from_expansion(terms: &ExpansionTerms, n: usize) -> SumResult {
    SumResult {
        value: terms.eval(n),
        n,
        method: Method::Expansion,
        terms: 0,
        err_estimate: terms.error_order.scale(n),
    }
}

fn rounding(value: f64, n: usize, terms: u64, method: Method) -> SumResult {
    SumResult {
        value,
        n,
        method,
        terms,
        err_estimate: 4.0 * f64::EPSILON * value.abs(),
    }
}

fn unsupported(quantity: &str, method: MethodArg) -> CliError {
    usage(format!("method {method:?} is not available for {quantity}").to_lowercase())
}

fn evaluate(args: &EvalArgs, n: usize) -> Result<SumResult, CliError> {
    let method = args.method;
    match args.quantity {
        Quantity::Fn => {
            let spec = args.lattice.require_spec()?;
            match method.unwrap_or(MethodArg::Direct) {
                MethodArg::Direct => Ok(fn_direct(&spec, n, args.m, args.beta)?),
                MethodArg::Expansion => match (args.m, args.beta) {
                    (None, None) => Ok(composite_fn_estimate(&spec, n, args.tol)?),
                    (Some(1), None) => Ok(from_expansion(&fn_f1_expansion(&spec)?, n)),
                    _ => Err(usage("fn expansions exist for f and f1 on the full domain only")),
                },
                other => Err(unsupported("fn", other)),
            }
        }
        Quantity::Gn => {
            let form = args.lattice.require_form()?;
            match method.unwrap_or(MethodArg::Direct) {
                MethodArg::Direct => Ok(gn_direct(&form, n)?),
                MethodArg::Digamma => Ok(gn_digamma(&form, n)?),
                MethodArg::Expansion => Ok(from_expansion(&gn_expansion(&form)?, n)),
                other => Err(unsupported("gn", other)),
            }
        }
        Quantity::Hn => match method.unwrap_or(MethodArg::Direct) {
            MethodArg::Direct => Ok(rounding(hn_direct(n), n, n.saturating_sub(1) as u64, Method::Direct)),
            MethodArg::Expansion => Ok(from_expansion(&hn_expansion(), n)),
            other => Err(unsupported("hn", other)),
        },
        Quantity::Un => {
            let form = args.lattice.require_form()?;
            match method.unwrap_or(MethodArg::Direct) {
                MethodArg::Direct => Ok(rounding(un_direct(&form, n), n, 4 * n as u64, Method::Direct)),
                MethodArg::Expansion => Ok(from_expansion(&un_expansion(&form), n)),
                other => Err(unsupported("un", other)),
            }
        }
        Quantity::In => {
            let spec = args.lattice.require_spec()?;
            match (method.unwrap_or(MethodArg::Quadrature), args.m) {
                (MethodArg::Quadrature, None) => Ok(in_f_numeric(&spec, n, args.tol)?),
                (MethodArg::Quadrature, Some(m)) => Ok(in_fm_numeric(&spec, n, m, args.beta, args.tol)?),
                (MethodArg::Expansion, Some(1)) if args.beta.is_none() => Ok(in_f1_closed(&spec, n)?),
                (MethodArg::Expansion, _) => Err(usage("the in expansion needs --m 1 and no --beta")),
                (other, _) => Err(unsupported("in", other)),
            }
        }
        Quantity::Expansion | Quantity::Graph => unreachable!("handled separately"),
    }
}

fn expansion(args: &EvalArgs) -> Result<String, CliError> {
    let target = args
        .target
        .ok_or_else(|| usage("expansion needs --target gn|hn|un|fn_f1|in_f1"))?;
    let terms = match target {
        ExpansionTarget::Gn => gn_expansion(&args.lattice.require_form()?)?,
        ExpansionTarget::Hn => hn_expansion(),
        ExpansionTarget::Un => un_expansion(&args.lattice.require_form()?),
        ExpansionTarget::FnF1 => fn_f1_expansion(&args.lattice.require_spec()?)?,
        ExpansionTarget::InF1 => {
            let parity = match args.parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            };
            in_f1_expansion(&args.lattice.require_spec()?, parity)
        }
    };
    match args.format {
        Format::Json => json(&terms),
        Format::Csv => {
            let rows = [
                ("c_n2logn", terms.c_n2logn),
                ("c_n2", terms.c_n2),
                ("c_n", terms.c_n),
                ("c_logn", terms.c_logn),
                ("c_1_even", terms.c_1_even),
                ("c_1_odd", terms.c_1_odd),
                ("c_inv_n", terms.c_inv_n),
                ("c_inv_n2", terms.c_inv_n2),
                ("c_inv_n3", terms.c_inv_n3),
            ];
            let mut out = String::from("coefficient,value\n");
            for (name, v) in rows {
                out.push_str(&format!("{name},{}\n", number(v)));
            }
            out.push_str(&format!("error_order,{}\n", terms.error_order));
            Ok(out)
        }
    }
}

#[derive(Debug, Serialize)]
struct GraphReport {
    n: usize,
    vertices: usize,
    degree: usize,
    trace: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_dense: Option<f64>,
    tau: f64,
    kirchhoff: f64,
}

fn graph_report(args: &EvalArgs, n: usize) -> Result<GraphReport, CliError> {
    let spec = args.lattice.require_spec()?;
    let g = TorusGraph::new(&spec, n)?;
    let (tau, kirchhoff) = tau_and_kirchhoff(&g)?;
    Ok(GraphReport {
        n,
        vertices: g.vertex_count(),
        degree: g.degree(),
        trace: trace_pseudoinverse_spectral(&g)?,
        trace_dense: if args.dense { Some(trace_pseudoinverse_dense(&g)?) } else { None },
        tau,
        kirchhoff,
    })
}

fn single_or_list<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    match rows {
        [one] => json(one),
        many => json(many),
    }
}

pub fn run(args: &EvalArgs) -> Result<String, CliError> {
    if args.quantity == Quantity::Expansion {
        return expansion(args);
    }
    if args.n.is_empty() {
        return Err(usage("--n is required"));
    }
    if !(args.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }

    if args.quantity == Quantity::Graph {
        let rows = args
            .n
            .par_iter()
            .map(|&n| graph_report(args, n))
            .collect::<Result<Vec<_>, _>>()?;
        return match args.format {
            Format::Json => single_or_list(&rows),
            Format::Csv => {
                let mut out = String::from("n,vertices,degree,trace,tau,kirchhoff,trace_dense\n");
                for r in &rows {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        r.n,
                        r.vertices,
                        r.degree,
                        number(r.trace),
                        number(r.tau),
                        number(r.kirchhoff),
                        r.trace_dense.map(number).unwrap_or_default()
                    ));
                }
                Ok(out)
            }
        };
    }

    let rows = args
        .n
        .par_iter()
        .map(|&n| evaluate(args, n))
        .collect::<Result<Vec<_>, _>>()?;
    match args.format {
        Format::Json => single_or_list(&rows),
        Format::Csv => Ok(sweep_csv(&rows)),
    }
}
