use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "latsum", version, about = "Planar lattice sums and their asymptotics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a sum, integral, expansion or graph invariant.
    Eval(EvalArgs),
    /// Fit residuals along a geometric ladder of n against a claimed order.
    Certify(CertifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Fn,
    Gn,
    Hn,
    Un,
    In,
    Expansion,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Digamma,
    Quadrature,
    Expansion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpansionTarget {
    Gn,
    Hn,
    Un,
    #[value(name = "fn_f1")]
    FnF1,
    #[value(name = "in_f1")]
    InF1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    #[value(name = "thm2-m1")]
    DifferenceM1,
    #[value(name = "thm2-m2")]
    DifferenceM2,
    #[value(name = "thm3")]
    Gn,
    #[value(name = "thm4")]
    FnF1,
    #[value(name = "thm5-even")]
    InF1Even,
}

#[derive(Debug, Args)]
pub struct Lattice {
    /// Bundled spec name or path to a spec JSON file.
    #[arg(long)]
    pub spec: Option<String>,

    /// Quadratic form coefficients `a,b,c`.
    #[arg(long, value_parser = parse_form, allow_hyphen_values = true)]
    pub form: Option<[f64; 3]>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub quantity: Quantity,

    #[command(flatten)]
    pub lattice: Lattice,

    /// One or more sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,

    /// Taylor surrogate order.
    #[arg(long)]
    pub m: Option<u32>,

    /// Shrink factor of the restricted domain.
    #[arg(long)]
    pub beta: Option<f64>,

    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    /// Which expansion to print (with `expansion`).
    #[arg(long, value_enum)]
    pub target: Option<ExpansionTarget>,

    /// Parity for the `in_f1` expansion.
    #[arg(long, value_enum, default_value = "odd")]
    pub parity: ParityArg,

    /// Also run the dense eigensolver (with `graph`).
    #[arg(long)]
    pub dense: bool,

    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub claim: Claim,

    #[command(flatten)]
    pub lattice: Lattice,

    #[arg(long)]
    pub nmin: usize,

    #[arg(long)]
    pub nmax: usize,

    #[arg(long)]
    pub beta: Option<f64>,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

fn parse_form(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected a,b,c but got {text:?}"));
    };
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    Ok([num(a)?, num(b)?, num(c)?])
}

impl Lattice {
    pub fn spec_path(&self) -> Option<PathBuf> {
        self.spec.as_ref().map(PathBuf::from)
    }
}
