mod args;
mod certify;
mod eval;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use latsum_core::{LatticeSpec, QuadraticForm};

use args::{Cli, Command, Lattice};

#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent flags; exit 2.
    Usage(String),
    /// The library refused or failed; exit 3.
    Compute(latsum_core::Error),
}

impl From<latsum_core::Error> for CliError {
    fn from(e: latsum_core::Error) -> Self {
        CliError::Compute(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Lattice {
    pub fn load_spec(&self) -> Result<Option<LatticeSpec>, CliError> {
        let Some(name) = &self.spec else { return Ok(None) };
        if let Ok(spec) = LatticeSpec::named(name) {
            return Ok(Some(spec));
        }
        let path = self.spec_path().expect("spec flag present");
        let text = std::fs::read_to_string(&path)
            .map_err(|e| usage(format!("--spec {name}: not a bundled name and unreadable as a file ({e})")))?;
        LatticeSpec::from_json(&text)
            .map(Some)
            .map_err(|e| usage(format!("--spec {name}: {e}")))
    }

    pub fn require_spec(&self) -> Result<LatticeSpec, CliError> {
        self.load_spec()?.ok_or_else(|| usage("--spec is required"))
    }

    /// The explicit `--form`, else the form of `--spec`.
    pub fn require_form(&self) -> Result<QuadraticForm, CliError> {
        if let Some(v) = &self.form {
            return QuadraticForm::new(v[0], v[1], v[2]).map_err(|e| usage(format!("--form: {e}")));
        }
        match self.load_spec()? {
            Some(spec) => Ok(*spec.form()),
            None => Err(usage("--form or --spec is required")),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LATTICE_SUM_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| usage(format!("LATTICE_SUM_THREADS={raw:?} is not a positive integer")))?;
    if threads == 0 {
        return Err(usage("LATTICE_SUM_THREADS must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(format!("cannot size thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::Eval(a) => eval::run(a).map(|text| (text, true)),
        Command::Certify(a) => certify::run(a),
    });
    match outcome {
        Ok((text, passed)) => {
            // a closed pipe downstream is not our failure
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            let _ = stdout.flush();
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("latsum: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Compute(_) => 3,
            })
        }
    }
}
