use latsum_core::SumResult;
use serde::Serialize;

use crate::CliError;

/// Shortest decimal that parses back to the same binary64.
pub fn number(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(format!("cannot encode output: {e}")))
}

pub const SWEEP_HEADER: &str = "n,value,method,err_estimate";

pub fn sweep_csv(rows: &[SumResult]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, number(r.value), r.method, number(r.err_estimate)));
    }
    out
}
