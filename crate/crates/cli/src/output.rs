use std::io::Write;
use std::path::{Path, PathBuf};

use ansatz_forge::variational::TraceEntry;
use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// Write `bytes` to `dir/name` through a temporary file in the same
/// directory, so readers see either the old file or the complete new one.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let target = dir.join(name);
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
    Ok(target)
}

/// Shortest round-trip decimal, switching to exponent form outside a
/// readable range.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn trace_csv(trace: &[TraceEntry]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows = std::iter::once(["iteration", "value", "grad_norm", "evaluations_cumulative"].map(String::from))
        .chain(trace.iter().map(|t| {
            [
                t.iteration.to_string(),
                fmt_f64(t.value),
                t.grad_norm.map(fmt_f64).unwrap_or_default(),
                t.evaluations.to_string(),
            ]
        }));
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::usage(format!("trace csv: {e}")))?;
    }
    w.into_inner().map_err(|e| CliError::usage(format!("trace csv: {e}")))
}

pub fn to_json_pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}
