//! Operator files: TOML with the local dimensions and a row-major matrix of
//! `[re, im]` pairs.
//!
//! ```toml
//! structure = [2, 2]
//! matrix = [
//!   [[1, 0], [0, 0], [0, 0], [0, 0]],
//!   [[0, 0], [1, 0], [0, 0], [0, 0]],
//!   [[0, 0], [0, 0], [1, 0], [0, 0]],
//!   [[0, 0], [0, 0], [0, 0], [1, 0]],
//! ]
//! ```

use std::fmt::Write as _;
use std::path::Path;

use entprod::{Complex64, ComplexMatrix, OperatorOnSpace, SpaceStructure};
use serde::Deserialize;

use crate::error::CliError;
use crate::output::fmt_f64;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperatorFile {
    structure: Vec<usize>,
    matrix: Vec<Vec<Vec<f64>>>,
}

pub fn parse_operator(text: &str) -> Result<OperatorOnSpace, CliError> {
    let raw: RawOperatorFile =
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string().trim_end().to_owned()))?;
    let structure = SpaceStructure::new(raw.structure)
        .map_err(|e| CliError::Parse(format!("structure: {e}")))?;
    let dim = structure.total_dim();
    if raw.matrix.len() != dim {
        return Err(CliError::Parse(format!(
            "matrix has {} rows, structure needs {dim}",
            raw.matrix.len()
        )));
    }
    let mut rows = Vec::with_capacity(dim);
    for (r, row) in raw.matrix.iter().enumerate() {
        if row.len() != dim {
            return Err(CliError::Parse(format!(
                "matrix row {r} has {} entries, structure needs {dim}",
                row.len()
            )));
        }
        let mut entries = Vec::with_capacity(dim);
        for (c, z) in row.iter().enumerate() {
            match z.as_slice() {
                &[re, im] => entries.push(Complex64::new(re, im)),
                _ => {
                    return Err(CliError::Parse(format!(
                        "matrix entry ({r}, {c}) must be [re, im], found {} numbers",
                        z.len()
                    )))
                }
            }
        }
        rows.push(entries);
    }
    let matrix = ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Parse(e.to_string()))?;
    OperatorOnSpace::new(matrix, structure).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn read_operator(path: &Path) -> Result<OperatorOnSpace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_operator(&text).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Serializes an operator in the same format, one matrix row per line.
pub fn format_operator(op: &OperatorOnSpace) -> String {
    let mut out = String::new();
    let dims: Vec<String> = op
        .structure()
        .local_dims()
        .iter()
        .map(ToString::to_string)
        .collect();
    writeln!(out, "structure = [{}]", dims.join(", ")).unwrap();
    out.push_str("matrix = [\n");
    for row in op.matrix().to_rows() {
        let entries: Vec<String> = row
            .iter()
            .map(|z| format!("[{}, {}]", toml_float(z.re), toml_float(z.im)))
            .collect();
        writeln!(out, "  [{}],", entries.join(", ")).unwrap();
    }
    out.push_str("]\n");
    out
}

// TOML floats need a fractional part or exponent
fn toml_float(x: f64) -> String {
    let s = fmt_f64(x);
    if s.contains(['.', 'e', 'E']) {
        s
    } else {
        format!("{s}.0")
    }
}
