//! JSON input parsing and output plumbing.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde_json::Value;
use twisted_weyl::linalg::CMatrix;

/// Input that failed to parse or validate; maps to exit code 2.
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    InvalidInput(msg.into()).into()
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: malformed JSON: {e}", path.display())))
}

/// A number or a `[re, im]` pair.
pub fn parse_complex(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => match (pair[0].as_f64(), pair[1].as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(invalid(format!("expected [re, im], got {v}"))),
        },
        _ => Err(invalid(format!("expected a number or [re, im], got {v}"))),
    }
}

pub fn parse_vector(v: &Value) -> Result<Vec<Complex64>> {
    let Value::Array(items) = v else {
        return Err(invalid("expected an array of complex entries"));
    };
    items.iter().map(parse_complex).collect()
}

/// Square matrix given as an array of rows. A `{"matrix": ...}` wrapper is accepted.
pub fn parse_matrix(v: &Value) -> Result<CMatrix> {
    let v = v.get("matrix").unwrap_or(v);
    let Value::Array(rows) = v else {
        return Err(invalid("expected a matrix as an array of rows"));
    };
    let rows: Vec<Vec<Complex64>> = rows.iter().map(parse_vector).collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(invalid("matrix must be square and non-empty"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn parse_real_matrix(v: &Value) -> Result<Vec<Vec<f64>>> {
    let Value::Array(rows) = v else {
        return Err(invalid("expected a real matrix as an array of rows"));
    };
    rows.iter()
        .map(|r| match r {
            Value::Array(xs) => xs
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| invalid(format!("expected a real number, got {x}"))))
                .collect(),
            _ => Err(invalid("expected a row array")),
        })
        .collect()
}

pub fn complex_json(z: Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}

pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

/// `--out` file, or stdout.
pub fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn write_json(path: Option<&PathBuf>, v: &Value) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn complex_entries() {
        assert_eq!(parse_complex(&json!(0.5)).unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex(&json!([0.0, -1.0])).unwrap(), Complex64::new(0.0, -1.0));
        assert!(parse_complex(&json!("x")).is_err());
        assert!(parse_complex(&json!([1.0])).is_err());
    }

    #[test]
    fn matrices() {
        let m = parse_matrix(&json!([[0.5, [0.0, 0.1]], [[0.0, -0.1], 0.5]])).unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 0.1));
        assert_eq!(matrix_json(&m), json!([[[0.5, 0.0], [0.0, 0.1]], [[0.0, -0.1], [0.5, 0.0]]]));
        assert!(parse_matrix(&json!({"matrix": [[1.0]]})).is_ok());
        assert!(parse_matrix(&json!([[1.0, 0.0]])).is_err());
        assert!(parse_matrix(&json!([])).is_err());
    }
}
