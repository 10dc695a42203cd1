//! CSV matrix files: one matrix row per line, comma-separated decimals, and
//! optional comment lines starting with `#`.

use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::error::Error as CoreError;
use crate::matrix::SquareMatrix;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Open { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Shape(#[from] CoreError),
    #[error(transparent)]
    Write(#[from] std::io::Error),
}

pub fn read_matrix<R: Read>(reader: R) -> Result<SquareMatrix, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| IoError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|_| IoError::Parse {
                    line,
                    message: format!("`{cell}` is not a decimal number"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(SquareMatrix::from_rows(&rows)?)
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<SquareMatrix, IoError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| IoError::Open {
        path: path.display().to_string(),
        source,
    })?;
    read_matrix(file)
}

/// Writes every entry in its shortest round-trip decimal form, so reading the
/// file back reproduces the matrix bit for bit.
pub fn write_matrix<W: Write>(m: &SquareMatrix, mut w: W) -> Result<(), IoError> {
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn matrix_to_csv(m: &SquareMatrix) -> String {
    let mut buf = Vec::new();
    write_matrix(m, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
