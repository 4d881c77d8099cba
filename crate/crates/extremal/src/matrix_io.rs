//! Plain-text matrices: the dimension on the first line, then one row per
//! line with space-separated integers.

use std::io::{BufRead, Write};

use extremal_core::exact::ExactInt;
use extremal_core::matrices::MatrixError;
use extremal_core::IntSymMatrix;

#[derive(Debug, thiserror::Error)]
pub enum MatrixIoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Writes any integer matrix given as rows.
pub fn write_rows<W: Write, T: std::fmt::Display>(mut w: W, rows: &[Vec<T>]) -> Result<(), MatrixIoError> {
    writeln!(w, "{}", rows.len())?;
    for r in rows {
        let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
        writeln!(w, "{}", cells.join(" "))?;
    }
    Ok(())
}

pub fn write_matrix<W: Write>(w: W, m: &IntSymMatrix) -> Result<(), MatrixIoError> {
    let rows: Vec<Vec<ExactInt>> = m.rows().map(<[ExactInt]>::to_vec).collect();
    write_rows(w, &rows)
}

pub fn format_rows<T: std::fmt::Display>(rows: &[Vec<T>]) -> String {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Reads a square integer matrix; blank lines are ignored.
pub fn read_rows<R: BufRead>(r: R) -> Result<Vec<Vec<ExactInt>>, MatrixIoError> {
    let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let (first, header) = lines.next().ok_or(MatrixIoError::Parse { line: 1, msg: "empty input".into() })?;
    let header = header?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| MatrixIoError::Parse { line: first, msg: format!("expected dimension, got `{}`", header.trim()) })?;
    let mut rows = Vec::with_capacity(n);
    for (line, text) in lines {
        let text = text?;
        if rows.len() == n {
            return Err(MatrixIoError::Parse { line, msg: "more rows than the stated dimension".into() });
        }
        let row = text
            .split_whitespace()
            .map(|t| t.parse::<ExactInt>().map_err(|_| MatrixIoError::Parse { line, msg: format!("bad integer `{t}`") }))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(MatrixIoError::Parse { line, msg: format!("expected {n} entries, found {}", row.len()) });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(MatrixIoError::Parse { line: first, msg: format!("expected {n} rows, found {}", rows.len()) });
    }
    Ok(rows)
}

/// Reads a symmetric matrix, rejecting asymmetric input.
pub fn read_matrix<R: BufRead>(r: R) -> Result<IntSymMatrix, MatrixIoError> {
    Ok(IntSymMatrix::from_rows(read_rows(r)?)?)
}
