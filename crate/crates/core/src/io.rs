//! Plain-text matrix and vector files.
//!
//! ```text
//! 3 3
//! 1.0 0.0 0.5
//! 0.0 1.0 0.5
//! 0.0 0.0 0.7071067811865476
//! ```
//!
//! The first line holds `rows cols`; every following non-blank line holds
//! one whitespace-separated row. Numbers are written in the shortest decimal
//! form that parses back to the same `f64`. A vector is stored as an `n 1`
//! matrix (a `1 n` file is accepted too).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        for (j, v) in a.row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{v:?}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str, path: &Path) -> Result<DenseMatrix> {
    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing `rows cols` header".into()))?;
    let dims: Vec<(usize, &str)> = tokens(header).collect();
    if dims.len() != 2 {
        return Err(parse_err(
            header_line,
            1,
            format!("header must be `rows cols`, found {} fields", dims.len()),
        ));
    }
    let mut shape = [0usize; 2];
    for (slot, &(col, tok)) in shape.iter_mut().zip(&dims) {
        *slot = tok
            .parse()
            .ok()
            .filter(|&v: &usize| v > 0)
            .ok_or_else(|| parse_err(header_line, col, format!("invalid dimension `{tok}`")))?;
    }
    let [rows, cols] = shape;

    let mut data = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (line_no, line) in lines {
        if seen_rows == rows {
            return Err(parse_err(
                line_no,
                1,
                format!("unexpected data after {rows} rows"),
            ));
        }
        let mut found = 0;
        for (col, tok) in tokens(line) {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, col, format!("invalid number `{tok}`")))?;
            if !v.is_finite() {
                return Err(parse_err(line_no, col, format!("non-finite value `{tok}`")));
            }
            data.push(v);
            found += 1;
        }
        if found != cols {
            return Err(Error::InconsistentRow {
                path: path.to_path_buf(),
                line: line_no,
                expected: cols,
                found,
            });
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(parse_err(
            text.lines().count().max(1),
            1,
            format!("expected {rows} rows, found {seen_rows}"),
        ));
    }
    DenseMatrix::new(rows, cols, data)
}

/// Whitespace-separated tokens with their 1-based column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let column = line[..offset + start].chars().count() + 1;
        let tok = &tail[..len];
        offset += start + len;
        rest = &tail[len..];
        Some((column, tok))
    })
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_matrix(&text, path)
}

pub fn save_matrix(a: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_matrix(a))?;
    Ok(())
}

/// Loads a vector stored as an `n×1` or `1×n` matrix file.
pub fn load_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let m = load_matrix(path)?;
    if m.cols() != 1 && m.rows() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "{}: expected a vector, found a {}x{} matrix",
            path.display(),
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.as_slice().to_vec())
}

pub fn save_vector(v: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let m = DenseMatrix::new(v.len(), 1, v.to_vec())?;
    save_matrix(&m, path)
}
