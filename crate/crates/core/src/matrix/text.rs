//! Plain-text matrix format.
//!
//! A header line names the shape, then one `i j value` triple per line with
//! 1-based indices. Blank lines and `#` comments are ignored.
//!
//! ```text
//! dense ROWS COLS
//! banded N LOWER UPPER
//! arrow N BORDER LOWER UPPER     # N is the core order
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{ArrowMatrix, BandedMatrix, DenseMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFile {
    Dense(DenseMatrix),
    Banded(BandedMatrix),
    Arrow(ArrowMatrix),
}

impl MatrixFile {
    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            MatrixFile::Dense(a) => a.clone(),
            MatrixFile::Banded(b) => b.to_dense(),
            MatrixFile::Arrow(a) => a.to_dense(),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    let kind = toks.next().unwrap_or_default();
    let dims: Vec<usize> = match kind {
        "dense" => vec![
            parse_usize(hline, toks.next(), "rows")?,
            parse_usize(hline, toks.next(), "cols")?,
        ],
        "banded" => vec![
            parse_usize(hline, toks.next(), "order")?,
            parse_usize(hline, toks.next(), "lower bandwidth")?,
            parse_usize(hline, toks.next(), "upper bandwidth")?,
        ],
        "arrow" => vec![
            parse_usize(hline, toks.next(), "core order")?,
            parse_usize(hline, toks.next(), "border")?,
            parse_usize(hline, toks.next(), "lower bandwidth")?,
            parse_usize(hline, toks.next(), "upper bandwidth")?,
        ],
        other => return Err(parse_err(hline, format!("unknown matrix kind '{other}'"))),
    };
    if toks.next().is_some() {
        return Err(parse_err(hline, "trailing tokens in header"));
    }
    let (rows, cols) = match kind {
        "dense" => (dims[0], dims[1]),
        "banded" => (dims[0], dims[0]),
        _ => (dims[0] + dims[1], dims[0] + dims[1]),
    };
    let mut dense = DenseMatrix::zeros(rows, cols);
    let mut seen = HashSet::new();
    for (ln, line) in lines {
        let mut t = line.split_whitespace();
        let i = parse_usize(ln, t.next(), "row index")?;
        let j = parse_usize(ln, t.next(), "column index")?;
        let v: f64 = t
            .next()
            .ok_or_else(|| parse_err(ln, "missing value"))?
            .parse()
            .map_err(|_| parse_err(ln, "bad value"))?;
        if t.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(parse_err(ln, format!("index ({i}, {j}) out of range")));
        }
        if !v.is_finite() {
            return Err(parse_err(ln, "non-finite value"));
        }
        if !seen.insert((i, j)) {
            return Err(parse_err(ln, format!("duplicate entry ({i}, {j})")));
        }
        dense[(i - 1, j - 1)] = v;
    }
    let wrap = |e: Error| match e {
        Error::OutsideBand { row, col } => parse_err(
            hline,
            format!(
                "entry ({}, {}) lies outside the declared band",
                row + 1,
                col + 1
            ),
        ),
        other => other,
    };
    Ok(match kind {
        "dense" => MatrixFile::Dense(dense),
        "banded" => {
            MatrixFile::Banded(BandedMatrix::from_dense(&dense, dims[1], dims[2]).map_err(wrap)?)
        }
        _ => MatrixFile::Arrow(
            ArrowMatrix::from_dense(&dense, dims[0], dims[2], dims[3]).map_err(wrap)?,
        ),
    })
}

/// Reads a vector written one value per line (or whitespace separated).
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(ln, format!("bad value '{tok}'")))?;
            if !v.is_finite() {
                return Err(parse_err(ln, "non-finite value"));
            }
            out.push(v);
        }
    }
    Ok(out)
}

fn write_entries(out: &mut String, a: &DenseMatrix) {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let v = a[(i, j)];
            if v != 0.0 {
                let _ = writeln!(out, "{} {} {:e}", i + 1, j + 1, v);
            }
        }
    }
}

pub fn write_matrix(m: &MatrixFile) -> String {
    let mut out = String::new();
    match m {
        MatrixFile::Dense(a) => {
            let _ = writeln!(out, "dense {} {}", a.rows(), a.cols());
        }
        MatrixFile::Banded(b) => {
            let _ = writeln!(out, "banded {} {} {}", b.order(), b.lower(), b.upper());
        }
        MatrixFile::Arrow(a) => {
            let _ = writeln!(
                out,
                "arrow {} {} {} {}",
                a.core_order(),
                a.border(),
                a.lower(),
                a.upper()
            );
        }
    }
    write_entries(&mut out, &m.to_dense());
    out
}

pub fn write_vector(x: &[f64]) -> String {
    let mut out = String::new();
    for v in x {
        let _ = writeln!(out, "{v:e}");
    }
    out
}
