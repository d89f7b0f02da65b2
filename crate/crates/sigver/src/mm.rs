//! Matrix Market reader and writer (coordinate and array layouts, real,
//! integer and complex fields, general/symmetric/skew-symmetric/hermitian).
//!
//! Values are written with Rust's shortest round-trip formatting, so a
//! write followed by a read reproduces every binary64 bit pattern.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::dense::DenseMatrix;
use crate::ivlinalg::{ComplexIntervalMatrix, IntervalMatrix, IvLinalgError, Structure};

#[derive(Debug, Error)]
pub enum MmError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is not square, cannot carry a {0} header")]
    NotSquare(&'static str),
    #[error(transparent)]
    Linalg(#[from] IvLinalgError),
}

fn perr(line: usize, msg: impl Into<String>) -> MmError {
    MmError::Parse { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

impl MmSymmetry {
    fn keyword(self) -> &'static str {
        match self {
            MmSymmetry::General => "general",
            MmSymmetry::Symmetric => "symmetric",
            MmSymmetry::SkewSymmetric => "skew-symmetric",
            MmSymmetry::Hermitian => "hermitian",
        }
    }
}

/// A dense matrix as stored in a Matrix Market file; `im` is present for
/// the complex field.
#[derive(Debug, Clone, PartialEq)]
pub struct MmMatrix {
    pub re: DenseMatrix,
    pub im: Option<DenseMatrix>,
    pub symmetry: MmSymmetry,
}

impl MmMatrix {
    pub fn real(re: DenseMatrix, symmetry: MmSymmetry) -> Self {
        Self { re, im: None, symmetry }
    }

    pub fn complex(re: DenseMatrix, im: DenseMatrix, symmetry: MmSymmetry) -> Self {
        Self { re, im: Some(im), symmetry }
    }

    pub fn is_complex(&self) -> bool {
        self.im.is_some()
    }

    /// Whether the header promises a Hermitian (real symmetric) matrix.
    pub fn is_hermitian(&self) -> bool {
        match self.symmetry {
            MmSymmetry::Hermitian => true,
            MmSymmetry::Symmetric => self.im.is_none(),
            _ => false,
        }
    }

    /// Point interval matrix; symmetric headers set the Hermitian flag.
    pub fn to_interval(&self) -> Result<IntervalMatrix, MmError> {
        let m = IntervalMatrix::from_point(self.re.clone());
        Ok(if self.is_hermitian() { m.with_structure(Structure::Hermitian)? } else { m })
    }

    pub fn to_complex_interval(&self) -> Result<ComplexIntervalMatrix, MmError> {
        let (r, c) = self.re.shape();
        let im = self.im.clone().unwrap_or_else(|| DenseMatrix::zeros(r, c));
        let m = ComplexIntervalMatrix::from_point(self.re.clone(), im)?;
        Ok(if self.is_hermitian() { m.with_hermitian()? } else { m })
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Integer,
    Complex,
    Pattern,
}

struct Header {
    format: MmFormat,
    field: Field,
    symmetry: MmSymmetry,
}

fn parse_header(line: &str) -> Result<Header, MmError> {
    let toks: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(perr(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    let format = match toks[2].as_str() {
        "coordinate" => MmFormat::Coordinate,
        "array" => MmFormat::Array,
        f => return Err(perr(1, format!("unknown format '{f}'"))),
    };
    let field = match toks[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        "pattern" => Field::Pattern,
        f => return Err(perr(1, format!("unknown field '{f}'"))),
    };
    let symmetry = match toks[4].as_str() {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        "skew-symmetric" => MmSymmetry::SkewSymmetric,
        "hermitian" => MmSymmetry::Hermitian,
        s => return Err(perr(1, format!("unknown symmetry '{s}'"))),
    };
    if format == MmFormat::Array && field == Field::Pattern {
        return Err(perr(1, "pattern field requires coordinate format"));
    }
    if symmetry == MmSymmetry::Hermitian && field != Field::Complex {
        return Err(perr(1, "hermitian symmetry requires the complex field"));
    }
    Ok(Header { format, field, symmetry })
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, MmError> {
    let t = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    t.parse().map_err(|_| perr(line, format!("invalid {what} '{t}'")))
}

/// Parses Matrix Market text into a dense matrix, expanding symmetric storage.
pub fn parse_matrix_market(text: &str) -> Result<MmMatrix, MmError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let h = parse_header(first)?;
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sl, size) = body.next().ok_or_else(|| perr(2, "missing size line"))?;
    let mut st = size.split_whitespace();
    let rows: usize = num(st.next(), sl, "row count")?;
    let cols: usize = num(st.next(), sl, "column count")?;
    let nnz: usize = match h.format {
        MmFormat::Coordinate => num(st.next(), sl, "entry count")?,
        MmFormat::Array => 0,
    };
    if st.next().is_some() {
        return Err(perr(sl, "trailing tokens on size line"));
    }
    if h.symmetry != MmSymmetry::General && rows != cols {
        return Err(perr(sl, "symmetric storage needs a square matrix"));
    }
    let complex = h.field == Field::Complex;
    let mut re = DenseMatrix::zeros(rows, cols);
    let mut im = DenseMatrix::zeros(rows, cols);
    let read_value = |toks: &mut std::str::SplitWhitespace<'_>, ln: usize| -> Result<(f64, f64), MmError> {
        Ok(match h.field {
            Field::Pattern => (1.0, 0.0),
            Field::Complex => (num(toks.next(), ln, "real part")?, num(toks.next(), ln, "imaginary part")?),
            Field::Integer => (num::<i64>(toks.next(), ln, "integer value")? as f64, 0.0),
            Field::Real => (num(toks.next(), ln, "value")?, 0.0),
        })
    };
    let mut place = |i: usize, j: usize, v: (f64, f64), ln: usize| -> Result<(), MmError> {
        if i >= rows || j >= cols {
            return Err(perr(ln, format!("index ({}, {}) out of range", i + 1, j + 1)));
        }
        if h.symmetry != MmSymmetry::General && j > i {
            return Err(perr(ln, "entry above the diagonal in symmetric storage"));
        }
        re[(i, j)] = v.0;
        im[(i, j)] = v.1;
        if i != j {
            match h.symmetry {
                MmSymmetry::General => {}
                MmSymmetry::Symmetric => {
                    re[(j, i)] = v.0;
                    im[(j, i)] = v.1;
                }
                MmSymmetry::SkewSymmetric => {
                    re[(j, i)] = -v.0;
                    im[(j, i)] = -v.1;
                }
                MmSymmetry::Hermitian => {
                    re[(j, i)] = v.0;
                    im[(j, i)] = -v.1;
                }
            }
        } else if h.symmetry == MmSymmetry::SkewSymmetric {
            return Err(perr(ln, "diagonal entry in skew-symmetric storage"));
        }
        Ok(())
    };
    match h.format {
        MmFormat::Coordinate => {
            let mut seen = 0;
            for (ln, l) in body {
                if seen == nnz {
                    return Err(perr(ln, "more entries than declared"));
                }
                let mut t = l.split_whitespace();
                let i: usize = num(t.next(), ln, "row index")?;
                let j: usize = num(t.next(), ln, "column index")?;
                if i == 0 || j == 0 {
                    return Err(perr(ln, "indices are 1-based"));
                }
                let v = read_value(&mut t, ln)?;
                if t.next().is_some() {
                    return Err(perr(ln, "trailing tokens"));
                }
                place(i - 1, j - 1, v, ln)?;
                seen += 1;
            }
            if seen != nnz {
                return Err(perr(sl, format!("declared {nnz} entries, found {seen}")));
            }
        }
        MmFormat::Array => {
            // column-major; symmetric kinds store the lower triangle only
            let mut slots = Vec::new();
            for j in 0..cols {
                let start = match h.symmetry {
                    MmSymmetry::General => 0,
                    MmSymmetry::SkewSymmetric => j + 1,
                    _ => j,
                };
                for i in start..rows {
                    slots.push((i, j));
                }
            }
            let mut it = slots.into_iter();
            let mut last = sl;
            for (ln, l) in body {
                last = ln;
                let mut t = l.split_whitespace();
                let v = read_value(&mut t, ln)?;
                if t.next().is_some() {
                    return Err(perr(ln, "trailing tokens"));
                }
                let (i, j) = it.next().ok_or_else(|| perr(ln, "more values than the matrix holds"))?;
                place(i, j, v, ln)?;
            }
            if it.next().is_some() {
                return Err(perr(last, "fewer values than the matrix holds"));
            }
        }
    }
    Ok(MmMatrix {
        re,
        im: complex.then_some(im),
        symmetry: h.symmetry,
    })
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MmMatrix, MmError> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

/// Serializes `m`. Symmetric kinds store the lower triangle; coordinate
/// output lists nonzeros only.
pub fn format_matrix_market(m: &MmMatrix, format: MmFormat) -> Result<String, MmError> {
    let (rows, cols) = m.re.shape();
    if m.symmetry != MmSymmetry::General && rows != cols {
        return Err(MmError::NotSquare(m.symmetry.keyword()));
    }
    let field = if m.is_complex() { "complex" } else { "real" };
    let fmt_name = match format {
        MmFormat::Coordinate => "coordinate",
        MmFormat::Array => "array",
    };
    let mut out = format!("%%MatrixMarket matrix {fmt_name} {field} {}\n", m.symmetry.keyword());
    let value = |i: usize, j: usize| -> String {
        match &m.im {
            Some(im) => format!("{:e} {:e}", m.re[(i, j)], im[(i, j)]),
            None => format!("{:e}", m.re[(i, j)]),
        }
    };
    let keep = |i: usize, j: usize| -> bool {
        match m.symmetry {
            MmSymmetry::General => true,
            MmSymmetry::SkewSymmetric => i > j,
            _ => i >= j,
        }
    };
    let mut entries = Vec::new();
    for j in 0..cols {
        for i in 0..rows {
            if !keep(i, j) {
                continue;
            }
            if format == MmFormat::Coordinate {
                let zero = m.re[(i, j)] == 0.0 && m.re[(i, j)].is_sign_positive()
                    && m.im.as_ref().is_none_or(|im| im[(i, j)] == 0.0 && im[(i, j)].is_sign_positive());
                if zero {
                    continue;
                }
            }
            entries.push((i, j));
        }
    }
    match format {
        MmFormat::Coordinate => {
            let _ = writeln!(out, "{rows} {cols} {}", entries.len());
            for (i, j) in entries {
                let _ = writeln!(out, "{} {} {}", i + 1, j + 1, value(i, j));
            }
        }
        MmFormat::Array => {
            let _ = writeln!(out, "{rows} {cols}");
            for (i, j) in entries {
                let _ = writeln!(out, "{}", value(i, j));
            }
        }
    }
    Ok(out)
}

pub fn write_matrix_market(m: &MmMatrix, path: impl AsRef<Path>, format: MmFormat) -> Result<(), MmError> {
    fs::write(path, format_matrix_market(m, format)?)?;
    Ok(())
}
