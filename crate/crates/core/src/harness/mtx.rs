//! Matrix Market reader and writer for dense complex matrices.
//!
//! Reads `coordinate` and `array` layouts with `real`, `integer`, `complex`
//! or `pattern` fields and `general`, `symmetric`, `hermitian` or
//! `skew-symmetric` storage. Writes `array` layout, `real` when every
//! imaginary part is zero and `complex` otherwise.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
    Skew,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(Layout, Field, Symmetry)> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(lineno, "expected `%%MatrixMarket matrix <layout> <field> <symmetry>`"));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(parse_err(lineno, format!("unknown layout `{other}`"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        "pattern" => Field::Pattern,
        other => return Err(parse_err(lineno, format!("unknown field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(parse_err(lineno, format!("unknown symmetry `{other}`"))),
    };
    if layout == Layout::Array && field == Field::Pattern {
        return Err(parse_err(lineno, "pattern field requires coordinate layout"));
    }
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(parse_err(lineno, "hermitian symmetry requires a complex field"));
    }
    Ok((layout, field, symmetry))
}

fn number(tok: Option<&str>, lineno: usize) -> Result<f64> {
    let tok = tok.ok_or_else(|| parse_err(lineno, "missing value"))?;
    tok.parse::<f64>()
        .map_err(|_| parse_err(lineno, format!("invalid number `{tok}`")))
}

fn index(tok: Option<&str>, bound: usize, lineno: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(lineno, "missing index"))?;
    let i: usize = tok
        .parse()
        .map_err(|_| parse_err(lineno, format!("invalid index `{tok}`")))?;
    if i == 0 || i > bound {
        return Err(parse_err(lineno, format!("index {i} outside 1..={bound}")));
    }
    Ok(i - 1)
}

fn value<'a>(tokens: &mut impl Iterator<Item = &'a str>, field: Field, lineno: usize) -> Result<c64> {
    Ok(match field {
        Field::Pattern => c64::new(1.0, 0.0),
        Field::Real | Field::Integer => c64::new(number(tokens.next(), lineno)?, 0.0),
        Field::Complex => {
            let re = number(tokens.next(), lineno)?;
            c64::new(re, number(tokens.next(), lineno)?)
        }
    })
}

fn mirror(m: &mut ComplexMatrix, i: usize, j: usize, v: c64, symmetry: Symmetry) {
    m[(i, j)] = v;
    if i != j {
        m[(j, i)] = match symmetry {
            Symmetry::General => return,
            Symmetry::Symmetric => v,
            Symmetry::Hermitian => v.conj(),
            Symmetry::Skew => -v,
        };
    }
}

pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<ComplexMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (layout, field, symmetry) = parse_header(&header?, lineno)?;

    // Remaining non-comment, non-blank lines.
    let mut body = lines.filter_map(|(n, l)| match l {
        Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('%') => None,
        other => Some((n, other)),
    });

    let (size_line, size) = body.next().ok_or_else(|| parse_err(lineno + 1, "missing size line"))?;
    let size = size?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_line, format!("invalid size `{t}`"))))
        .collect::<Result<_>>()?;
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(parse_err(size_line, format!("size line needs {expected} integers")));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(size_line, "symmetric storage requires a square matrix"));
    }
    let mut m = Mat::<c64>::zeros(rows, cols);
    let mut last = size_line;

    match layout {
        Layout::Coordinate => {
            let nnz = dims[2];
            for k in 0..nnz {
                let (n, line) = body
                    .next()
                    .ok_or_else(|| parse_err(last + 1, format!("expected {nnz} entries, found {k}")))?;
                let line = line?;
                let mut t = line.split_whitespace();
                let i = index(t.next(), rows, n)?;
                let j = index(t.next(), cols, n)?;
                let v = value(&mut t, field, n)?;
                if t.next().is_some() {
                    return Err(parse_err(n, "trailing tokens"));
                }
                if symmetry != Symmetry::General && i < j {
                    return Err(parse_err(n, "symmetric storage lists only the lower triangle"));
                }
                mirror(&mut m, i, j, v, symmetry);
                last = n;
            }
        }
        Layout::Array => {
            // Column-major; symmetric storage lists the lower triangle only,
            // skew-symmetric additionally omits the diagonal.
            for j in 0..cols {
                let start = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::Skew => j + 1,
                    _ => j,
                };
                for i in start..rows {
                    let (n, line) = body
                        .next()
                        .ok_or_else(|| parse_err(last + 1, "too few array entries"))?;
                    let line = line?;
                    let mut t = line.split_whitespace();
                    let v = value(&mut t, field, n)?;
                    if t.next().is_some() {
                        return Err(parse_err(n, "trailing tokens"));
                    }
                    mirror(&mut m, i, j, v, symmetry);
                    last = n;
                }
            }
        }
    }
    if let Some((n, _)) = body.next() {
        return Err(parse_err(n, "unexpected data after the last entry"));
    }
    crate::linalg::require_finite(m.as_ref(), "Matrix Market entries")?;
    Ok(m)
}

pub fn read_path(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    read_matrix_market(BufReader::new(File::open(path)?))
}

pub fn write_matrix_market<W: Write>(mut w: W, m: MatRef<'_, c64>) -> Result<()> {
    let complex = (0..m.ncols()).any(|j| (0..m.nrows()).any(|i| m[(i, j)].im != 0.0));
    let field = if complex { "complex" } else { "real" };
    writeln!(w, "%%MatrixMarket matrix array {field} general")?;
    writeln!(w, "{} {}", m.nrows(), m.ncols())?;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            // `{:e}` prints the shortest representation that round-trips.
            if complex {
                writeln!(w, "{:e} {:e}", z.re, z.im)?;
            } else {
                writeln!(w, "{:e}", z.re)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_path(path: impl AsRef<Path>, m: MatRef<'_, c64>) -> Result<()> {
    write_matrix_market(BufWriter::new(File::create(path)?), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real_rows;

    fn read(s: &str) -> Result<ComplexMatrix> {
        read_matrix_market(s.as_bytes())
    }

    #[test]
    fn coordinate_real_general() {
        let m = read("%%MatrixMarket matrix coordinate real general\n% comment\n2 3 2\n1 1 1.5\n2 3 -2\n").unwrap();
        assert_eq!((m.nrows(), m.ncols()), (2, 3));
        assert_eq!(m[(0, 0)], c64::new(1.5, 0.0));
        assert_eq!(m[(1, 2)], c64::new(-2.0, 0.0));
        assert_eq!(m[(0, 1)], c64::new(0.0, 0.0));
    }

    #[test]
    fn coordinate_hermitian_mirrors_conjugate() {
        let m = read("%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 2 0\n2 1 1 3\n").unwrap();
        assert_eq!(m[(1, 0)], c64::new(1.0, 3.0));
        assert_eq!(m[(0, 1)], c64::new(1.0, -3.0));
    }

    #[test]
    fn array_skew_and_symmetric() {
        let skew = read("%%MatrixMarket matrix array real skew-symmetric\n2 2\n4\n").unwrap();
        assert_eq!(skew[(1, 0)], c64::new(4.0, 0.0));
        assert_eq!(skew[(0, 1)], c64::new(-4.0, 0.0));
        let sym = read("%%MatrixMarket matrix array integer symmetric\n2 2\n1\n2\n3\n").unwrap();
        assert_eq!(sym[(0, 1)], c64::new(2.0, 0.0));
        assert_eq!(sym[(1, 1)], c64::new(3.0, 0.0));
    }

    #[test]
    fn pattern_entries_are_one() {
        let m = read("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n2 1\n").unwrap();
        assert_eq!(m[(1, 0)], c64::new(1.0, 0.0));
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let cases = [
            ("", 1),
            ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n", 3),
            ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n", 4),
            ("%%MatrixMarket matrix array real general\n2 1\n1\nx\n", 4),
            ("%%MatrixMarket matrix blob real general\n", 1),
            ("%%MatrixMarket matrix array real general\n1 1\n1\n2\n", 4),
        ];
        for (text, line) in cases {
            match read(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn round_trip_real_and_complex() {
        let real = from_real_rows(&[[1.0 / 3.0, -2.5e-17], [7.0, 1e300]]);
        let mut buf = Vec::new();
        write_matrix_market(&mut buf, real.as_ref()).unwrap();
        assert!(String::from_utf8_lossy(&buf).contains("array real"));
        assert_eq!(read_matrix_market(buf.as_slice()).unwrap(), real);

        let mut z = real.clone();
        z[(0, 1)] = c64::new(0.1, -1.0 / 7.0);
        let mut buf = Vec::new();
        write_matrix_market(&mut buf, z.as_ref()).unwrap();
        assert_eq!(read_matrix_market(buf.as_slice()).unwrap(), z);
    }
}
