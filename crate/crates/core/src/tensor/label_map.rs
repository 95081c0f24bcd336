//! Integer superpixel label maps and their text encoding.
//!
//! Text format:
//!
//! ```text
//! <rows> <cols>\n
//! <label> <label> ... <label>\n      (rows lines of cols labels)
//! ```
//!
//! Tokens are ASCII decimal, separated by a single space, lines end with `\n`.
//! The trailing newline after the last row is optional.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::ShapeError;

/// Superpixel serial number. Labels are opaque identifiers: they need not
/// be contiguous or start at zero.
pub type Label = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelMap {
    rows: usize,
    cols: usize,
    data: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelMapParseError {
    #[error("malformed header on line 1: {0}")]
    MalformedHeader(String),
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("invalid token {token:?} at ({row},{col})")]
    InvalidToken { row: usize, col: usize, token: String },
    #[error("negative label at ({row},{col})")]
    NegativeLabel { row: usize, col: usize },
    #[error("label at ({row},{col}) exceeds {}", Label::MAX)]
    LabelOverflow { row: usize, col: usize },
    #[error("row {row} has {found} labels, expected {expected}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

impl LabelMap {
    pub fn new(rows: usize, cols: usize, data: Vec<Label>) -> Result<Self, ShapeError> {
        if rows == 0 || cols == 0 {
            return Err(ShapeError::Empty { rows, cols });
        }
        let expected =
            rows.checked_mul(cols).filter(|&n| n <= u32::MAX as usize).ok_or(ShapeError::TooLarge { rows, cols })?;
        if data.len() != expected {
            return Err(ShapeError::Length { expected, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a map from nested rows. Panics on ragged or empty input; meant for
    /// literals in tests and examples.
    pub fn from_rows<R: AsRef<[Label]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(rows.len(), cols, data).expect("invalid label map literal")
    }

    pub fn filled(rows: usize, cols: usize, label: Label) -> Result<Self, ShapeError> {
        Self::new(rows, cols, vec![label; rows.saturating_mul(cols)])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Label {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn as_slice(&self) -> &[Label] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Label> {
        self.data
    }

    pub fn row(&self, row: usize) -> &[Label] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// Distinct labels present in the map.
    pub fn distinct_labels(&self) -> BTreeSet<Label> {
        self.data.iter().copied().collect()
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, LabelMapParseError> {
        let text = std::str::from_utf8(bytes).map_err(|_| LabelMapParseError::NotUtf8)?;
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut lines = body.split('\n');

        let header = lines.next().unwrap_or("");
        let (rows, cols) = parse_header(header)?;
        let total =
            rows.checked_mul(cols).filter(|&n| n <= u32::MAX as usize).ok_or(ShapeError::TooLarge { rows, cols })?;

        let mut data = Vec::with_capacity(total);
        let mut seen_rows = 0;
        for (row, line) in lines.enumerate() {
            if row >= rows {
                return Err(LabelMapParseError::RowCount { expected: rows, found: row + 1 });
            }
            let mut found = 0;
            for (col, token) in line.split(' ').enumerate() {
                if col < cols {
                    data.push(parse_label(token, row, col)?);
                }
                found += 1;
            }
            if found != cols {
                return Err(LabelMapParseError::RowLength { row, expected: cols, found });
            }
            seen_rows += 1;
        }
        if seen_rows != rows {
            return Err(LabelMapParseError::RowCount { expected: rows, found: seen_rows });
        }
        Ok(Self::new(rows, cols, data)?)
    }

    /// Canonical text encoding; always ends with a newline.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.data.len() * 3 + 16);
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for r in 0..self.rows {
            let mut first = true;
            for &v in self.row(r) {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }
}

fn parse_header(line: &str) -> Result<(usize, usize), LabelMapParseError> {
    let malformed = || LabelMapParseError::MalformedHeader(line.to_string());
    let mut parts = line.split(' ');
    let (Some(r), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(malformed());
    };
    let parse = |s: &str| -> Result<usize, LabelMapParseError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        s.parse().map_err(|_| malformed())
    };
    Ok((parse(r)?, parse(c)?))
}

fn parse_label(token: &str, row: usize, col: usize) -> Result<Label, LabelMapParseError> {
    let digits = match token.strip_prefix('-') {
        Some(rest) => {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(LabelMapParseError::NegativeLabel { row, col });
            }
            token
        }
        None => token,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(LabelMapParseError::InvalidToken { row, col, token: token.to_string() });
    }
    digits.parse::<Label>().map_err(|_| LabelMapParseError::LabelOverflow { row, col })
}

/// Parses the label-map text format.
pub fn read_label_map(bytes: &[u8]) -> Result<LabelMap, LabelMapParseError> {
    LabelMap::parse(bytes)
}

pub fn write_label_map(map: &LabelMap) -> Vec<u8> {
    map.to_text().into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_grid() {
        let m = read_label_map(b"2 2\n0 0\n0 7\n").unwrap();
        assert_eq!(m, LabelMap::new(2, 2, vec![0, 0, 0, 7]).unwrap());
    }

    #[test]
    fn parses_minimal_map_without_trailing_newline() {
        assert_eq!(read_label_map(b"1 1\n5\n").unwrap().as_slice(), &[5]);
        assert_eq!(read_label_map(b"1 1\n5").unwrap().as_slice(), &[5]);
    }

    #[test]
    fn negative_label_reports_position() {
        let err = read_label_map(b"2 2\n0 -1\n0 0\n").unwrap_err();
        assert_eq!(err, LabelMapParseError::NegativeLabel { row: 0, col: 1 });
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(read_label_map(b"2x2\n0 0\n0 0\n"), Err(LabelMapParseError::MalformedHeader(_))));
        assert!(matches!(read_label_map(b"0 3\n"), Err(LabelMapParseError::Shape(ShapeError::Empty { .. }))));
        assert_eq!(
            read_label_map(b"2 2\n0 0\n0 a\n").unwrap_err(),
            LabelMapParseError::InvalidToken { row: 1, col: 1, token: "a".into() }
        );
        assert_eq!(
            read_label_map(b"2 2\n0 0\n0\n").unwrap_err(),
            LabelMapParseError::RowLength { row: 1, expected: 2, found: 1 }
        );
        assert_eq!(read_label_map(b"2 2\n0 0\n").unwrap_err(), LabelMapParseError::RowCount { expected: 2, found: 1 });
        assert_eq!(
            read_label_map(b"1 2\n0 0\n1 1\n").unwrap_err(),
            LabelMapParseError::RowCount { expected: 1, found: 2 }
        );
        assert_eq!(
            read_label_map(b"1 1\n4294967296\n").unwrap_err(),
            LabelMapParseError::LabelOverflow { row: 0, col: 0 }
        );
        // double space yields an empty token
        assert!(matches!(read_label_map(b"1 2\n0  1\n"), Err(LabelMapParseError::InvalidToken { row: 0, col: 1, .. })));
    }

    #[test]
    fn labels_are_not_renumbered() {
        let m = read_label_map(b"1 3\n9 4000000000 2\n").unwrap();
        assert_eq!(m.as_slice(), &[9, 4_000_000_000, 2]);
        assert_eq!(write_label_map(&m), b"1 3\n9 4000000000 2\n");
    }
}
