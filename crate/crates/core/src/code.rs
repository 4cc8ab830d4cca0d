//! Sparse binary parity-check matrices and the alist exchange format.
//!
//! An alist file lists, one item per line:
//!
//! ```text
//! n m
//! max_column_degree max_row_degree
//! column degrees (n numbers)
//! row degrees (m numbers)
//! n lines: 1-based row indices of each column (0 = padding)
//! m lines: 1-based column indices of each row (0 = padding)
//! ```

use std::fmt::Write as _;

use thiserror::Error;

/// Why a parity-check matrix could not be built or parsed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlistError {
    #[error("empty alist input")]
    Empty,
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: expected an unsigned integer, found `{token}`")]
    BadNumber { line: usize, token: String },
    #[error("unexpected end of input while reading {what}")]
    UnexpectedEof { what: String },
    #[error("line {line}: index {index} out of range 1..={bound}")]
    IndexOutOfRange { line: usize, index: usize, bound: usize },
    #[error("line {line}: inconsistent degrees: {reason}")]
    InconsistentDegrees { line: usize, reason: String },
    #[error("row {row} has degree {degree}; every check needs degree >= 2")]
    RowDegreeTooSmall { row: usize, degree: usize },
    #[error("row and column lists are not transposes of each other: {reason}")]
    NotTransposed { reason: String },
}

/// A binary `m x n` parity-check matrix stored as row and column index lists
/// (0-based, strictly increasing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds the matrix from its rows; each row lists the 0-based columns
    /// holding a one.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self, AlistError> {
        let mut cols = vec![Vec::new(); n];
        let mut sorted_rows = Vec::with_capacity(rows.len());
        for (j, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(AlistError::InconsistentDegrees {
                    line: 0,
                    reason: format!("row {} repeats a column", j + 1),
                });
            }
            if let Some(&bad) = row.iter().find(|&&i| i >= n) {
                return Err(AlistError::IndexOutOfRange {
                    line: 0,
                    index: bad + 1,
                    bound: n,
                });
            }
            if row.len() < 2 {
                return Err(AlistError::RowDegreeTooSmall {
                    row: j + 1,
                    degree: row.len(),
                });
            }
            for &i in &row {
                cols[i].push(j);
            }
            sorted_rows.push(row);
        }
        Ok(ParityCheckMatrix {
            n,
            rows: sorted_rows,
            cols,
        })
    }

    /// Builds the matrix from a dense 0/1 row-major table.
    pub fn from_dense(dense: &[&[u8]]) -> Result<Self, AlistError> {
        let n = dense.first().map_or(0, |r| r.len());
        let rows = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i).collect())
            .collect();
        Self::from_rows(n, rows)
    }

    /// Number of checks.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Columns participating in check `j`.
    pub fn row(&self, j: usize) -> &[usize] {
        &self.rows[j]
    }

    /// Checks containing variable `i`.
    pub fn col(&self, i: usize) -> &[usize] {
        &self.cols[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn max_row_degree(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_degree(&self) -> usize {
        self.cols.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether every check is satisfied by the binary word `word`.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        assert_eq!(word.len(), self.n, "word length must equal n");
        self.rows
            .iter()
            .all(|row| row.iter().map(|&i| word[i] & 1).fold(0, |a, b| a ^ b) == 0)
    }

    /// All codewords, by enumeration of the `2^n` binary words.
    ///
    /// # Panics
    ///
    /// If `n > 24`.
    pub fn codewords_brute_force(&self) -> Vec<Vec<u8>> {
        assert!(self.n <= 24, "brute-force enumeration limited to n <= 24");
        (0u32..(1 << self.n))
            .map(|bits| (0..self.n).map(|i| ((bits >> i) & 1) as u8).collect::<Vec<u8>>())
            .filter(|w| self.is_codeword(w))
            .collect()
    }

    /// Serialises to alist text, padding index lines with zeros.
    pub fn to_alist(&self) -> String {
        let mut out = String::new();
        let (cmax, rmax) = (self.max_col_degree(), self.max_row_degree());
        let join = |v: &mut String, items: &mut dyn Iterator<Item = usize>| {
            let line: Vec<String> = items.map(|x| x.to_string()).collect();
            let _ = writeln!(v, "{}", line.join(" "));
        };
        let _ = writeln!(out, "{} {}", self.n, self.m());
        let _ = writeln!(out, "{} {}", cmax, rmax);
        join(&mut out, &mut self.cols.iter().map(Vec::len));
        join(&mut out, &mut self.rows.iter().map(Vec::len));
        for col in &self.cols {
            join(
                &mut out,
                &mut col.iter().map(|&j| j + 1).chain(std::iter::repeat_n(0, cmax - col.len())),
            );
        }
        for row in &self.rows {
            join(
                &mut out,
                &mut row.iter().map(|&i| i + 1).chain(std::iter::repeat_n(0, rmax - row.len())),
            );
        }
        out
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next nonblank line as (1-based line number, numbers).
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), AlistError> {
        for (idx, line) in self.inner.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| AlistError::BadNumber {
                        line: idx + 1,
                        token: tok.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((idx + 1, nums));
        }
        Err(AlistError::UnexpectedEof { what: what.to_string() })
    }
}

fn index_list(line: usize, nums: &[usize], degree: usize, bound: usize) -> Result<Vec<usize>, AlistError> {
    let (entries, padding) = nums.split_at(nums.iter().position(|&v| v == 0).unwrap_or(nums.len()));
    if padding.iter().any(|&v| v != 0) {
        return Err(AlistError::InconsistentDegrees {
            line,
            reason: "nonzero index after zero padding".into(),
        });
    }
    if entries.len() != degree {
        return Err(AlistError::InconsistentDegrees {
            line,
            reason: format!("declared degree {degree}, found {} indices", entries.len()),
        });
    }
    if let Some(&bad) = entries.iter().find(|&&v| v > bound) {
        return Err(AlistError::IndexOutOfRange { line, index: bad, bound });
    }
    let mut out: Vec<usize> = entries.iter().map(|&v| v - 1).collect();
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(AlistError::InconsistentDegrees {
            line,
            reason: "repeated index".into(),
        });
    }
    Ok(out)
}

/// Parses alist text.
pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix, AlistError> {
    if text.trim().is_empty() {
        return Err(AlistError::Empty);
    }
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (line, dims) = lines.next_numbers("dimensions")?;
    let &[n, m] = dims.as_slice() else {
        return Err(AlistError::MalformedHeader {
            line,
            reason: format!("expected `n m`, found {} numbers", dims.len()),
        });
    };
    if n == 0 || m == 0 {
        return Err(AlistError::MalformedHeader {
            line,
            reason: "dimensions must be positive".into(),
        });
    }
    let (line, maxima) = lines.next_numbers("maximum degrees")?;
    let &[cmax, rmax] = maxima.as_slice() else {
        return Err(AlistError::MalformedHeader {
            line,
            reason: format!("expected maximum degrees, found {} numbers", maxima.len()),
        });
    };
    let (line, col_deg) = lines.next_numbers("column degrees")?;
    if col_deg.len() != n {
        return Err(AlistError::MalformedHeader {
            line,
            reason: format!("expected {n} column degrees, found {}", col_deg.len()),
        });
    }
    if col_deg.iter().max() != Some(&cmax) {
        return Err(AlistError::InconsistentDegrees {
            line,
            reason: format!("maximum column degree is not {cmax}"),
        });
    }
    let (line, row_deg) = lines.next_numbers("row degrees")?;
    if row_deg.len() != m {
        return Err(AlistError::MalformedHeader {
            line,
            reason: format!("expected {m} row degrees, found {}", row_deg.len()),
        });
    }
    if row_deg.iter().max() != Some(&rmax) {
        return Err(AlistError::InconsistentDegrees {
            line,
            reason: format!("maximum row degree is not {rmax}"),
        });
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(AlistError::InconsistentDegrees {
            line,
            reason: "column and row degrees count different numbers of ones".into(),
        });
    }

    let mut cols = Vec::with_capacity(n);
    for (i, &deg) in col_deg.iter().enumerate() {
        let (line, nums) = lines.next_numbers(&format!("column {}", i + 1))?;
        cols.push(index_list(line, &nums, deg, m)?);
    }
    let mut rows = Vec::with_capacity(m);
    for (j, &deg) in row_deg.iter().enumerate() {
        let (line, nums) = lines.next_numbers(&format!("row {}", j + 1))?;
        rows.push(index_list(line, &nums, deg, n)?);
    }

    let h = ParityCheckMatrix::from_rows(n, rows)?;
    if h.cols != cols {
        let i = (0..n).find(|&i| h.cols[i] != cols[i]).unwrap_or(0);
        return Err(AlistError::NotTransposed {
            reason: format!("column {} disagrees with the row lists", i + 1),
        });
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let h = parse_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 3\n").unwrap();
        assert_eq!((h.m(), h.n()), (1, 3));
        assert_eq!(h.row(0), &[0, 1, 2]);
        assert_eq!(h.to_alist(), "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 3\n");
    }

    #[test]
    fn error_variants() {
        assert_eq!(parse_alist(""), Err(AlistError::Empty));
        assert_eq!(parse_alist("  \n\n"), Err(AlistError::Empty));
        assert!(matches!(parse_alist("3\n"), Err(AlistError::MalformedHeader { line: 1, .. })));
        assert!(matches!(parse_alist("3 x\n"), Err(AlistError::BadNumber { line: 1, .. })));
        assert!(matches!(
            parse_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 4\n"),
            Err(AlistError::IndexOutOfRange { line: 8, index: 4, bound: 3 })
        ));
        assert!(matches!(
            parse_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2\n"),
            Err(AlistError::InconsistentDegrees { line: 8, .. })
        ));
        assert!(matches!(
            parse_alist("3 1\n1 3\n1 1 1\n3\n1\n1\n"),
            Err(AlistError::UnexpectedEof { .. })
        ));
        assert!(matches!(
            parse_alist("3 2\n1 2\n1 1 1\n2 1\n1\n1\n2\n1 2\n3\n"),
            Err(AlistError::RowDegreeTooSmall { row: 2, degree: 1 })
        ));
        // column 3 claims row 1 but row 1 lacks column 3
        assert!(matches!(
            parse_alist("3 2\n1 2\n1 1 1\n2 1\n1\n2\n1\n1 2\n3\n"),
            Err(AlistError::RowDegreeTooSmall { .. }) | Err(AlistError::NotTransposed { .. })
        ));
        assert!(matches!(
            parse_alist("4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 3\n2 4\n"),
            Err(AlistError::NotTransposed { .. })
        ));
    }

    #[test]
    fn codewords_of_repetition_code() {
        let h = ParityCheckMatrix::from_rows(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(h.codewords_brute_force(), vec![vec![0, 0, 0], vec![1, 1, 1]]);
        assert!(h.is_codeword(&[1, 1, 1]));
        assert!(!h.is_codeword(&[1, 0, 1]));
    }
}
