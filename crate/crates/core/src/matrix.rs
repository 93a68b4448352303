//! The `{+1, -1}` matrix type, its text formats, and the Hadamard test.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Text formats understood by [`parse_sign_matrix`] and [`serialize_sign_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// One line per row over the alphabet `{+, -}`.
    Had,
    /// `{"rows": R, "cols": C, "data": [[1, -1, ...], ...]}`.
    Json,
}

/// Immutable rectangular matrix whose entries are all `+1` or `-1`.
///
/// Entries are stored row-major as `i8`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i8>,
}

impl SignMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows.saturating_mul(cols),
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::Validation(format!(
                "entry ({}, {}) is {}, expected +1 or -1",
                pos / cols + 1,
                pos % cols + 1,
                data[pos]
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a closure returning `true` for `+1`.
    pub fn from_fn(rows: usize, cols: usize, mut plus: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(if plus(i, j) { 1 } else { -1 });
            }
        }
        Self { rows, cols, data }
    }

    /// The matrix with every entry `+1`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[i8] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i) > 0)
    }

    /// The submatrix on the given rows and columns, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        check_indices(rows, self.rows, "row")?;
        check_indices(cols, self.cols, "column")?;
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]) > 0
        }))
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self.get(perm[i], j) > 0)
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, perm[j]) > 0)
    }

    pub fn negate_row(&self, r: usize) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) > 0) != (i == r)
        })
    }

    pub fn negate_col(&self, c: usize) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) > 0) != (j == c)
        })
    }

    /// Exact `A * A^T`, row-major `rows x rows`.
    pub fn gram(&self) -> Vec<i64> {
        let packed = PackedRows::new(self);
        let n = self.rows;
        let mut g = vec![0i64; n * n];
        for i in 0..n {
            g[i * n + i] = self.cols as i64;
            for j in 0..i {
                let d = packed.dot(i, j);
                g[i * n + j] = d;
                g[j * n + i] = d;
            }
        }
        g
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = self
                .row(i)
                .iter()
                .map(|&v| if v > 0 { '+' } else { '-' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

fn check_indices(idx: &[usize], bound: usize, what: &str) -> Result<()> {
    for (k, &i) in idx.iter().enumerate() {
        if i >= bound {
            return Err(Error::Index(format!(
                "{what} index {i} out of range 0..{bound}"
            )));
        }
        if k > 0 && idx[k - 1] >= i {
            return Err(Error::Index(format!(
                "{what} indices must be strictly increasing, got {} then {i}",
                idx[k - 1]
            )));
        }
    }
    Ok(())
}

/// Rows packed as sign bits (bit set = `-1`), for fast inner products.
struct PackedRows {
    words: usize,
    cols: usize,
    bits: Vec<u64>,
}

impl PackedRows {
    fn new(a: &SignMatrix) -> Self {
        let words = a.cols.div_ceil(64);
        let mut bits = vec![0u64; words * a.rows];
        for i in 0..a.rows {
            for (j, &v) in a.row(i).iter().enumerate() {
                if v < 0 {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        Self {
            words,
            cols: a.cols,
            bits,
        }
    }

    fn dot(&self, i: usize, j: usize) -> i64 {
        let ri = &self.bits[i * self.words..(i + 1) * self.words];
        let rj = &self.bits[j * self.words..(j + 1) * self.words];
        let differ: u32 = ri.iter().zip(rj).map(|(x, y)| (x ^ y).count_ones()).sum();
        self.cols as i64 - 2 * differ as i64
    }
}

/// True iff `a` is square of order `n` with `A * A^T = n I`.
pub fn is_hadamard(a: &SignMatrix) -> bool {
    if !a.is_square() {
        return false;
    }
    let packed = PackedRows::new(a);
    (0..a.rows).all(|i| (0..i).all(|j| packed.dot(i, j) == 0))
}

/// Orders for which a Hadamard matrix can exist: 1, 2, or a multiple of 4.
pub fn is_hadamard_feasible_order(n: usize) -> bool {
    n == 1 || n == 2 || (n > 0 && n.is_multiple_of(4))
}

pub fn parse_sign_matrix(text: &str, format: Format) -> Result<SignMatrix> {
    match format {
        Format::Had => parse_had(text),
        Format::Json => parse_json(text),
    }
}

fn parse_had(text: &str) -> Result<SignMatrix> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mut cols = None;
    let mut rows = 0;
    let mut data = Vec::new();
    for (r, line) in body.split('\n').enumerate() {
        let mut width = 0;
        for (c, ch) in line.chars().enumerate() {
            data.push(match ch {
                '+' => 1,
                '-' => -1,
                other => {
                    return Err(Error::Parse {
                        row: r + 1,
                        col: c + 1,
                        found: other,
                    })
                }
            });
            width += 1;
        }
        match cols {
            None if width == 0 => {
                return Err(Error::Ragged {
                    row: r + 1,
                    expected: 1,
                    found: 0,
                })
            }
            None => cols = Some(width),
            Some(expected) if expected != width => {
                return Err(Error::Ragged {
                    row: r + 1,
                    expected,
                    found: width,
                })
            }
            Some(_) => {}
        }
        rows += 1;
    }
    SignMatrix::new(rows, cols.unwrap_or(0), data)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<i64>>,
}

fn parse_json(text: &str) -> Result<SignMatrix> {
    let jm: JsonMatrix = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if jm.rows == 0 || jm.cols == 0 || jm.data.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    if jm.data.len() != jm.rows {
        return Err(Error::Shape(format!(
            "\"rows\" is {} but \"data\" has {} rows",
            jm.rows,
            jm.data.len()
        )));
    }
    let mut data = Vec::with_capacity(jm.rows * jm.cols);
    for (r, row) in jm.data.iter().enumerate() {
        if row.len() != jm.cols {
            return Err(Error::Ragged {
                row: r + 1,
                expected: jm.cols,
                found: row.len(),
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if v != 1 && v != -1 {
                return Err(Error::Json(format!(
                    "entry at row {}, column {} is {v}, expected 1 or -1",
                    r + 1,
                    c + 1
                )));
            }
            data.push(v as i8);
        }
    }
    SignMatrix::new(jm.rows, jm.cols, data)
}

pub fn serialize_sign_matrix(a: &SignMatrix, format: Format) -> String {
    match format {
        Format::Had => {
            let mut s = String::with_capacity(a.rows * (a.cols + 1));
            for i in 0..a.rows {
                s.extend(a.row(i).iter().map(|&v| if v > 0 { '+' } else { '-' }));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let jm = JsonMatrix {
                rows: a.rows,
                cols: a.cols,
                data: (0..a.rows)
                    .map(|i| a.row(i).iter().map(|&v| v as i64).collect())
                    .collect(),
            };
            let mut s = serde_json::to_string(&jm).expect("matrix serializes");
            s.push('\n');
            s
        }
    }
}
