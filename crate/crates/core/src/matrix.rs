//! Measurement matrices and outcome vectors, with their text formats.
//!
//! Matrix files: a header line `t n`, then `t` lines of `n` characters
//! drawn from `{0,1}`. Outcome files: one line of `t` characters.

use std::fmt;

use crate::bits::RowSet;
use crate::error::{Error, Result};
use crate::items::ItemSet;

/// A `t x n` 0/1 matrix (tests x items), stored column-major as row bitsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<RowSet>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParams(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(BinaryMatrix {
            rows,
            cols,
            columns: vec![RowSet::zeros(rows); cols],
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.columns[j].set(i, true);
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from row vectors of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if let Some(bad) = rows.iter().position(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries, expected {cols}",
                bad + 1,
                rows[bad].as_ref().len()
            )));
        }
        if let Some(v) = rows.iter().flat_map(|r| r.as_ref()).find(|&&v| v > 1) {
            return Err(Error::Parse(format!("matrix entry {v} is not 0/1")));
        }
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j] == 1)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.columns[col].get(row)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.columns[col].set(row, value);
    }

    /// The set of rows in which column `col` has a 1.
    pub fn column(&self, col: usize) -> &RowSet {
        &self.columns[col]
    }

    /// Items tested by row `row`.
    pub fn row_support(&self, row: usize) -> ItemSet {
        ItemSet::from_zero_based((0..self.cols).filter(|&j| self.get(row, j)))
    }

    /// Rows in which every column of `items` has a 1.
    pub fn rows_containing(&self, items: &[usize]) -> RowSet {
        let mut acc = RowSet::ones(self.rows);
        for &j in items {
            acc.and_assign(&self.columns[j]);
        }
        acc
    }

    /// `|row_i ∩ x|` for every row.
    pub fn defective_counts(&self, x: &ItemSet) -> Result<Vec<usize>> {
        x.check_within(self.cols)?;
        let mut counts = vec![0usize; self.rows];
        for j in x.iter() {
            for i in self.columns[j].iter_ones() {
                counts[i] += 1;
            }
        }
        Ok(counts)
    }

    pub fn ones(&self) -> usize {
        self.columns.iter().map(RowSet::count_ones).sum()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|tok| tok.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [t, n] = dims[..] else {
            return Err(Error::Parse(format!("header must be `t n`, got {header:?}")));
        };
        let mut rows = Vec::with_capacity(t);
        for (i, line) in lines.enumerate() {
            let row = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(Error::Parse(format!("row {}: bad character {other:?}", i + 1))),
                })
                .collect::<Result<Vec<u8>>>()?;
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} characters, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            rows.push(row);
        }
        if rows.len() != t {
            return Err(Error::Parse(format!("expected {t} rows, found {}", rows.len())));
        }
        Self::from_rows(&rows)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        let mut line = String::with_capacity(self.cols);
        for i in 0..self.rows {
            line.clear();
            line.extend((0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }));
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Length-`t` test outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutcomeVector {
    bits: Vec<bool>,
}

impl OutcomeVector {
    pub fn new(bits: Vec<bool>) -> Self {
        OutcomeVector { bits }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                v => Err(Error::Parse(format!("outcome {v} is not 0/1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn zeros(len: usize) -> Self {
        OutcomeVector { bits: vec![false; len] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn positives(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Bitset of the negative (0) outcomes.
    pub fn negatives(&self) -> RowSet {
        let mut s = RowSet::zeros(self.bits.len());
        for (i, &b) in self.bits.iter().enumerate() {
            if !b {
                s.set(i, true);
            }
        }
        s
    }

    pub fn check_rows(&self, m: &BinaryMatrix) -> Result<()> {
        if self.len() != m.rows() {
            return Err(Error::DimensionMismatch(format!(
                "outcome has length {}, matrix has {} rows",
                self.len(),
                m.rows()
            )));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let line: String = text.split_whitespace().collect();
        line.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("bad outcome character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl fmt::Display for OutcomeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}
