//! Dense linear algebra over GF(2).
//!
//! Rows are packed into `u64` words, bit `j` of a row living in word `j / 64`
//! at position `j % 64`. Bits past the last column are always zero, so
//! word-level equality and XOR never see garbage.
//!
//! Elimination is deterministic: pivots are taken column by column from the
//! left, and within a column the topmost available row wins. Witnesses from
//! [`gf2_solve`] are therefore identical across runs and platforms.

use std::fmt;

use crate::error::{contract, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A bit-packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector(")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}

/// A dense, row-major, bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from nested rows of `0`/`1` values.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "({i},{j}) out of range");
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "({i},{j}) out of range");
        let mask = 1u64 << (j % WORD);
        let w = &mut self.data[i * self.stride + j / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, x: &Gf2Vector) -> Result<Gf2Vector> {
        if x.len() != self.cols {
            return Err(contract(format!(
                "vector length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = Gf2Vector::zeros(self.rows);
        for i in 0..self.rows {
            let parity = self
                .row_words(i)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            out.set(i, parity & 1 == 1);
        }
        Ok(out)
    }

    /// Returns `[self | d]`, the matrix with `d` appended as a final column.
    pub fn augment(&self, d: &Gf2Vector) -> Result<Gf2Matrix> {
        if d.len() != self.rows {
            return Err(contract(format!(
                "right-hand side has length {} but matrix has {} rows",
                d.len(),
                self.rows
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            let stride = self.stride;
            out.data[i * out.stride..i * out.stride + stride].copy_from_slice(self.row_words(i));
            out.set(i, self.cols, d.get(i));
        }
        Ok(out)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Reduces `m` in place to reduced row-echelon form over its first
/// `pivot_cols` columns and returns the pivot column of each pivot row.
fn rref(m: &mut Gf2Matrix, pivot_cols: usize) -> Vec<usize> {
    let stride = m.stride;
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..pivot_cols {
        if next == m.rows {
            break;
        }
        let (w, mask) = (col / WORD, 1u64 << (col % WORD));
        let Some(p) = (next..m.rows).find(|&r| m.data[r * stride + w] & mask != 0) else {
            continue;
        };
        if p != next {
            for k in 0..stride {
                m.data.swap(p * stride + k, next * stride + k);
            }
        }
        // Columns left of `col` are already clear in the pivot row, so the XOR
        // can start at the pivot's word.
        for r in 0..m.rows {
            if r != next && m.data[r * stride + w] & mask != 0 {
                for k in w..stride {
                    let v = m.data[next * stride + k];
                    m.data[r * stride + k] ^= v;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

/// Rank of `m` over GF(2). The input is left untouched.
pub fn gf2_rank(m: &Gf2Matrix) -> usize {
    let mut work = m.clone();
    rref(&mut work, m.cols).len()
}

/// Solves `m · x = d` over GF(2).
///
/// Returns `Ok(None)` when the system is inconsistent. When solutions exist
/// the returned witness has every free variable set to zero.
pub fn gf2_solve(m: &Gf2Matrix, d: &Gf2Vector) -> Result<Option<Gf2Vector>> {
    let mut work = m.augment(d)?;
    let pivots = rref(&mut work, m.cols);
    let rhs = m.cols;
    if (pivots.len()..m.rows).any(|r| work.get(r, rhs)) {
        return Ok(None);
    }
    let mut x = Gf2Vector::zeros(m.cols);
    for (r, &c) in pivots.iter().enumerate() {
        x.set(c, work.get(r, rhs));
    }
    Ok(Some(x))
}
