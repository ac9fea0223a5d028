//! Dense bit-packed linear algebra over GF(2).
//!
//! Rows are packed into `u64` words; column `j` of a row lives in word
//! `j / 64`, bit `j % 64`. Row 0 is the top (most significant) subnode of
//! whatever signal the matrix acts on, and the same holds for vector index 0.
//!
//! All values are immutable once built. Every operation returns a fresh
//! matrix, so matrices can be shared freely across worker threads.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 8]>;

#[inline]
fn stride_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

/// Bit vector over GF(2). Index 0 is the most significant bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Gf2Vector {
            len,
            words: SmallVec::from_elem(0, stride_for(len)),
        }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut v = Gf2Vector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v.words[i / 64] |= 1 << (i % 64),
                other => {
                    return Err(Error::MalformedMatrix(format!(
                        "entry {other} at position {i} is not a bit"
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Gf2Vector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.words[i / 64] |= 1 << (i % 64);
            }
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
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn xor(&self, other: &Gf2Vector) -> Result<Gf2Vector> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                op: "vector xor",
                left: (self.len, 1),
                right: (other.len, 1),
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Gf2Vector {
            len: self.len,
            words,
        })
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense binary matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Words,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = stride_for(cols);
        Gf2Matrix {
            rows,
            cols,
            stride,
            data: SmallVec::from_elem(0, rows * stride),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    /// `J^(q-n)`: ones on the `(q-n)`-th subdiagonal.
    ///
    /// Applied to a vector it moves the top `n` bits to the bottom `n`
    /// positions and zero-fills the rest, so its rank is `n`.
    pub fn shift(q: usize, n: usize) -> Result<Self> {
        if q > 64 {
            return Err(Error::BitWidthTooLarge(q));
        }
        if n > q {
            return Err(Error::InvalidExponent {
                exponent: n as i64,
                q,
            });
        }
        let offset = q - n;
        Ok(Self::from_fn(q, q, |i, j| i == j + offset))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.flip(i, j);
                }
            }
        }
        m
    }

    /// Builds a matrix from nested 0/1 rows. All rows must have the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::MalformedMatrix(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.flip(i, j),
                    other => {
                        return Err(Error::MalformedMatrix(format!(
                            "entry {other} at ({i}, {j}) is not a bit"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Gf2Vector]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch {
                op: "from_columns",
                left: (rows, columns.len()),
                right: (bad.len(), 1),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j].get(i)))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    #[inline]
    fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / 64] ^= 1 << (j % 64);
    }

    /// Copy with entry `(i, j)` toggled.
    pub fn with_flipped(&self, i: usize, j: usize) -> Self {
        assert!(i < self.rows && j < self.cols);
        let mut m = self.clone();
        m.flip(i, j);
        m
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "({i}, {j}) out of range for {}x{}",
            self.rows,
            self.cols
        );
        self.data[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        let bits: Vec<bool> = (0..self.rows).map(|i| self.get(i, j)).collect();
        Gf2Vector::from_bools(&bits)
    }

    pub fn row(&self, i: usize) -> Gf2Vector {
        let bits: Vec<bool> = (0..self.cols).map(|j| self.get(i, j)).collect();
        Gf2Vector::from_bools(&bits)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j))
    }

    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        let stride = out.stride;
        for i in 0..self.rows {
            for (w, &word) in self.row_words(i).iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let k = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let src = other.row_words(k);
                    for (dst, s) in out.data[i * stride..(i + 1) * stride].iter_mut().zip(src) {
                        *dst ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let cols = self.cols + other.cols;
        if stride_for(cols) == 1 {
            let word = |m: &Gf2Matrix, i: usize| if m.stride == 0 { 0 } else { m.data[i] };
            let mut out = Gf2Matrix::zeros(self.rows, cols);
            for i in 0..self.rows {
                out.data[i] = word(self, i) | word(other, i) << self.cols;
            }
            return Ok(out);
        }
        Ok(Self::from_fn(self.rows, cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Gf2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    pub fn apply(&self, v: &Gf2Vector) -> Result<Gf2Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let bits: Vec<bool> = (0..self.rows)
            .map(|i| {
                self.row_words(i)
                    .iter()
                    .zip(&v.words)
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1
                    == 1
            })
            .collect();
        Ok(Gf2Vector::from_bools(&bits))
    }

    /// Rank over GF(2) by row reduction.
    pub fn rank(&self) -> usize {
        match self.stride {
            0 => 0,
            1 => rank_single_word(self.data.iter().copied()),
            _ => self.rank_multi_word(),
        }
    }

    fn rank_multi_word(&self) -> usize {
        let stride = self.stride;
        let mut work: Words = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let pivot = (rank..self.rows).find(|&r| work[r * stride + w] & bit != 0);
            let Some(p) = pivot else { continue };
            for k in 0..stride {
                work.swap(rank * stride + k, p * stride + k);
            }
            for r in 0..self.rows {
                if r != rank && work[r * stride + w] & bit != 0 {
                    for k in 0..stride {
                        let v = work[rank * stride + k];
                        work[r * stride + k] ^= v;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// True iff the column spaces of `self` and `other` meet only in zero.
    pub fn column_space_intersection_trivial(&self, other: &Gf2Matrix) -> Result<bool> {
        let joint = self.hstack(other)?;
        Ok(joint.rank() == self.rank() + other.rank())
    }
}

/// Rank of a set of rows that each fit in one word (xor basis insertion).
pub(crate) fn rank_single_word(rows: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut row in rows {
        while row != 0 {
            let lead = 63 - row.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = row;
                rank += 1;
                break;
            }
            row ^= basis[lead];
        }
    }
    rank
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}
