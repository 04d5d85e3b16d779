use std::fmt;

use super::bitvec::BitVec;
use crate::error::{Error, Result};

/// A dense matrix over GF(2), stored as packed rows.
///
/// Vectors act on matrices from the left (`c = m·G`), so a `k × n` generator
/// maps `k`-bit messages to `n`-bit words. The only place where the column
/// action `G·x` matters is [`kernel_projector`](BitMat::kernel_projector),
/// whose columns span `{x : G·x = 0}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMat {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: BitMat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BitMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMat {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` is needed so that a
    /// matrix with zero rows still has a width.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::dims("from_rows", cols, bad.len()));
        }
        Ok(BitMat {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Convenience constructor from 0/1 literals.
    pub fn from_bits(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| BitVec::from_bits(r.iter().copied())).collect();
        Self::from_rows(cols, rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::dims("from_columns", rows, c.len()));
            }
            for i in c.ones() {
                m.data[i].set(j, true);
            }
        }
        Ok(m)
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
    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVec] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    pub fn column(&self, j: usize) -> BitVec {
        assert!(j < self.cols);
        let mut c = BitVec::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<BitVec> {
        self.transpose().into_rows()
    }

    pub fn transpose(&self) -> BitMat {
        let mut t = BitMat::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.ones() {
                t.data[j].set(i, true);
            }
        }
        t
    }

    /// The first `count` rows.
    pub fn top_rows(&self, count: usize) -> BitMat {
        assert!(count <= self.rows);
        BitMat {
            rows: count,
            cols: self.cols,
            data: self.data[..count].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == BitMat::identity(self.rows)
    }

    /// Product `self · rhs` over GF(2).
    pub fn mul(&self, rhs: &BitMat) -> Result<BitMat> {
        if self.cols != rhs.rows {
            return Err(Error::dims("mat_mul", self.cols, rhs.rows));
        }
        let data = self
            .data
            .iter()
            .map(|r| combine_rows(rhs, r))
            .collect();
        Ok(BitMat {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    /// Row vector times matrix, `v · self`.
    pub fn vec_mul(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.rows {
            return Err(Error::dims("vec_mat_mul", self.rows, v.len()));
        }
        Ok(combine_rows(self, v))
    }

    /// Column action `self · x` for a column vector `x`.
    pub fn mul_column(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(Error::dims("mul_column", self.cols, x.len()));
        }
        let mut out = BitVec::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            if r.dot(x)? {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Entry-wise sum (XOR).
    pub fn add(&self, rhs: &BitMat) -> Result<BitMat> {
        if self.rows != rhs.rows {
            return Err(Error::dims("mat_add rows", self.rows, rhs.rows));
        }
        if self.cols != rhs.cols {
            return Err(Error::dims("mat_add cols", self.cols, rhs.cols));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.xor(b))
            .collect::<Result<_>>()?;
        Ok(BitMat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn rref(&self) -> Rref {
        let mut rows = self.data.clone();
        let pivots = eliminate(&mut rows, self.cols);
        Rref {
            rank: pivots.len(),
            pivots,
            matrix: BitMat {
                rows: self.rows,
                cols: self.cols,
                data: rows,
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical right inverse `X` with `self · X = I`.
    ///
    /// Solves `G X = I` by row reduction of `[G | I]`; all free variables are
    /// set to zero, so only the pivot rows of the result are nonzero. Over
    /// GF(2) this plays the role of a Moore-Penrose inverse.
    pub fn right_inverse(&self) -> Result<BitMat> {
        let (k, n) = (self.rows, self.cols);
        let mut aug: Vec<BitVec> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut a = BitVec::zeros(n + k);
                for j in r.ones() {
                    a.set(j, true);
                }
                a.set(n + i, true);
                a
            })
            .collect();
        let pivots = eliminate(&mut aug, n);
        if pivots.len() < k {
            return Err(Error::RankDeficient {
                rank: pivots.len(),
                rows: k,
            });
        }
        let mut x = BitMat::zeros(n, k);
        for (r, &p) in pivots.iter().enumerate() {
            x.data[p] = aug[r].slice(n, n + k);
        }
        Ok(x)
    }

    /// `Ok(())` iff `self · candidate = I`.
    pub fn check_right_inverse(&self, candidate: &BitMat) -> Result<()> {
        if candidate.rows != self.cols || candidate.cols != self.rows {
            return Err(Error::dims("right inverse shape", self.cols, candidate.rows));
        }
        if self.mul(candidate)?.is_identity() {
            Ok(())
        } else {
            Err(Error::NotRightInverse)
        }
    }

    /// Member `G₁⁻ ⊕ U ⊕ G₁⁻·G·U` of the right-inverse family of `self`.
    ///
    /// Every right inverse of a full-row-rank `G` arises this way for some
    /// `n × k` matrix `U`.
    pub fn right_inverse_member(&self, base: &BitMat, u: &BitMat) -> Result<BitMat> {
        self.check_right_inverse(base)?;
        if u.rows != base.rows || u.cols != base.cols {
            return Err(Error::dims("right_inverse_member U shape", base.rows, u.rows));
        }
        let gu = self.mul(u)?;
        base.add(u)?.add(&base.mul(&gu)?)
    }

    /// `I_n ⊕ G₁⁻·G`. Every column `x` satisfies `G·x = 0` and the column
    /// space is the whole `(n-k)`-dimensional kernel of the column action.
    pub fn kernel_projector(&self, base: &BitMat) -> Result<BitMat> {
        self.check_right_inverse(base)?;
        BitMat::identity(self.cols).add(&base.mul(self)?)
    }
}

/// XOR of the rows of `m` selected by the set bits of `sel`.
fn combine_rows(m: &BitMat, sel: &BitVec) -> BitVec {
    let mut acc = BitVec::zeros(m.cols);
    for i in sel.ones() {
        for (a, b) in acc.words_mut().iter_mut().zip(m.data[i].words()) {
            *a ^= b;
        }
    }
    acc
}

/// In-place Gauss-Jordan elimination, pivoting only on the first `limit`
/// columns. Returns the pivot columns; rows `0..rank` end up in reduced
/// echelon form with respect to those columns.
pub(crate) fn eliminate(rows: &mut [BitVec], limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..limit {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row exists");
        let w = col / 64;
        let bit = 1u64 << (col % 64);
        for r in head.iter_mut().chain(tail.iter_mut()) {
            if r.words()[w] & bit != 0 {
                for (a, b) in r.words_mut()[w..].iter_mut().zip(&pivot_row.words()[w..]) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

impl fmt::Debug for BitMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMat {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        f.write_str("]")
    }
}
