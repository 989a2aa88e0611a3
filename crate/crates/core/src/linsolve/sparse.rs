//! Compressed-row sparse matrices with the handful of algebraic operations
//! needed to assemble the scheme operators from 1D building blocks.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed and column indices sorted within each row.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut counts = vec![0usize; rows + 1];
        for &(r, c, _) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!(
                    "triplet ({r}, {c}) outside {rows}x{cols} matrix"
                )));
            }
            counts[r + 1] += 1;
        }
        for r in 0..rows {
            counts[r + 1] += counts[r];
        }
        let mut next = counts.clone();
        let mut cols_tmp = vec![0usize; triplets.len()];
        let mut vals_tmp = vec![T::zero(); triplets.len()];
        for &(r, c, v) in triplets {
            cols_tmp[next[r]] = c;
            vals_tmp[next[r]] = v;
            next[r] += 1;
        }

        let mut indptr = Vec::with_capacity(rows + 1);
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data = Vec::with_capacity(triplets.len());
        indptr.push(0);
        let mut row: Vec<(usize, T)> = Vec::new();
        for r in 0..rows {
            row.clear();
            row.extend((counts[r]..counts[r + 1]).map(|k| (cols_tmp[k], vals_tmp[k])));
            row.sort_by_key(|e| e.0);
            for &(c, v) in row.iter() {
                if indices.len() > indptr[r] && *indices.last().unwrap() == c {
                    let last = data.last_mut().unwrap();
                    *last = *last + v;
                } else {
                    indices.push(c);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(Self {
            rows,
            cols,
            indptr,
            indices,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![T::one(); n])
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self {
            rows: n,
            cols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            data: diag.to_vec(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            indptr: vec![0; rows + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.data[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(k) => self.data[span.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "matvec dimension");
        (0..self.rows)
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let mut next = counts.clone();
        let mut indices = vec![0usize; self.nnz()];
        let mut data = vec![T::zero(); self.nnz()];
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                indices[next[c]] = r;
                data[next[c]] = v;
                next[c] += 1;
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            indptr: counts,
            indices,
            data,
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut trip = Vec::new();
        let mut acc = vec![T::zero(); rhs.cols];
        let mut touched = vec![false; rhs.cols];
        let mut pattern = Vec::new();
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in rhs.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        pattern.push(c);
                    }
                    acc[c] = acc[c] + a * b;
                }
            }
            for &c in &pattern {
                trip.push((r, c, acc[c]));
                acc[c] = T::zero();
                touched[c] = false;
            }
            pattern.clear();
        }
        Self::from_triplets(self.rows, rhs.cols, &trip)
    }

    /// Kronecker product; with row-major `(i, j)` layouts, `kron(A, I)` acts
    /// along the slow index and `kron(I, B)` along the fast one.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut trip = Vec::with_capacity(self.nnz() * rhs.nnz());
        for (r1, c1, v1) in self.triplets() {
            for (r2, c2, v2) in rhs.triplets() {
                trip.push((r1 * rhs.rows + r2, c1 * rhs.cols + c2, v1 * v2));
            }
        }
        Self::from_triplets(self.rows * rhs.rows, self.cols * rhs.cols, &trip)
            .expect("kron indices in range")
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v = *v * s);
        out
    }

    /// `self * diag(d)`.
    pub fn scale_columns(&self, d: &[T]) -> Self {
        assert_eq!(d.len(), self.cols, "column scaling dimension");
        let mut out = self.clone();
        for (v, &c) in out.data.iter_mut().zip(&self.indices) {
            *v = *v * d[c];
        }
        out
    }

    /// `diag(d) * self`.
    pub fn scale_rows(&self, d: &[T]) -> Self {
        assert_eq!(d.len(), self.rows, "row scaling dimension");
        let mut out = self.clone();
        for r in 0..self.rows {
            for v in &mut out.data[self.indptr[r]..self.indptr[r + 1]] {
                *v = *v * d[r];
            }
        }
        out
    }

    /// `1 / max_j |a_ij|` per row (1 for an empty row).
    pub fn row_equilibration(&self) -> Vec<T> {
        (0..self.rows)
            .map(|r| {
                let m = self.row(r).fold(T::zero(), |m, (_, v)| m.max(v.abs()));
                if m > T::zero() {
                    T::one() / m
                } else {
                    T::one()
                }
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape("matrix sum of different shapes".into()));
        }
        let trip: Vec<_> = self.triplets().chain(rhs.triplets()).collect();
        Self::from_triplets(self.rows, self.cols, &trip)
    }

    /// Keeps rows `rows` and columns `cols` (both half-open ranges).
    pub fn slice(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let trip: Vec<_> = rows
            .clone()
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .filter(|(_, c, _)| cols.contains(c))
            .map(|(r, c, v)| (r - rows.start, c - cols.start, v))
            .collect();
        Self::from_triplets(rows.len(), cols.len(), &trip).expect("slice indices in range")
    }

    /// Assembles a block matrix. Every block row must agree on height and
    /// every block column on width; `None` blocks are zero.
    pub fn from_blocks(blocks: &[Vec<Option<&Self>>]) -> Result<Self> {
        let nbr = blocks.len();
        let nbc = blocks.first().map_or(0, |r| r.len());
        let mut heights = vec![None; nbr];
        let mut widths = vec![None; nbc];
        for (bi, brow) in blocks.iter().enumerate() {
            if brow.len() != nbc {
                return Err(Error::Shape("ragged block layout".into()));
            }
            for (bj, blk) in brow.iter().enumerate() {
                if let Some(m) = blk {
                    for (slot, val) in [(&mut heights[bi], m.rows), (&mut widths[bj], m.cols)] {
                        match slot {
                            Some(s) if *s != val => {
                                return Err(Error::Shape("inconsistent block sizes".into()))
                            }
                            _ => *slot = Some(val),
                        }
                    }
                }
            }
        }
        let heights: Vec<usize> = heights.into_iter().map(|h| h.unwrap_or(0)).collect();
        let widths: Vec<usize> = widths.into_iter().map(|w| w.unwrap_or(0)).collect();
        let mut trip = Vec::new();
        let mut r0 = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, blk) in brow.iter().enumerate() {
                if let Some(m) = blk {
                    trip.extend(m.triplets().map(|(r, c, v)| (r0 + r, c0 + c, v)));
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Self::from_triplets(r0, widths.iter().sum(), &trip)
    }

    /// Symmetric renumbering: entry `(r, c)` moves to `(new_of[r], new_of[c])`.
    pub fn permute(&self, new_of: &[usize]) -> Self {
        assert_eq!(self.rows, self.cols);
        assert_eq!(new_of.len(), self.rows);
        let trip: Vec<_> = self
            .triplets()
            .map(|(r, c, v)| (new_of[r], new_of[c], v))
            .collect();
        Self::from_triplets(self.rows, self.cols, &trip).expect("permutation in range")
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// `(lower, upper)` bandwidths of the stored pattern.
    pub fn bandwidths(&self) -> (usize, usize) {
        self.triplets().fold((0, 0), |(kl, ku), (r, c, _)| {
            if r > c {
                (kl.max(r - c), ku)
            } else {
                (kl, ku.max(c - r))
            }
        })
    }

    pub(crate) fn raw(&self) -> (&[usize], &[usize], &[T]) {
        (&self.indptr, &self.indices, &self.data)
    }

    /// Same sparsity pattern, bit for bit, as `other`.
    pub fn same_pattern(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.indptr == other.indptr
            && self.indices == other.indices
    }
}
