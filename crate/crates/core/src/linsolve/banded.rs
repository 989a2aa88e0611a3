//! Band storage and LU factorization with partial pivoting (the `gbtrf`
//! scheme): row interchanges widen the upper band to `kl + ku`.

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major rows of width `2 kl + ku + 1`; entry `(i, j)` lives at
    /// `i * width + (j + kl - i)`.
    data: Vec<T>,
}

impl<T: Scalar> BandedMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![T::zero(); n * (2 * kl + ku + 1)],
        }
    }

    pub fn from_sparse(a: &SparseMatrix<T>) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::Shape("banded matrix must be square".into()));
        }
        let (kl, ku) = a.bandwidths();
        let mut band = Self::zeros(a.rows(), kl, ku);
        for (r, c, v) in a.triplets() {
            band.set(r, c, v);
        }
        Ok(band)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width() + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if j + self.kl < i || j > i + self.ku {
            return T::zero();
        }
        self.data[self.slot(i, j)]
    }

    /// Stores `(i, j)`; panics when the entry is outside the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band ({}, {})",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<T>()
            })
            .fold(T::zero(), T::max)
    }

    pub fn factor(&self) -> Result<BandedLu<T>> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let reach = kl + ku;
        let mut lu = self.clone();
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.data[lu.slot(k, k)].abs();
            for r in k + 1..=last_row {
                let v = lu.data[lu.slot(r, k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == T::zero() || !best.is_finite() {
                return Err(Error::SingularPivot { index: k });
            }
            pivots[k] = p;
            let last_col = (k + reach).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (lu.slot(k, j), lu.slot(p, j));
                    lu.data.swap(a, b);
                }
            }
            let pivot = lu.data[lu.slot(k, k)];
            for r in k + 1..=last_row {
                let s = lu.slot(r, k);
                let factor = lu.data[s] / pivot;
                lu.data[s] = factor;
                if factor == T::zero() {
                    continue;
                }
                for j in k + 1..=last_col {
                    let u = lu.data[lu.slot(k, j)];
                    let t = lu.slot(r, j);
                    lu.data[t] = lu.data[t] - factor * u;
                }
            }
        }
        Ok(BandedLu { lu, pivots })
    }

    /// Factor and solve in one go.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        self.factor()?.solve(rhs)
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    lu: BandedMatrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> BandedLu<T> {
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.lu.n;
        if rhs.len() != n {
            return Err(Error::Shape(format!("rhs has {} entries, system {n}", rhs.len())));
        }
        let kl = self.lu.kl;
        let reach = kl + self.lu.ku;
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let xk = x[k];
            for r in k + 1..=(k + kl).min(n - 1) {
                x[r] = x[r] - self.lu.data[self.lu.slot(r, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + reach).min(n - 1) {
                s = s - self.lu.data[self.lu.slot(k, j)] * x[j];
            }
            x[k] = s / self.lu.data[self.lu.slot(k, k)];
        }
        Ok(x)
    }
}
