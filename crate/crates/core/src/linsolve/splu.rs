//! Left-looking sparse LU (Gilbert–Peierls) with threshold partial pivoting.
//!
//! Factors `P A Q = L U` where `Q` is a caller-supplied fill-reducing column
//! order and `P` is chosen on the fly. The diagonal entry is preferred as
//! pivot whenever it is within `tol` of the column maximum, so a symmetric
//! ordering keeps its fill pattern for well-scaled systems.

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const NONE: usize = usize::MAX;

/// Compressed-column storage used internally by the factorization.
#[derive(Debug, Clone, Default)]
struct Csc<T> {
    colptr: Vec<usize>,
    rowind: Vec<usize>,
    values: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct SparseLu<T> {
    n: usize,
    l: Csc<T>,
    u: Csc<T>,
    /// `pinv[row] = k` when `row` was chosen as the k-th pivot.
    pinv: Vec<usize>,
    q: Vec<usize>,
}

impl<T: Scalar> SparseLu<T> {
    /// Factors `a` with column order `q` (`None` is the natural order).
    pub fn factor(a: &SparseMatrix<T>, q: Option<&[usize]>, tol: T) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::Shape("sparse LU needs a square matrix".into()));
        }
        let q: Vec<usize> = match q {
            Some(q) => {
                if q.len() != n {
                    return Err(Error::Shape("column order has wrong length".into()));
                }
                q.to_vec()
            }
            None => (0..n).collect(),
        };
        // CSR of A^T is CSC of A.
        let at = a.transpose();
        let (acolptr, arowind, avalues) = at.raw();

        let mut l = Csc {
            colptr: Vec::with_capacity(n + 1),
            rowind: Vec::with_capacity(4 * a.nnz()),
            values: Vec::with_capacity(4 * a.nnz()),
        };
        let mut u = Csc {
            colptr: Vec::with_capacity(n + 1),
            rowind: Vec::with_capacity(4 * a.nnz()),
            values: Vec::with_capacity(4 * a.nnz()),
        };
        let mut pinv = vec![NONE; n];
        let mut x = vec![T::zero(); n];
        let mut xi = vec![0usize; n];
        let mut stack = vec![0usize; n];
        let mut pstack = vec![0usize; n];
        let mut marked = vec![false; n];

        for k in 0..n {
            l.colptr.push(l.rowind.len());
            u.colptr.push(u.rowind.len());
            let col = q[k];

            // Reach of A(:, col) in the graph of L, in topological order.
            let mut top = n;
            for p in acolptr[col]..acolptr[col + 1] {
                let start = arowind[p];
                if marked[start] {
                    continue;
                }
                let mut head = 0usize;
                stack[0] = start;
                loop {
                    let j = stack[head];
                    let jnew = pinv[j];
                    if !marked[j] {
                        marked[j] = true;
                        pstack[head] = if jnew == NONE { 0 } else { l.colptr[jnew] };
                    }
                    let end = if jnew == NONE { 0 } else { l.colptr[jnew + 1] };
                    let mut done = true;
                    let mut pp = pstack[head];
                    while pp < end {
                        let i = l.rowind[pp];
                        pp += 1;
                        if marked[i] {
                            continue;
                        }
                        pstack[head] = pp;
                        head += 1;
                        stack[head] = i;
                        done = false;
                        break;
                    }
                    if done {
                        top -= 1;
                        xi[top] = j;
                        if head == 0 {
                            break;
                        }
                        head -= 1;
                    }
                }
            }
            for &j in &xi[top..n] {
                marked[j] = false;
            }

            // Sparse triangular solve x = L \ A(:, col).
            for &j in &xi[top..n] {
                x[j] = T::zero();
            }
            for p in acolptr[col]..acolptr[col + 1] {
                x[arowind[p]] = avalues[p];
            }
            for &j in &xi[top..n] {
                let jnew = pinv[j];
                if jnew == NONE {
                    continue;
                }
                let start = l.colptr[jnew];
                let end = l.colptr[jnew + 1];
                // Unit diagonal stored first.
                let xj = x[j];
                if xj == T::zero() {
                    continue;
                }
                for p in start + 1..end {
                    let r = l.rowind[p];
                    x[r] = x[r] - l.values[p] * xj;
                }
            }

            // Pivot selection.
            let mut ipiv = NONE;
            let mut best = T::neg_infinity();
            for &i in &xi[top..n] {
                if pinv[i] == NONE {
                    let t = x[i].abs();
                    if t > best {
                        best = t;
                        ipiv = i;
                    }
                } else {
                    u.rowind.push(pinv[i]);
                    u.values.push(x[i]);
                }
            }
            if ipiv == NONE || !(best > T::zero()) || !best.is_finite() {
                return Err(Error::SingularPivot { index: k });
            }
            if pinv[col] == NONE && x[col].abs() >= best * tol {
                ipiv = col;
            }
            let pivot = x[ipiv];
            u.rowind.push(k);
            u.values.push(pivot);
            pinv[ipiv] = k;
            l.rowind.push(ipiv);
            l.values.push(T::one());
            for &i in &xi[top..n] {
                if pinv[i] == NONE {
                    l.rowind.push(i);
                    l.values.push(x[i] / pivot);
                }
                x[i] = T::zero();
            }
        }
        l.colptr.push(l.rowind.len());
        u.colptr.push(u.rowind.len());
        for r in l.rowind.iter_mut() {
            *r = pinv[*r];
        }
        Ok(Self { n, l, u, pinv, q })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored entries in `L + U` (unit diagonal of `L` included).
    pub fn fill(&self) -> usize {
        self.l.values.len() + self.u.values.len()
    }

    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::Shape(format!("rhs has {} entries, system {n}", rhs.len())));
        }
        let mut x = vec![T::zero(); n];
        for (row, &k) in self.pinv.iter().enumerate() {
            x[k] = rhs[row];
        }
        for j in 0..n {
            let xj = x[j];
            if xj == T::zero() {
                continue;
            }
            for p in self.l.colptr[j] + 1..self.l.colptr[j + 1] {
                let r = self.l.rowind[p];
                x[r] = x[r] - self.l.values[p] * xj;
            }
        }
        for j in (0..n).rev() {
            let last = self.u.colptr[j + 1] - 1;
            x[j] = x[j] / self.u.values[last];
            let xj = x[j];
            if xj == T::zero() {
                continue;
            }
            for p in self.u.colptr[j]..last {
                let r = self.u.rowind[p];
                x[r] = x[r] - self.u.values[p] * xj;
            }
        }
        let mut out = vec![T::zero(); n];
        for (k, &c) in self.q.iter().enumerate() {
            out[c] = x[k];
        }
        Ok(out)
    }
}
