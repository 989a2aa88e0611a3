//! Linear-system backends: banded LU for the 1D schemes, sparse LU (with an
//! optional GMRES path) for 2D, and a dense reference solver for tests.

pub mod banded;
pub mod dense;
pub mod iterative;
pub mod sparse;
pub mod splu;
pub mod tridiagonal;

pub use banded::{BandedLu, BandedMatrix};
pub use dense::dense_oracle_solve;
pub use iterative::{gmres, GmresOptions};
pub use sparse::SparseMatrix;
pub use splu::SparseLu;
pub use tridiagonal::{solve_cyclic_tridiagonal, solve_tridiagonal};

use crate::error::Result;
use crate::scalar::Scalar;

/// Pivot threshold for the sparse LU: the diagonal is kept while it is at
/// least this fraction of the column maximum.
pub const DIAGONAL_PIVOT_THRESHOLD: f64 = 0.1;

pub fn banded_solve<T: Scalar>(a: &BandedMatrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    a.solve(rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SparseBackend {
    /// Sparse LU with the supplied column order.
    #[default]
    Direct,
    /// Restarted GMRES to a relative residual of `1e-12`.
    Iterative,
}

/// Solves a sparse system with the chosen backend. `order` is the fill
/// reducing column order for the direct path and is ignored otherwise.
pub fn sparse_solve<T: Scalar>(
    a: &SparseMatrix<T>,
    rhs: &[T],
    order: Option<&[usize]>,
    backend: SparseBackend,
) -> Result<Vec<T>> {
    match backend {
        SparseBackend::Direct => {
            SparseLu::factor(a, order, T::lit(DIAGONAL_PIVOT_THRESHOLD))?.solve(rhs)
        }
        SparseBackend::Iterative => gmres(a, rhs, None, &GmresOptions::default()),
    }
}

/// `|a x - b|_inf / (|a|_inf |x|_inf + |b|_inf)`, the backward-error measure
/// used to accept a solve.
pub fn relative_residual<T: Scalar>(a: &SparseMatrix<T>, x: &[T], b: &[T]) -> T {
    let r: Vec<T> = a.matvec(x).iter().zip(b).map(|(p, q)| *p - *q).collect();
    let scale = a.norm_inf() * crate::scalar::max_abs(x) + crate::scalar::max_abs(b);
    if scale == T::zero() {
        return T::zero();
    }
    crate::scalar::max_abs(&r) / scale
}
