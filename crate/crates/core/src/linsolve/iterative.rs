//! Restarted GMRES with Jacobi preconditioning, used only when direct
//! factorization is switched off. It either reaches the requested relative
//! residual or reports failure.

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct GmresOptions<T> {
    pub restart: usize,
    pub max_iterations: usize,
    pub relative_tolerance: T,
}

impl<T: Scalar> Default for GmresOptions<T> {
    fn default() -> Self {
        Self {
            restart: 60,
            max_iterations: 20_000,
            relative_tolerance: T::lit(1e-12),
        }
    }
}

fn norm2<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|x| *x * *x).sum::<T>().sqrt()
}

fn residual<T: Scalar>(a: &SparseMatrix<T>, x: &[T], b: &[T]) -> Vec<T> {
    a.matvec(x).iter().zip(b).map(|(ax, bi)| *bi - *ax).collect()
}

/// Solves `a x = b` starting from `x0` (zero when `None`).
pub fn gmres<T: Scalar>(
    a: &SparseMatrix<T>,
    b: &[T],
    x0: Option<&[T]>,
    opts: &GmresOptions<T>,
) -> Result<Vec<T>> {
    let n = b.len();
    if a.rows() != n || a.cols() != n {
        return Err(Error::Shape("GMRES dimension mismatch".into()));
    }
    let inv_diag: Vec<T> = (0..n)
        .map(|i| {
            let d = a.get(i, i);
            if d == T::zero() {
                T::one()
            } else {
                T::one() / d
            }
        })
        .collect();
    let bnorm = norm2(b);
    let mut x = x0.map_or_else(|| vec![T::zero(); n], <[T]>::to_vec);
    if bnorm == T::zero() {
        return Ok(vec![T::zero(); n]);
    }
    let m = opts.restart.max(1);
    let mut iterations = 0;
    loop {
        let r = residual(a, &x, b);
        let rnorm = norm2(&r);
        if rnorm <= opts.relative_tolerance * bnorm {
            return Ok(x);
        }
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                residual: (rnorm / bnorm).as_f64(),
                iterations,
            });
        }
        // Right preconditioning keeps the monitored residual the true one.
        let mut basis: Vec<Vec<T>> = vec![r.iter().map(|v| *v / rnorm).collect()];
        let mut hess = vec![vec![T::zero(); m]; m + 1];
        let mut cs = vec![T::zero(); m];
        let mut sn = vec![T::zero(); m];
        let mut g = vec![T::zero(); m + 1];
        g[0] = rnorm;
        let mut used = 0;
        for k in 0..m {
            let z: Vec<T> = basis[k].iter().zip(&inv_diag).map(|(v, d)| *v * *d).collect();
            let mut w = a.matvec(&z);
            for (i, vi) in basis.iter().enumerate() {
                let h: T = w.iter().zip(vi).map(|(a, b)| *a * *b).sum();
                hess[i][k] = h;
                w.iter_mut().zip(vi).for_each(|(wj, vj)| *wj = *wj - h * *vj);
            }
            let wn = norm2(&w);
            hess[k + 1][k] = wn;
            for i in 0..k {
                let t = cs[i] * hess[i][k] + sn[i] * hess[i + 1][k];
                hess[i + 1][k] = -sn[i] * hess[i][k] + cs[i] * hess[i + 1][k];
                hess[i][k] = t;
            }
            let denom = (hess[k][k] * hess[k][k] + hess[k + 1][k] * hess[k + 1][k]).sqrt();
            if denom == T::zero() {
                break;
            }
            cs[k] = hess[k][k] / denom;
            sn[k] = hess[k + 1][k] / denom;
            hess[k][k] = denom;
            hess[k + 1][k] = T::zero();
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            used = k + 1;
            iterations += 1;
            if g[k + 1].abs() <= opts.relative_tolerance * bnorm * T::lit(0.1) || wn == T::zero() {
                break;
            }
            basis.push(w.iter().map(|v| *v / wn).collect());
        }
        let mut y = vec![T::zero(); used];
        for i in (0..used).rev() {
            let mut s = g[i];
            for j in i + 1..used {
                s = s - hess[i][j] * y[j];
            }
            y[i] = s / hess[i][i];
        }
        for (yi, vi) in y.iter().zip(&basis) {
            for ((xj, vj), dj) in x.iter_mut().zip(vi).zip(&inv_diag) {
                *xj = *xj + *yi * *vj * *dj;
            }
        }
        if used == 0 {
            let rnorm = norm2(&residual(a, &x, b));
            return Err(Error::NoConvergence {
                residual: (rnorm / bnorm).as_f64(),
                iterations,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_on_diagonally_dominant_system() {
        let n = 50;
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, 4.0));
            trip.push((i, (i + 1) % n, -1.0));
            trip.push((i, (i + n - 1) % n, -1.5));
        }
        let a = SparseMatrix::from_triplets(n, n, &trip).unwrap();
        let xs: Vec<f64> = (0..n).map(|i| (0.3 * i as f64).cos()).collect();
        let b = a.matvec(&xs);
        let x = gmres(&a, &b, None, &GmresOptions::default()).unwrap();
        let r = residual(&a, &x, &b);
        assert!(norm2(&r) <= 1e-12 * norm2(&b));
    }

    #[test]
    fn reports_non_convergence() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        let opts = GmresOptions {
            restart: 2,
            max_iterations: 10,
            relative_tolerance: 1e-12,
        };
        assert!(matches!(
            gmres(&a, &[1.0, 2.0], None, &opts),
            Err(Error::NoConvergence { .. })
        ));
    }
}
