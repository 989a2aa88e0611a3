//! Reference dense LU with partial pivoting.
//!
//! Only meant as a brute-force oracle for small systems. It is generic over
//! any signed ordered field, so the same code runs on `f64` and on exact
//! rationals.

use crate::error::{Error, Result};
use num_traits::{Num, Signed};

/// Solves `a x = rhs` by Gaussian elimination with partial pivoting.
pub fn dense_oracle_solve<T>(a: &[Vec<T>], rhs: &[T]) -> Result<Vec<T>>
where
    T: Num + Signed + PartialOrd + Clone,
{
    let n = rhs.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!("dense system is not {n}x{n}")));
    }
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut b = rhs.to_vec();

    for k in 0..n {
        let mut p = k;
        let mut pivot_abs = T::zero();
        for (r, row) in m.iter().enumerate().skip(k) {
            let v = row[k].abs();
            if v > pivot_abs {
                p = r;
                pivot_abs = v;
            }
        }
        if pivot_abs.is_zero() {
            return Err(Error::SingularPivot { index: k });
        }
        m.swap(k, p);
        b.swap(k, p);
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for (r, row) in rest.iter_mut().enumerate() {
            let factor = row[k].clone() / pivot_row[k].clone();
            if factor.is_zero() {
                continue;
            }
            for c in k..n {
                row[c] = row[c].clone() - factor.clone() * pivot_row[c].clone();
            }
            b[k + 1 + r] = b[k + 1 + r].clone() - factor * b[k].clone();
        }
    }

    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut s = b[k].clone();
        for c in k + 1..n {
            s = s - m[k][c].clone() * x[c].clone();
        }
        x[k] = s / m[k][k].clone();
    }
    Ok(x)
}
