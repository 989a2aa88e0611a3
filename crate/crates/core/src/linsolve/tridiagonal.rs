//! Constant-coefficient tridiagonal solves for the compact interpolation
//! operators: plain Thomas sweep and the periodic (cyclic) variant.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves `sub x[i-1] + diag x[i] + sup x[i+1] = rhs[i]` with zero values
/// beyond both ends.
pub fn solve_tridiagonal<T: Scalar>(sub: T, diag: T, sup: T, rhs: &[T]) -> Result<Vec<T>> {
    let n = rhs.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut denom = diag;
    for i in 0..n {
        if i > 0 {
            denom = diag - sub * c[i - 1];
        }
        if denom == T::zero() {
            return Err(Error::SingularPivot { index: i });
        }
        c[i] = sup / denom;
        let prev = if i > 0 { sub * d[i - 1] } else { T::zero() };
        d[i] = (rhs[i] - prev) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    Ok(d)
}

/// Periodic variant: row `i` couples `x[i-1 mod n]`, `x[i]`, `x[i+1 mod n]`.
/// Uses the Sherman–Morrison correction of the open tridiagonal system.
pub fn solve_cyclic_tridiagonal<T: Scalar>(sub: T, diag: T, sup: T, rhs: &[T]) -> Result<Vec<T>> {
    let n = rhs.len();
    if n < 3 {
        return Err(Error::Shape(format!("cyclic system needs n >= 3, got {n}")));
    }
    let gamma = -diag;
    // Modified matrix with corners folded into the diagonal.
    let mut diag_mod = vec![diag; n];
    diag_mod[0] = diag - gamma;
    diag_mod[n - 1] = diag - sup * sub / gamma;
    let y = thomas_varying(sub, &diag_mod, sup, rhs)?;
    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = sup;
    let z = thomas_varying(sub, &diag_mod, sup, &u)?;
    let vy = y[0] + sub / gamma * y[n - 1];
    let vz = z[0] + sub / gamma * z[n - 1];
    let denom = T::one() + vz;
    if denom == T::zero() {
        return Err(Error::SingularPivot { index: n - 1 });
    }
    let factor = vy / denom;
    Ok(y.iter().zip(&z).map(|(a, b)| *a - factor * *b).collect())
}

fn thomas_varying<T: Scalar>(sub: T, diag: &[T], sup: T, rhs: &[T]) -> Result<Vec<T>> {
    let n = rhs.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    for i in 0..n {
        let denom = if i > 0 { diag[i] - sub * c[i - 1] } else { diag[0] };
        if denom == T::zero() {
            return Err(Error::SingularPivot { index: i });
        }
        c[i] = sup / denom;
        let prev = if i > 0 { sub * d[i - 1] } else { T::zero() };
        d[i] = (rhs[i] - prev) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(sub: f64, diag: f64, sup: f64, x: &[f64], periodic: bool) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { x[i - 1] } else if periodic { x[n - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] } else if periodic { x[0] } else { 0.0 };
                sub * left + diag * x[i] + sup * right
            })
            .collect()
    }

    #[test]
    fn open_system_round_trip() {
        let x: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).sin()).collect();
        let b = apply(1.0 / 24.0, 22.0 / 24.0, 1.0 / 24.0, &x, false);
        let y = solve_tridiagonal(1.0 / 24.0, 22.0 / 24.0, 1.0 / 24.0, &b).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn cyclic_system_round_trip() {
        for n in [3, 4, 7, 16] {
            let x: Vec<f64> = (0..n).map(|i| (i as f64 * 1.3).cos() + 0.1).collect();
            let b = apply(1.0 / 24.0, 22.0 / 24.0, 1.0 / 24.0, &x, true);
            let y = solve_cyclic_tridiagonal(1.0 / 24.0, 22.0 / 24.0, 1.0 / 24.0, &b).unwrap();
            for (a, b) in x.iter().zip(&y) {
                assert!((a - b).abs() < 1e-14, "n = {n}");
            }
        }
    }
}
