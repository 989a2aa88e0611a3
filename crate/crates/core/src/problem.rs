//! Problem descriptions: coefficients, forcing, initial data and optional
//! exact solution for the 1D no-flux and 2D periodic flow models.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Fn1<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
pub type Fn2<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;
pub type Fn3<T> = Arc<dyn Fn(T, T, T) -> T + Send + Sync>;

/// Exact `(p, u~)` for a 1D problem, with `u~ = -a p_x`.
#[derive(Clone)]
pub struct ExactSolution1D<T> {
    pub pressure: Fn2<T>,
    pub velocity: Fn2<T>,
}

/// `p_t + u_x = f`, `u = -a p_x - int_0^t b p_x ds` on `(0, L)` with `u~ = 0`
/// at both ends.
#[derive(Clone)]
pub struct ProblemSpec1D<T> {
    pub length: T,
    pub final_time: T,
    /// `a(x) > 0`.
    pub a: Fn1<T>,
    /// `b(x, t)`.
    pub b: Fn2<T>,
    /// `f(x, t)`.
    pub forcing: Fn2<T>,
    pub initial_pressure: Fn1<T>,
    pub exact: Option<ExactSolution1D<T>>,
}

impl<T> std::fmt::Debug for ProblemSpec1D<T>
where
    T: std::fmt::Debug,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec1D")
            .field("length", &self.length)
            .field("final_time", &self.final_time)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

const VALIDATION_SAMPLES: usize = 257;

impl<T: Scalar> ProblemSpec1D<T> {
    /// Samples `a` for positivity and checks the no-flux compatibility of the
    /// initial data. Returns human-readable warnings for soft violations.
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.length > T::zero() && self.final_time > T::zero()) {
            return Err(Error::Contract("length and final time must be positive".into()));
        }
        for s in 0..VALIDATION_SAMPLES {
            let x = self.length * T::from_count(s) / T::from_count(VALIDATION_SAMPLES - 1);
            let a = (self.a)(x);
            if !(a > T::zero() && a.is_finite()) {
                return Err(Error::Contract(format!("a({x}) = {a} is not positive")));
            }
        }
        let mut warnings = Vec::new();
        let eps = T::lit(1e-6) * self.length;
        for (x, inward) in [(T::zero(), eps), (self.length, -eps)] {
            let slope = ((self.initial_pressure)(x + inward) - (self.initial_pressure)(x)) / inward;
            let flux = -(self.a)(x) * slope;
            if flux.abs() > T::lit(1e-8) {
                warnings.push(format!("initial flux -a p0' = {flux:e} at x = {x} is not zero"));
            }
        }
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok(warnings)
    }
}

/// Exact `(p, u~^x, u~^y)` for a 2D problem.
#[derive(Clone)]
pub struct ExactSolution2D<T> {
    pub pressure: Fn3<T>,
    pub velocity_x: Fn3<T>,
    pub velocity_y: Fn3<T>,
}

/// `p_t + div u = f`, `u = -(A grad p + int_0^t B grad p ds)` with diagonal
/// `A`, `B` on a periodic rectangle.
#[derive(Clone)]
pub struct ProblemSpec2D<T> {
    pub lx: T,
    pub ly: T,
    pub final_time: T,
    pub ax: Fn2<T>,
    pub ay: Fn2<T>,
    pub bx: Fn3<T>,
    pub by: Fn3<T>,
    pub forcing: Fn3<T>,
    pub initial_pressure: Fn2<T>,
    pub exact: Option<ExactSolution2D<T>>,
    /// Set when neither `b^x` nor `b^y` depends on time; the step matrix is
    /// then factored once and reused.
    pub time_independent_b: bool,
}

impl<T> std::fmt::Debug for ProblemSpec2D<T>
where
    T: std::fmt::Debug,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec2D")
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .field("final_time", &self.final_time)
            .field("time_independent_b", &self.time_independent_b)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl<T: Scalar> ProblemSpec2D<T> {
    /// Positivity of `a^x`, `a^y` on a sample lattice and periodicity of the
    /// coefficients and initial data across both seams.
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.lx > T::zero() && self.ly > T::zero() && self.final_time > T::zero()) {
            return Err(Error::Contract("domain sizes and final time must be positive".into()));
        }
        let n = 33;
        let mut warnings = Vec::new();
        let tol = T::lit(1e-10);
        let t = self.final_time;
        for s in 0..n {
            for r in 0..n {
                let x = self.lx * T::from_count(s) / T::from_count(n - 1);
                let y = self.ly * T::from_count(r) / T::from_count(n - 1);
                for (name, v) in [("a^x", (self.ax)(x, y)), ("a^y", (self.ay)(x, y))] {
                    if !(v > T::zero() && v.is_finite()) {
                        return Err(Error::Contract(format!("{name}({x}, {y}) = {v} is not positive")));
                    }
                }
            }
            let u = self.ly * T::from_count(s) / T::from_count(n - 1);
            let v = self.lx * T::from_count(s) / T::from_count(n - 1);
            let checks = [
                ("p0", (self.initial_pressure)(T::zero(), u) - (self.initial_pressure)(self.lx, u)),
                ("p0", (self.initial_pressure)(v, T::zero()) - (self.initial_pressure)(v, self.ly)),
                ("a^x", (self.ax)(T::zero(), u) - (self.ax)(self.lx, u)),
                ("a^y", (self.ay)(v, T::zero()) - (self.ay)(v, self.ly)),
                ("b^x", (self.bx)(T::zero(), u, t) - (self.bx)(self.lx, u, t)),
                ("b^y", (self.by)(v, T::zero(), t) - (self.by)(v, self.ly, t)),
                ("f", (self.forcing)(T::zero(), u, t) - (self.forcing)(self.lx, u, t)),
                ("f", (self.forcing)(v, T::zero(), t) - (self.forcing)(v, self.ly, t)),
            ];
            for (name, gap) in checks {
                if gap.abs() > tol {
                    warnings.push(format!("{name} is not periodic: seam gap {gap:e}"));
                }
            }
        }
        warnings.dedup();
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok(warnings)
    }
}

/// Number of uniform steps covering `[0, final_time]`; `final_time / dt`
/// must be an integer up to rounding.
pub fn time_steps<T: Scalar>(final_time: T, dt: T) -> Result<usize> {
    if !(dt > T::zero() && dt.is_finite()) {
        return Err(Error::TimeStep(format!("dt must be positive, got {dt}")));
    }
    let ratio = final_time / dt;
    let steps = ratio.round();
    if steps < T::one() || (ratio - steps).abs() > T::lit(1e-8) * ratio.max(T::one()) {
        return Err(Error::TimeStep(format!(
            "final time {final_time} is not an integer multiple of dt = {dt}"
        )));
    }
    steps
        .to_usize()
        .ok_or_else(|| Error::TimeStep(format!("step count {steps} out of range")))
}
