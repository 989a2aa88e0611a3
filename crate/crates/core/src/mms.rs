//! Manufactured solutions: the two catalog problems, a separable builder for
//! new ones, a numerical consistency check of the forcing, and error norms.
//!
//! Every catalog solution has the form `p = tau(t) phi(x)` (or
//! `tau(t) phi(x) chi(y)`) with `tau = t^m` and a memory coefficient
//! `b = b_s(x) t^k`, so the memory integral `W(t) = int_0^t s^k tau(s) ds`
//! is a single power of `t` and the forcing follows in closed form.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cbcfd1d::StepperState1D;
use crate::cbcfd2d::StepperState2D;
use crate::error::Result;
use crate::grid::{Axis, CellField1D, CellField2D, FaceField1D, FaceField2D};
use crate::problem::{ExactSolution1D, ExactSolution2D, Fn1, ProblemSpec1D, ProblemSpec2D};
use crate::scalar::Scalar;

/// Which forcing a catalog problem carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForcingVariant {
    /// `f = p_t + div u` computed from the exact solution.
    #[default]
    Derived,
    /// The closed form as printed alongside the published example.
    Printed,
}

/// Discrete L2 errors at the final level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport<T> {
    pub pressure: T,
    pub velocity: T,
}

/// A 1D or 2D problem with known exact solution.
#[derive(Debug, Clone)]
pub enum MmsProblem<T> {
    OneD(ProblemSpec1D<T>),
    TwoD(ProblemSpec2D<T>),
}

fn powi<T: Scalar>(t: T, m: u32) -> T {
    if m == 0 {
        T::one()
    } else {
        t.powi(m as i32)
    }
}

/// `d/dt t^m`.
fn dpowi<T: Scalar>(t: T, m: u32) -> T {
    if m == 0 {
        T::zero()
    } else {
        T::from_count(m as usize) * powi(t, m - 1)
    }
}

/// `int_0^t s^k s^m ds`.
fn memory_weight<T: Scalar>(t: T, m: u32, k: u32) -> T {
    powi(t, m + k + 1) / T::from_count((m + k + 1) as usize)
}

/// Spatial profile with its first two derivatives.
#[derive(Clone)]
pub struct Profile<T> {
    pub value: Fn1<T>,
    pub d1: Fn1<T>,
    pub d2: Fn1<T>,
}

impl<T: Scalar> Profile<T> {
    pub fn constant(c: T) -> Self {
        Self {
            value: Arc::new(move |_| c),
            d1: Arc::new(|_| T::zero()),
            d2: Arc::new(|_| T::zero()),
        }
    }

    /// `cos(w x)`.
    pub fn cosine(w: T) -> Self {
        Self {
            value: Arc::new(move |x: T| (w * x).cos()),
            d1: Arc::new(move |x: T| -w * (w * x).sin()),
            d2: Arc::new(move |x: T| -w * w * (w * x).cos()),
        }
    }
}

/// Builds `p = t^m phi(x)` with `a(x)`, `b(x, t) = b_s(x) t^k` on `(0, length)`.
pub fn separable_1d<T: Scalar>(
    length: T,
    final_time: T,
    m: u32,
    k: u32,
    phi: Profile<T>,
    a: Profile<T>,
    b_s: Profile<T>,
) -> ProblemSpec1D<T> {
    let (p_phi, p_d1) = (phi.value.clone(), phi.d1.clone());
    let u_a = a.value.clone();
    let f_phi = phi.clone();
    let f_a = a.clone();
    let b_val = b_s.value.clone();
    let p0_phi = phi.value.clone();
    ProblemSpec1D {
        length,
        final_time,
        a: a.value.clone(),
        b: Arc::new(move |x, t| b_val(x) * powi(t, k)),
        forcing: Arc::new(move |x, t| {
            let (v, d1, d2) = ((f_phi.value)(x), (f_phi.d1)(x), (f_phi.d2)(x));
            let flux_div = (f_a.d1)(x) * d1 + (f_a.value)(x) * d2;
            let memory_div = (b_s.d1)(x) * d1 + (b_s.value)(x) * d2;
            dpowi(t, m) * v - powi(t, m) * flux_div - memory_weight(t, m, k) * memory_div
        }),
        initial_pressure: Arc::new(move |x| powi(T::zero(), m) * p0_phi(x)),
        exact: Some(ExactSolution1D {
            pressure: Arc::new(move |x, t| powi(t, m) * p_phi(x)),
            velocity: Arc::new(move |x, t| -u_a(x) * powi(t, m) * p_d1(x)),
        }),
    }
}

/// Builds `p = t^m phi(x) chi(y)` with `A = a I`, `B = b t^k I` on a periodic rectangle.
#[allow(clippy::too_many_arguments)]
pub fn separable_2d<T: Scalar>(
    lx: T,
    ly: T,
    final_time: T,
    m: u32,
    k: u32,
    phi: Profile<T>,
    chi: Profile<T>,
    a: T,
    b: T,
) -> ProblemSpec2D<T> {
    let (fp, fc) = (phi.clone(), chi.clone());
    let (pp, pc) = (phi.value.clone(), chi.value.clone());
    let (xp, xc) = (phi.clone(), chi.clone());
    let (yp, yc) = (phi.clone(), chi.clone());
    let (ip, ic) = (phi.value.clone(), chi.value.clone());
    ProblemSpec2D {
        lx,
        ly,
        final_time,
        ax: Arc::new(move |_, _| a),
        ay: Arc::new(move |_, _| a),
        bx: Arc::new(move |_, _, t| b * powi(t, k)),
        by: Arc::new(move |_, _, t| b * powi(t, k)),
        forcing: Arc::new(move |x, y, t| {
            let value = (fp.value)(x) * (fc.value)(y);
            let laplacian = (fp.d2)(x) * (fc.value)(y) + (fp.value)(x) * (fc.d2)(y);
            dpowi(t, m) * value - (a * powi(t, m) + b * memory_weight(t, m, k)) * laplacian
        }),
        initial_pressure: Arc::new(move |x, y| powi(T::zero(), m) * ip(x) * ic(y)),
        exact: Some(ExactSolution2D {
            pressure: Arc::new(move |x, y, t| powi(t, m) * pp(x) * pc(y)),
            velocity_x: Arc::new(move |x, y, t| -a * powi(t, m) * (xp.d1)(x) * (xc.value)(y)),
            velocity_y: Arc::new(move |x, y, t| -a * powi(t, m) * (yp.value)(x) * (yc.d1)(y)),
        }),
        time_independent_b: k == 0,
    }
}

/// `g(x) = x^4 (1 - x)^4` and its derivatives.
fn quartic_bump<T: Scalar>() -> Profile<T> {
    Profile {
        value: Arc::new(|x: T| (x * (T::one() - x)).powi(4)),
        d1: Arc::new(|x: T| {
            let s = x * (T::one() - x);
            T::lit(4.0) * s.powi(3) * (T::one() - T::lit(2.0) * x)
        }),
        d2: Arc::new(|x: T| {
            let s = x * (T::one() - x);
            let ds = T::one() - T::lit(2.0) * x;
            T::lit(12.0) * s * s * ds * ds - T::lit(8.0) * s.powi(3)
        }),
    }
}

/// 1D catalog problem: `p = t x^4 (1-x)^4`, `a = 1e-8`, `b = 1` on `(0, 1)`, `T = 1`.
pub fn example1<T: Scalar>(variant: ForcingVariant) -> ProblemSpec1D<T> {
    let a = T::lit(1e-8);
    let mut spec = separable_1d(
        T::one(),
        T::one(),
        1,
        0,
        quartic_bump(),
        Profile::constant(a),
        Profile::constant(T::one()),
    );
    if variant == ForcingVariant::Printed {
        spec.forcing = Arc::new(|x: T, t: T| {
            let c = |v: f64| T::lit(v);
            let s = x * (T::one() - x);
            let t2 = t * t;
            let poly = c(3.0) - c(14.0) * x + c(11.0) * x * x - c(1.5) * t2
                + c(7.0) * x * t2
                + c(3.0) * x * x * t
                - c(7.0) * x * x * t2;
            s.powi(4) - c(4.0e-8) * s * s * poly
        });
    }
    spec
}

/// 2D catalog problem: `p = t^2 cos(2 pi x) cos(2 pi y)`, `A = I`, `B = t I`
/// on the periodic unit square, `T = 1`.
pub fn example2<T: Scalar>(variant: ForcingVariant) -> ProblemSpec2D<T> {
    let w = T::lit(2.0) * T::PI();
    let mut spec = separable_2d(
        T::one(),
        T::one(),
        T::one(),
        2,
        1,
        Profile::cosine(w),
        Profile::cosine(w),
        T::one(),
        T::one(),
    );
    if variant == ForcingVariant::Printed {
        spec.forcing = Arc::new(move |x: T, y: T, t: T| {
            let pi2 = T::PI() * T::PI();
            let coef = T::lit(2.0) * t + T::lit(8.0) * pi2 * t * t + pi2 / T::lit(2.0) * t.powi(4);
            coef * (w * x).cos() * (w * y).cos()
        });
    }
    spec
}

/// Cosine family for user studies.
///
/// 1D: `p = t^m cos(k pi x)` on `(0, 1)`, which has zero flux at both ends.
/// 2D: `p = t^m cos(2 pi k x) cos(2 pi k y)` on the periodic unit square.
/// Coefficients are `a` and `b t^q` (times the identity in 2D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineFamily<T> {
    pub a: T,
    pub b: T,
    pub b_time_power: u32,
    pub time_power: u32,
    pub wavenumber: u32,
    pub final_time: T,
}

impl<T: Scalar> CosineFamily<T> {
    pub fn one_d(&self) -> ProblemSpec1D<T> {
        let w = T::from_count(self.wavenumber as usize) * T::PI();
        separable_1d(
            T::one(),
            self.final_time,
            self.time_power,
            self.b_time_power,
            Profile::cosine(w),
            Profile::constant(self.a),
            Profile::constant(self.b),
        )
    }

    pub fn two_d(&self) -> ProblemSpec2D<T> {
        let w = T::lit(2.0) * T::from_count(self.wavenumber as usize) * T::PI();
        separable_2d(
            T::one(),
            T::one(),
            self.final_time,
            self.time_power,
            self.b_time_power,
            Profile::cosine(w),
            Profile::cosine(w),
            self.a,
            self.b,
        )
    }
}

/// Nodes and weights of `n`-point Gauss–Legendre quadrature on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Quadrature order of the memory integral in the consistency check.
pub const CONSISTENCY_QUADRATURE_POINTS: usize = 32;
/// Base step of the Richardson-extrapolated central differences.
pub const CONSISTENCY_STEP: f64 = 1e-3;

/// Central difference of `f` at `x`, extrapolated twice (sixth order).
fn derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let r = |h: f64| (4.0 * d(h / 2.0) - d(h)) / 3.0;
    (16.0 * r(h / 2.0) - r(h)) / 15.0
}

fn integrate(f: &dyn Fn(f64) -> f64, t: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(CONSISTENCY_QUADRATURE_POINTS);
    let half = 0.5 * t;
    nodes.iter().zip(&weights).map(|(s, w)| w * f(half * (s + 1.0))).sum::<f64>() * half
}

/// `|p_t + u_x - f|` at one point of a 1D problem, from the exact pressure,
/// `a` and `b` only.
pub fn consistency_residual_1d<T: Scalar>(spec: &ProblemSpec1D<T>, x: f64, t: f64) -> f64 {
    let exact = spec.exact.as_ref().expect("consistency check needs an exact solution");
    let p = |x: f64, t: f64| (exact.pressure)(T::lit(x), T::lit(t)).as_f64();
    let a = |x: f64| (spec.a)(T::lit(x)).as_f64();
    let b = |x: f64, s: f64| (spec.b)(T::lit(x), T::lit(s)).as_f64();
    let h = CONSISTENCY_STEP;
    let p_x = |x: f64, s: f64| derivative(&|y| p(y, s), x, h);
    let u = |x: f64| -a(x) * p_x(x, t) - integrate(&|s| b(x, s) * p_x(x, s), t);
    let p_t = derivative(&|s| p(x, s), t, h);
    let u_x = derivative(&u, x, h);
    let f = (spec.forcing)(T::lit(x), T::lit(t)).as_f64();
    (p_t + u_x - f).abs()
}

/// `|p_t + div u - f|` at one point of a 2D problem.
pub fn consistency_residual_2d<T: Scalar>(spec: &ProblemSpec2D<T>, x: f64, y: f64, t: f64) -> f64 {
    let exact = spec.exact.as_ref().expect("consistency check needs an exact solution");
    let p = |x: f64, y: f64, t: f64| (exact.pressure)(T::lit(x), T::lit(y), T::lit(t)).as_f64();
    let c2 = |f: &Arc<dyn Fn(T, T) -> T + Send + Sync>, x: f64, y: f64| f(T::lit(x), T::lit(y)).as_f64();
    let c3 = |f: &Arc<dyn Fn(T, T, T) -> T + Send + Sync>, x: f64, y: f64, s: f64| {
        f(T::lit(x), T::lit(y), T::lit(s)).as_f64()
    };
    let h = CONSISTENCY_STEP;
    let p_x = |x: f64, y: f64, s: f64| derivative(&|z| p(z, y, s), x, h);
    let p_y = |x: f64, y: f64, s: f64| derivative(&|z| p(x, z, s), y, h);
    let u_x = |x: f64| {
        -c2(&spec.ax, x, y) * p_x(x, y, t) - integrate(&|s| c3(&spec.bx, x, y, s) * p_x(x, y, s), t)
    };
    let u_y = |z: f64| {
        -c2(&spec.ay, x, z) * p_y(x, z, t) - integrate(&|s| c3(&spec.by, x, z, s) * p_y(x, z, s), t)
    };
    let p_t = derivative(&|s| p(x, y, s), t, h);
    let div = derivative(&u_x, x, h) + derivative(&u_y, y, h);
    let f = c3(&spec.forcing, x, y, t);
    (p_t + div - f).abs()
}

/// Largest strong-form residual over `samples` pseudo-random space-time
/// points (fixed seed, times in `[T/20, T]`).
pub fn verify_consistency<T: Scalar>(problem: &MmsProblem<T>, samples: usize) -> f64 {
    let mut rng = StdRng::seed_from_u64(0x6d6d73);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let r = match problem {
            MmsProblem::OneD(spec) => {
                let (l, tf) = (spec.length.as_f64(), spec.final_time.as_f64());
                let x = rng.gen_range(0.0..l);
                let t = rng.gen_range(tf / 20.0..=tf);
                consistency_residual_1d(spec, x, t)
            }
            MmsProblem::TwoD(spec) => {
                let x = rng.gen_range(0.0..spec.lx.as_f64());
                let y = rng.gen_range(0.0..spec.ly.as_f64());
                let tf = spec.final_time.as_f64();
                let t = rng.gen_range(tf / 20.0..=tf);
                consistency_residual_2d(spec, x, y, t)
            }
        };
        worst = worst.max(r);
    }
    worst
}

/// Pressure error at cell centers and `u~` error at interior faces.
pub fn error_report_1d<T: Scalar>(state: &StepperState1D<T>, spec: &ProblemSpec1D<T>) -> Result<ErrorReport<T>> {
    let exact = spec.exact.as_ref().expect("error report needs an exact solution");
    let grid = *state.pressure.grid();
    let t = state.time;
    let p = CellField1D::from_fn(grid, |x| (exact.pressure)(x, t));
    let u = FaceField1D::from_fn_interior(grid, |x| (exact.velocity)(x, t));
    Ok(ErrorReport {
        pressure: state.pressure.sub(&p)?.norm(),
        velocity: state.velocity.sub(&u)?.norm(),
    })
}

/// Pressure error at cell centers and the combined x/y face error
/// `sqrt(|e_x|^2 + |e_y|^2)`.
pub fn error_report_2d<T: Scalar>(state: &StepperState2D<T>, spec: &ProblemSpec2D<T>) -> Result<ErrorReport<T>> {
    let exact = spec.exact.as_ref().expect("error report needs an exact solution");
    let grid = *state.pressure.grid();
    let t = state.time;
    let p = CellField2D::from_fn(grid, |x, y| (exact.pressure)(x, y, t));
    let ux = FaceField2D::from_fn(grid, Axis::X, |x, y| (exact.velocity_x)(x, y, t));
    let uy = FaceField2D::from_fn(grid, Axis::Y, |x, y| (exact.velocity_y)(x, y, t));
    let ex = state.velocity_x.sub(&ux)?.norm();
    let ey = state.velocity_y.sub(&uy)?.norm();
    Ok(ErrorReport {
        pressure: state.pressure.sub(&p)?.norm(),
        velocity: (ex * ex + ey * ey).sqrt(),
    })
}
