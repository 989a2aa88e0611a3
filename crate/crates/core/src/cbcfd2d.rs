//! Crank–Nicolson block-centered stepper on a doubly periodic rectangle.
//!
//! Unknowns are the cell pressures and the x- and y-face values of
//! `U~ = -A grad p`. Per step the mass equation
//!
//! ```text
//! psi_hat_x psi_hat_y (P^{n+1} - P^n) / dt
//!     + psi_y delta_x U^{x,n+1/2} + psi_x delta_y U^{y,n+1/2} = psi_tilde_x psi_tilde_y f^{n+1/2}
//! ```
//!
//! is coupled with `delta_x P + psi_x (U~^x / a^x) = 0` on x-faces and the
//! analogous y relation. The block system (pressure, x-velocity, y-velocity)
//! is solved by sparse LU in a nested-dissection order that keeps the three
//! unknowns of a cell together. Between steps the matrix only changes through
//! the memory weights, so by default the last factorization is reused inside
//! iterative refinement and rebuilt when refinement stops converging.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::grid::{Axis, CellField2D, FaceField2D, StaggeredGrid2D};
use crate::linsolve::{
    gmres, solve_cyclic_tridiagonal, GmresOptions, SparseBackend, SparseLu, SparseMatrix,
    DIAGONAL_PIVOT_THRESHOLD,
};
use crate::memory::HistoryState;
use crate::mms::{error_report_2d, ErrorReport};
use crate::ops::{self, on_axis, periodic, psi_weights, PeriodicOp, Stencil};
use crate::problem::{time_steps, ProblemSpec2D};
use crate::scalar::{max_abs, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct StepperState2D<T> {
    pub step: usize,
    pub time: T,
    pub pressure: CellField2D<T>,
    pub velocity_x: FaceField2D<T>,
    pub velocity_y: FaceField2D<T>,
    pub history_x: HistoryState<T>,
    pub history_y: HistoryState<T>,
}

impl<T: Scalar> StepperState2D<T> {
    /// Total fluxes `U^n = U~^n + dt S^n` on x- and y-faces.
    pub fn total_flux(&self) -> (FaceField2D<T>, FaceField2D<T>) {
        let add = |u: &FaceField2D<T>, h: &HistoryState<T>| {
            let mut out = u.clone();
            for (v, m) in out.values_mut().iter_mut().zip(h.memory_flux()) {
                *v = *v + m;
            }
            out
        };
        (add(&self.velocity_x, &self.history_x), add(&self.velocity_y, &self.history_y))
    }
}

/// One step's block system `[P; U~^x; U~^y]`.
#[derive(Debug, Clone)]
pub struct LinearSystem2D<T> {
    pub matrix: SparseMatrix<T>,
    pub rhs: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct RunOutput2D<T> {
    pub state: StepperState2D<T>,
    pub errors: Option<ErrorReport<T>>,
}

/// Cell order for nested dissection of a `nx x ny` grid, periodic in both
/// directions. Separators are emitted after the parts they split.
pub fn nested_dissection_cells(nx: usize, ny: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(nx * ny);
    let mut seams = Vec::new();
    // Cutting one column and one row turns the torus into a plain rectangle.
    seams.extend(0..ny);
    seams.extend((1..nx).map(|i| i * ny));
    dissect(1, nx, 1, ny, ny, &mut order);
    order.extend(seams);
    order
}

fn dissect(i0: usize, i1: usize, j0: usize, j1: usize, ny: usize, out: &mut Vec<usize>) {
    let (w, h) = (i1.saturating_sub(i0), j1.saturating_sub(j0));
    if w == 0 || h == 0 {
        return;
    }
    if w * h <= 6 || (w < 3 && h < 3) {
        for i in i0..i1 {
            out.extend((j0..j1).map(|j| i * ny + j));
        }
        return;
    }
    if w >= h {
        let mid = i0 + w / 2;
        dissect(i0, mid, j0, j1, ny, out);
        dissect(mid + 1, i1, j0, j1, ny, out);
        out.extend((j0..j1).map(|j| mid * ny + j));
    } else {
        let mid = j0 + h / 2;
        dissect(i0, i1, j0, mid, ny, out);
        dissect(i0, i1, mid + 1, j1, ny, out);
        out.extend((i0..i1).map(|i| i * ny + mid));
    }
}

/// When the direct backend refactors the step matrix.
///
/// With time-independent memory coefficients the matrix never changes and a
/// single factorization is always reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorizationPolicy {
    /// Reuse the latest factorization as the solver inside iterative
    /// refinement against the current matrix; refactor when refinement
    /// stops contracting.
    #[default]
    Reuse,
    /// Factor the current matrix at every step.
    EveryStep,
}

#[derive(Debug)]
struct Factorization<T> {
    rows: Vec<T>,
    lu: SparseLu<T>,
}

impl<T: Scalar> Factorization<T> {
    fn apply(&self, rhs: &[T]) -> Result<Vec<T>> {
        let scaled: Vec<T> = rhs.iter().zip(&self.rows).map(|(b, r)| *b * *r).collect();
        self.lu.solve(&scaled)
    }
}

const MAX_REFINEMENT_STEPS: usize = 12;

/// Iterative refinement of `a x = b` with an approximate factorization,
/// starting from `f^{-1} b`. `None` when it does not converge.
fn refine<T: Scalar>(a: &SparseMatrix<T>, b: &[T], f: &Factorization<T>) -> Result<Option<Vec<T>>> {
    let x = f.apply(b)?;
    Ok(refine_from(a, b, f, x)?.ok())
}

/// Refines `x` until the backward error reaches a few ulps. `Err(x)` carries
/// the last iterate when the corrections stop shrinking.
fn refine_from<T: Scalar>(
    a: &SparseMatrix<T>,
    b: &[T],
    f: &Factorization<T>,
    mut x: Vec<T>,
) -> Result<std::result::Result<Vec<T>, Vec<T>>> {
    let tol = T::epsilon() * T::lit(32.0);
    let norm_a = a.norm_inf();
    let norm_b = max_abs(b);
    let mut last = T::infinity();
    for _ in 0..MAX_REFINEMENT_STEPS {
        let r: Vec<T> = b.iter().zip(a.matvec(&x)).map(|(b, ax)| *b - ax).collect();
        let backward = max_abs(&r) / (norm_a * max_abs(&x) + norm_b).max(T::min_positive_value());
        if backward <= tol {
            return Ok(Ok(x));
        }
        if backward > T::lit(0.5) * last {
            return Ok(Err(x));
        }
        last = backward;
        let d = f.apply(&r)?;
        for (xi, di) in x.iter_mut().zip(d) {
            *xi = *xi + di;
        }
    }
    Ok(Err(x))
}

#[derive(Debug)]
pub struct Scheme2D<T> {
    spec: ProblemSpec2D<T>,
    grid: StaggeredGrid2D<T>,
    dt: T,
    steps: usize,
    stencil: Stencil,
    backend: SparseBackend,
    ax: Vec<T>,
    ay: Vec<T>,
    mass: SparseMatrix<T>,
    flux_x: SparseMatrix<T>,
    flux_y: SparseMatrix<T>,
    grad_x: SparseMatrix<T>,
    grad_y: SparseMatrix<T>,
    constitutive_x: SparseMatrix<T>,
    constitutive_y: SparseMatrix<T>,
    column_order: Vec<usize>,
    policy: FactorizationPolicy,
    cache: Mutex<Option<Factorization<T>>>,
    factorizations: AtomicUsize,
}

impl<T: Scalar> Scheme2D<T> {
    pub fn new(spec: ProblemSpec2D<T>, nx: usize, ny: usize, dt: T, stencil: Stencil) -> Result<Self> {
        spec.validate()?;
        let grid = StaggeredGrid2D::new(spec.lx, spec.ly, nx, ny)?;
        let steps = time_steps(spec.final_time, dt)?;
        let n = grid.len();
        let (hx, hy) = (grid.hx(), grid.hy());
        let psi = PeriodicOp::for_stencil(stencil);
        let hat = match stencil {
            Stencil::Compact => PeriodicOp::PsiHat,
            Stencil::Classical => PeriodicOp::Identity,
        };
        let lift_x = |m: SparseMatrix<T>| on_axis(&grid, Axis::X, &m);
        let lift_y = |m: SparseMatrix<T>| on_axis(&grid, Axis::Y, &m);

        let mass = lift_x(hat.matrix(nx, hx)).mul(&lift_y(hat.matrix(ny, hy)))?;
        let flux_x = lift_x(periodic::delta_to_cells_matrix(nx, hx)).mul(&lift_y(psi.matrix(ny, hy)))?;
        let flux_y = lift_x(psi.matrix(nx, hx)).mul(&lift_y(periodic::delta_to_cells_matrix(ny, hy)))?;
        let grad_x = lift_x(periodic::delta_to_faces_matrix(nx, hx));
        let grad_y = lift_y(periodic::delta_to_faces_matrix(ny, hy));

        let ax: Vec<T> = (0..n).map(|k| face_eval(&grid, Axis::X, k, |x, y| (spec.ax)(x, y))).collect();
        let ay: Vec<T> = (0..n).map(|k| face_eval(&grid, Axis::Y, k, |x, y| (spec.ay)(x, y))).collect();
        let inv = |v: &[T]| v.iter().map(|a| T::one() / *a).collect::<Vec<_>>();
        let constitutive_x = lift_x(psi.matrix(nx, hx)).scale_columns(&inv(&ax));
        let constitutive_y = lift_y(psi.matrix(ny, hy)).scale_columns(&inv(&ay));

        let column_order = nested_dissection_cells(nx, ny)
            .into_iter()
            .flat_map(|c| [c, n + c, 2 * n + c])
            .collect();

        Ok(Self {
            spec,
            grid,
            dt,
            steps,
            stencil,
            backend: SparseBackend::Direct,
            ax,
            ay,
            mass,
            flux_x,
            flux_y,
            grad_x,
            grad_y,
            constitutive_x,
            constitutive_y,
            column_order,
            policy: FactorizationPolicy::default(),
            cache: Mutex::new(None),
            factorizations: AtomicUsize::new(0),
        })
    }

    pub fn with_backend(mut self, backend: SparseBackend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_factorization_policy(mut self, policy: FactorizationPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn grid(&self) -> &StaggeredGrid2D<T> {
        &self.grid
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    pub fn spec(&self) -> &ProblemSpec2D<T> {
        &self.spec
    }

    /// Column order used by the sparse factorization.
    pub fn column_order(&self) -> &[usize] {
        &self.column_order
    }

    fn psi(&self) -> PeriodicOp {
        PeriodicOp::for_stencil(self.stencil)
    }

    fn hat(&self) -> PeriodicOp {
        match self.stencil {
            Stencil::Compact => PeriodicOp::PsiHat,
            Stencil::Classical => PeriodicOp::Identity,
        }
    }

    fn tilde(&self) -> PeriodicOp {
        match self.stencil {
            Stencil::Compact => PeriodicOp::PsiTilde,
            Stencil::Classical => PeriodicOp::Identity,
        }
    }

    /// Solves `psi_k (U~^k / a^k) = -delta_k P` line by line.
    pub fn init_utilde(&self, p0: &CellField2D<T>) -> Result<(FaceField2D<T>, FaceField2D<T>)> {
        let mut out = Vec::with_capacity(2);
        for (axis, a) in [(Axis::X, &self.ax), (Axis::Y, &self.ay)] {
            let grad = ops::delta_to_faces_2d(p0, axis);
            let neg: Vec<T> = grad.values().iter().map(|g| -*g).collect();
            let scaled = match self.stencil {
                Stencil::Compact => solve_lines(&self.grid, axis, &neg)?,
                Stencil::Classical => neg,
            };
            let vals = scaled.iter().zip(a.iter()).map(|(s, a)| *s * *a).collect();
            out.push(FaceField2D::from_values(self.grid, axis, vals)?);
        }
        let uy = out.pop().expect("two axes");
        let ux = out.pop().expect("two axes");
        Ok((ux, uy))
    }

    pub fn initial_state(&self) -> Result<StepperState2D<T>> {
        let p0 = CellField2D::from_fn(self.grid, |x, y| (self.spec.initial_pressure)(x, y));
        let (velocity_x, velocity_y) = self.init_utilde(&p0)?;
        let n = self.grid.len();
        Ok(StepperState2D {
            step: 0,
            time: T::zero(),
            pressure: p0,
            velocity_x,
            velocity_y,
            history_x: HistoryState::new(n, self.dt),
            history_y: HistoryState::new(n, self.dt),
        })
    }

    fn half_time(&self, state: &StepperState2D<T>) -> T {
        (T::from_count(state.step) + T::lit(0.5)) * self.dt
    }

    fn b_faces(&self, axis: Axis, t: T) -> Vec<T> {
        let b = match axis {
            Axis::X => &self.spec.bx,
            Axis::Y => &self.spec.by,
        };
        (0..self.grid.len())
            .map(|k| face_eval(&self.grid, axis, k, |x, y| b(x, y, t)))
            .collect()
    }

    fn flux_weights(&self, b: &[T], a: &[T]) -> Vec<T> {
        let quarter = self.dt / T::lit(4.0);
        b.iter().zip(a).map(|(b, a)| T::lit(0.5) + quarter * *b / *a).collect()
    }

    /// `psi_tilde_x psi_tilde_y f(., t)` (identity for the classical stencil).
    pub fn interpolated_forcing(&self, t: T) -> CellField2D<T> {
        let f = CellField2D::from_fn(self.grid, |x, y| (self.spec.forcing)(x, y, t));
        ops::compose_xy(self.tilde(), self.tilde(), &f)
    }

    fn step_matrix(&self, wx: &[T], wy: &[T]) -> Result<SparseMatrix<T>> {
        let mass = self.mass.scale(T::one() / self.dt);
        let fx = self.flux_x.scale_columns(wx);
        let fy = self.flux_y.scale_columns(wy);
        SparseMatrix::from_blocks(&[
            vec![Some(&mass), Some(&fx), Some(&fy)],
            vec![Some(&self.grad_x), Some(&self.constitutive_x), None],
            vec![Some(&self.grad_y), None, Some(&self.constitutive_y)],
        ])
    }

    pub fn assemble_step_system(&self, state: &StepperState2D<T>) -> Result<LinearSystem2D<T>> {
        let n = self.grid.len();
        let t_half = self.half_time(state);
        let wx = self.flux_weights(&self.b_faces(Axis::X, t_half), &self.ax);
        let wy = self.flux_weights(&self.b_faces(Axis::Y, t_half), &self.ay);
        let matrix = self.step_matrix(&wx, &wy)?;

        let known = |w: &[T], u: &FaceField2D<T>, h: &HistoryState<T>| -> Vec<T> {
            let m = h.memory_flux();
            (0..n).map(|k| w[k] * u[k] + m[k]).collect()
        };
        let div_x = self.flux_x.matvec(&known(&wx, &state.velocity_x, &state.history_x));
        let div_y = self.flux_y.matvec(&known(&wy, &state.velocity_y, &state.history_y));
        let mass_old = self.mass.matvec(state.pressure.values());
        let forcing = self.interpolated_forcing(t_half);
        let inv_dt = T::one() / self.dt;
        let mut rhs = vec![T::zero(); 3 * n];
        for c in 0..n {
            rhs[c] = mass_old[c] * inv_dt + forcing[c] - div_x[c] - div_y[c];
        }
        Ok(LinearSystem2D { matrix, rhs })
    }

    /// Row-equilibrates and factors; equilibration keeps the diagonal an
    /// acceptable pivot so the nested-dissection order survives pivoting.
    fn factor(&self, matrix: &SparseMatrix<T>) -> Result<Factorization<T>> {
        let rows = matrix.row_equilibration();
        let lu = SparseLu::factor(
            &matrix.scale_rows(&rows),
            Some(&self.column_order),
            T::lit(DIAGONAL_PIVOT_THRESHOLD),
        )?;
        self.factorizations.fetch_add(1, Ordering::Relaxed);
        Ok(Factorization { rows, lu })
    }

    /// Number of sparse LU factorizations performed so far.
    pub fn factorization_count(&self) -> usize {
        self.factorizations.load(Ordering::Relaxed)
    }

    fn solve(&self, system: &LinearSystem2D<T>) -> Result<Vec<T>> {
        if self.backend == SparseBackend::Iterative {
            return gmres(&system.matrix, &system.rhs, None, &GmresOptions::default());
        }
        let reuse = self.spec.time_independent_b || self.policy == FactorizationPolicy::Reuse;
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        if reuse {
            if let Some(f) = cache.as_ref() {
                if let Some(x) = refine(&system.matrix, &system.rhs, f)? {
                    return Ok(x);
                }
            }
        }
        let f = self.factor(&system.matrix)?;
        let x = f.apply(&system.rhs)?;
        let x = refine_from(&system.matrix, &system.rhs, &f, x)?.unwrap_or_else(|x| x);
        *cache = Some(f);
        Ok(x)
    }

    /// Builds the level `n + 1` state from a solution of
    /// [`assemble_step_system`](Self::assemble_step_system).
    pub fn state_from_solution(&self, state: &StepperState2D<T>, x: &[T]) -> Result<StepperState2D<T>> {
        let n = self.grid.len();
        if x.len() != 3 * n {
            return Err(Error::Shape("solution vector length".into()));
        }
        let pressure = CellField2D::from_values(self.grid, x[..n].to_vec())?;
        let velocity_x = FaceField2D::from_values(self.grid, Axis::X, x[n..2 * n].to_vec())?;
        let velocity_y = FaceField2D::from_values(self.grid, Axis::Y, x[2 * n..].to_vec())?;
        let t_half = self.half_time(state);
        let history_x = state.history_x.advanced(
            &self.b_faces(Axis::X, t_half),
            &self.ax,
            state.velocity_x.values(),
            velocity_x.values(),
        )?;
        let history_y = state.history_y.advanced(
            &self.b_faces(Axis::Y, t_half),
            &self.ay,
            state.velocity_y.values(),
            velocity_y.values(),
        )?;
        Ok(StepperState2D {
            step: state.step + 1,
            time: T::from_count(state.step + 1) * self.dt,
            pressure,
            velocity_x,
            velocity_y,
            history_x,
            history_y,
        })
    }

    pub fn step(&self, state: &StepperState2D<T>) -> Result<StepperState2D<T>> {
        let wrap = |e: Error| Error::Step {
            step: state.step,
            source: Box::new(e),
        };
        let system = self.assemble_step_system(state).map_err(wrap)?;
        let x = self.solve(&system).map_err(wrap)?;
        self.state_from_solution(state, &x).map_err(wrap)
    }

    /// Largest defect of the mass and constitutive equations between two
    /// consecutive levels, evaluated matrix-free.
    pub fn residual(&self, old: &StepperState2D<T>, new: &StepperState2D<T>) -> Result<T> {
        let t_half = self.half_time(old);
        let half = T::lit(0.5);
        let mid_flux = |u0: &FaceField2D<T>, u1: &FaceField2D<T>, h: &HistoryState<T>, a: &[T], axis| {
            let b = self.b_faces(axis, t_half);
            let m = h.memory_flux();
            let vals = (0..self.grid.len())
                .map(|k| {
                    let avg = half * (u0[k] + u1[k]);
                    avg + m[k] + half * self.dt * b[k] / a[k] * avg
                })
                .collect();
            FaceField2D::from_values(self.grid, axis, vals)
        };
        let ux = mid_flux(&old.velocity_x, &new.velocity_x, &old.history_x, &self.ax, Axis::X)?;
        let uy = mid_flux(&old.velocity_y, &new.velocity_y, &old.history_y, &self.ay, Axis::Y)?;
        let psi = self.psi();
        let div_x = ops::delta_to_cells_2d(&ux);
        let div_y = ops::delta_to_cells_2d(&uy);
        let div_x = ops::compose_xy(PeriodicOp::Identity, psi, &div_x);
        let div_y = ops::compose_xy(psi, PeriodicOp::Identity, &div_y);
        let mass_new = ops::compose_xy(self.hat(), self.hat(), &new.pressure);
        let mass_old = ops::compose_xy(self.hat(), self.hat(), &old.pressure);
        let forcing = self.interpolated_forcing(t_half);
        let mut worst = T::zero();
        for c in 0..self.grid.len() {
            let r = (mass_new[c] - mass_old[c]) / self.dt + div_x[c] + div_y[c] - forcing[c];
            worst = worst.max(r.abs());
        }
        for (axis, u, a) in [(Axis::X, &new.velocity_x, &self.ax), (Axis::Y, &new.velocity_y, &self.ay)] {
            let scaled: Vec<T> = u.values().iter().zip(a.iter()).map(|(u, a)| *u / *a).collect();
            let interp = ops::face_op_2d(psi, &FaceField2D::from_values(self.grid, axis, scaled)?);
            let grad = ops::delta_to_faces_2d(&new.pressure, axis);
            for k in 0..self.grid.len() {
                worst = worst.max((grad[k] + interp[k]).abs());
            }
        }
        Ok(worst)
    }

    /// Relative defect of `sum psi_hat psi_hat (P^{n+1} - P^n) = dt sum psi_tilde psi_tilde f`.
    pub fn mass_balance_defect(&self, old: &StepperState2D<T>, new: &StepperState2D<T>) -> Result<T> {
        let area = self.grid.hx() * self.grid.hy();
        let mass_new = ops::compose_xy(self.hat(), self.hat(), &new.pressure);
        let mass_old = ops::compose_xy(self.hat(), self.hat(), &old.pressure);
        let forcing = self.interpolated_forcing(self.half_time(old));
        let sum = |v: &[T]| area * v.iter().copied().sum::<T>();
        let abs_sum = |v: &[T]| area * v.iter().map(|x| x.abs()).sum::<T>();
        let lhs = sum(mass_new.values()) - sum(mass_old.values());
        let rhs = self.dt * sum(forcing.values());
        let scale = abs_sum(mass_new.values()) + abs_sum(mass_old.values()) + self.dt * abs_sum(forcing.values());
        if scale == T::zero() {
            return Ok((lhs - rhs).abs());
        }
        Ok((lhs - rhs).abs() / scale)
    }

    pub fn run_observed(
        &self,
        mut observer: impl FnMut(&StepperState2D<T>, &StepperState2D<T>) -> Result<()>,
    ) -> Result<RunOutput2D<T>> {
        let mut state = self.initial_state()?;
        for _ in 0..self.steps {
            let next = self.step(&state)?;
            observer(&state, &next)?;
            state = next;
        }
        let errors = self.spec.exact.as_ref().map(|_| error_report_2d(&state, &self.spec)).transpose()?;
        Ok(RunOutput2D { state, errors })
    }

    pub fn run(&self) -> Result<RunOutput2D<T>> {
        self.run_observed(|_, _| Ok(()))
    }
}

fn face_eval<T: Scalar>(grid: &StaggeredGrid2D<T>, axis: Axis, k: usize, f: impl Fn(T, T) -> T) -> T {
    let (i, j) = (k / grid.ny(), k % grid.ny());
    let (x, y) = grid.face_point(axis, i, j);
    f(x, y)
}

/// Inverts the periodic `psi` along every line of `axis`.
fn solve_lines<T: Scalar>(grid: &StaggeredGrid2D<T>, axis: Axis, rhs: &[T]) -> Result<Vec<T>> {
    let (off, diag) = psi_weights::<T>();
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = vec![T::zero(); rhs.len()];
    match axis {
        Axis::X => {
            for j in 0..ny {
                let line: Vec<T> = (0..nx).map(|i| rhs[grid.index(i, j)]).collect();
                for (i, v) in solve_cyclic_tridiagonal(off, diag, off, &line)?.into_iter().enumerate() {
                    out[grid.index(i, j)] = v;
                }
            }
        }
        Axis::Y => {
            for i in 0..nx {
                let s = grid.index(i, 0);
                let sol = solve_cyclic_tridiagonal(off, diag, off, &rhs[s..s + ny])?;
                out[s..s + ny].copy_from_slice(&sol);
            }
        }
    }
    Ok(out)
}

/// Runs `spec` on an `nx x ny` grid and reports errors when the exact solution is known.
pub fn run<T: Scalar>(
    spec: &ProblemSpec2D<T>,
    nx: usize,
    ny: usize,
    dt: T,
    stencil: Stencil,
) -> Result<RunOutput2D<T>> {
    Scheme2D::new(spec.clone(), nx, ny, dt, stencil)?.run()
}
