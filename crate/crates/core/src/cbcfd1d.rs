//! Crank–Nicolson block-centered stepper for the 1D no-flux problem.
//!
//! Unknowns at each step are the cell pressures `P^{n+1}` and the interior
//! face values of `U~^{n+1} = -a p_x`. The mass equation
//!
//! ```text
//! (psi_hat P^{n+1} - psi_hat P^n) / dt + delta_x U^{n+1/2} = psi_tilde f^{n+1/2}
//! ```
//!
//! is closed with the constitutive relation `delta_x P^{n+1} = -psi (U~^{n+1}/a)`
//! on interior faces, and the total flux is expanded as
//! `U^{n+1/2} = (1/2 + dt/4 b/a) (U~^n + U~^{n+1}) + dt S^n` where `S^n` is the
//! memory sum kept in [`HistoryState`]. With [`Stencil::Classical`] every
//! compact operator becomes the identity.
//!
//! Pressures and interior velocities are interleaved
//! (`P_0, U~_1, P_1, U~_2, ..., P_{M-1}`) so the system is banded with
//! half-bandwidth 6, coming from the four-point `psi_hat` closures.

use crate::error::{Error, Result};
use crate::grid::{CellField1D, FaceField1D, StaggeredGrid1D};
use crate::linsolve::{solve_tridiagonal, BandedMatrix, SparseMatrix};
use crate::memory::HistoryState;
use crate::mms::{error_report_1d, ErrorReport};
use crate::ops::{noflux, psi_weights, Stencil};
use crate::problem::{time_steps, ProblemSpec1D};
use crate::scalar::{max_abs, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct StepperState1D<T> {
    pub step: usize,
    pub time: T,
    pub pressure: CellField1D<T>,
    /// `U~` on all faces; both boundary faces are exactly zero.
    pub velocity: FaceField1D<T>,
    pub history: HistoryState<T>,
}

impl<T: Scalar> StepperState1D<T> {
    /// Total flux `U^n = U~^n + dt S^n`.
    pub fn total_flux(&self) -> FaceField1D<T> {
        let mut out = self.velocity.clone();
        for (u, m) in out.values_mut().iter_mut().zip(self.history.memory_flux()) {
            *u = *u + m;
        }
        out
    }
}

/// Position of each unknown in the interleaved ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout1D {
    cells: usize,
}

impl Layout1D {
    pub fn new(cells: usize) -> Self {
        Self { cells }
    }

    pub fn unknowns(&self) -> usize {
        2 * self.cells - 1
    }

    pub fn pressure(&self, c: usize) -> usize {
        2 * c
    }

    /// Interior face `f` in `1..M`.
    pub fn velocity(&self, f: usize) -> usize {
        debug_assert!(f >= 1 && f < self.cells);
        2 * f - 1
    }
}

/// One step's linear system in interleaved ordering.
#[derive(Debug, Clone)]
pub struct LinearSystem1D<T> {
    pub matrix: SparseMatrix<T>,
    pub rhs: Vec<T>,
    pub layout: Layout1D,
}

impl<T: Scalar> LinearSystem1D<T> {
    /// Splits a solution vector into pressure and face velocity fields.
    pub fn unpack(&self, grid: StaggeredGrid1D<T>, x: &[T]) -> Result<(CellField1D<T>, FaceField1D<T>)> {
        let m = grid.cells();
        if x.len() != self.layout.unknowns() {
            return Err(Error::Shape("solution vector length".into()));
        }
        let p = (0..m).map(|c| x[self.layout.pressure(c)]).collect();
        let mut u = vec![T::zero(); m + 1];
        for f in 1..m {
            u[f] = x[self.layout.velocity(f)];
        }
        Ok((CellField1D::from_values(grid, p)?, FaceField1D::from_values(grid, u)?))
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput1D<T> {
    pub state: StepperState1D<T>,
    pub errors: Option<ErrorReport<T>>,
}

/// A configured 1D scheme: problem, grid, time step and stencil set.
#[derive(Debug, Clone)]
pub struct Scheme1D<T> {
    spec: ProblemSpec1D<T>,
    grid: StaggeredGrid1D<T>,
    dt: T,
    steps: usize,
    stencil: Stencil,
    a_faces: Vec<T>,
    mass: SparseMatrix<T>,
    face_op: SparseMatrix<T>,
    d_cells: SparseMatrix<T>,
    d_faces: SparseMatrix<T>,
    replay: bool,
}

impl<T: Scalar> Scheme1D<T> {
    pub fn new(spec: ProblemSpec1D<T>, cells: usize, dt: T, stencil: Stencil) -> Result<Self> {
        spec.validate()?;
        let grid = StaggeredGrid1D::new(spec.length, cells)?;
        let steps = time_steps(spec.final_time, dt)?;
        let a_faces = grid.face_coords().into_iter().map(|x| (spec.a)(x)).collect();
        Ok(Self {
            mass: noflux::mass_operator_matrix(stencil, &grid),
            face_op: noflux::face_operator_matrix(stencil, &grid),
            d_cells: noflux::delta_x_to_cells_matrix(&grid),
            d_faces: noflux::delta_x_to_faces_matrix(&grid),
            spec,
            grid,
            dt,
            steps,
            stencil,
            a_faces,
            replay: false,
        })
    }

    /// Keep per-step memory samples so the history sum can be replayed.
    pub fn with_history_replay(mut self, on: bool) -> Self {
        self.replay = on;
        self
    }

    pub fn grid(&self) -> &StaggeredGrid1D<T> {
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

    pub fn spec(&self) -> &ProblemSpec1D<T> {
        &self.spec
    }

    /// Solves the discrete constitutive relation `psi (U~/a) = -delta_x P`
    /// on interior faces with zero boundary values.
    pub fn init_utilde(&self, p0: &CellField1D<T>) -> Result<FaceField1D<T>> {
        let m = self.grid.cells();
        let grad = noflux::delta_x_to_faces(p0);
        let rhs: Vec<T> = grad.values()[1..m].iter().map(|g| -*g).collect();
        let scaled = match self.stencil {
            Stencil::Compact => {
                let (off, diag) = psi_weights::<T>();
                solve_tridiagonal(off, diag, off, &rhs)?
            }
            Stencil::Classical => rhs,
        };
        let mut u = vec![T::zero(); m + 1];
        for f in 1..m {
            u[f] = self.a_faces[f] * scaled[f - 1];
        }
        FaceField1D::from_values(self.grid, u)
    }

    pub fn initial_state(&self) -> Result<StepperState1D<T>> {
        let p0 = CellField1D::from_fn(self.grid, |x| (self.spec.initial_pressure)(x));
        let velocity = self.init_utilde(&p0)?;
        let faces = self.grid.faces();
        Ok(StepperState1D {
            step: 0,
            time: T::zero(),
            pressure: p0,
            velocity,
            history: if self.replay {
                HistoryState::with_replay(faces, self.dt)
            } else {
                HistoryState::new(faces, self.dt)
            },
        })
    }

    fn half_time(&self, state: &StepperState1D<T>) -> T {
        (T::from_count(state.step) + T::lit(0.5)) * self.dt
    }

    fn b_faces(&self, t: T) -> Vec<T> {
        self.grid.face_coords().into_iter().map(|x| (self.spec.b)(x, t)).collect()
    }

    /// `1/2 + dt/4 b/a` on every face.
    fn flux_weights(&self, b: &[T]) -> Vec<T> {
        let quarter = self.dt / T::lit(4.0);
        b.iter()
            .zip(&self.a_faces)
            .map(|(b, a)| T::lit(0.5) + quarter * *b / *a)
            .collect()
    }

    /// Compact (or identity) interpolation of the forcing at `t`.
    pub fn interpolated_forcing(&self, t: T) -> Result<CellField1D<T>> {
        let fc = CellField1D::from_fn(self.grid, |x| (self.spec.forcing)(x, t));
        let ff = FaceField1D::from_fn(self.grid, |x| (self.spec.forcing)(x, t));
        noflux::forcing_operator(self.stencil, &fc, &ff)
    }

    pub fn assemble_step_system(&self, state: &StepperState1D<T>) -> Result<LinearSystem1D<T>> {
        let m = self.grid.cells();
        let t_half = self.half_time(state);
        let weights = self.flux_weights(&self.b_faces(t_half));
        let inv_dt = T::one() / self.dt;

        let mass_block = self.mass.scale(inv_dt);
        let flux_block = self.d_cells.slice(0..m, 1..m).scale_columns(&weights[1..m]);
        let grad_block = self.d_faces.slice(1..m, 0..m);
        let inv_a: Vec<T> = self.a_faces[1..m].iter().map(|a| T::one() / *a).collect();
        let constitutive_block = self.face_op.slice(1..m, 1..m).scale_columns(&inv_a);
        let block = SparseMatrix::from_blocks(&[
            vec![Some(&mass_block), Some(&flux_block)],
            vec![Some(&grad_block), Some(&constitutive_block)],
        ])?;

        let layout = Layout1D::new(m);
        let new_of: Vec<usize> = (0..m)
            .map(|c| layout.pressure(c))
            .chain((1..m).map(|f| layout.velocity(f)))
            .collect();
        let matrix = block.permute(&new_of);

        let memory = state.history.memory_flux();
        let known_flux: Vec<T> = (0..=m)
            .map(|f| weights[f] * state.velocity[f] + memory[f])
            .collect();
        let div_known = self.d_cells.matvec(&known_flux);
        let mass_old = self.mass.matvec(state.pressure.values());
        let forcing = self.interpolated_forcing(t_half)?;
        let mut rhs = vec![T::zero(); layout.unknowns()];
        for c in 0..m {
            rhs[layout.pressure(c)] = mass_old[c] * inv_dt + forcing[c] - div_known[c];
        }
        Ok(LinearSystem1D { matrix, rhs, layout })
    }

    /// Advances one time level given the solved `(P^{n+1}, U~^{n+1})`.
    fn finish_step(
        &self,
        state: &StepperState1D<T>,
        pressure: CellField1D<T>,
        velocity: FaceField1D<T>,
    ) -> Result<StepperState1D<T>> {
        let b_mid = self.b_faces(self.half_time(state));
        let history = state.history.advanced(
            &b_mid,
            &self.a_faces,
            state.velocity.values(),
            velocity.values(),
        )?;
        Ok(StepperState1D {
            step: state.step + 1,
            time: T::from_count(state.step + 1) * self.dt,
            pressure,
            velocity,
            history,
        })
    }

    /// Builds a state at level `n + 1` from an externally computed solution
    /// vector of [`assemble_step_system`](Self::assemble_step_system).
    pub fn state_from_solution(
        &self,
        state: &StepperState1D<T>,
        system: &LinearSystem1D<T>,
        x: &[T],
    ) -> Result<StepperState1D<T>> {
        let (p, u) = system.unpack(self.grid, x)?;
        self.finish_step(state, p, u)
    }

    pub fn step(&self, state: &StepperState1D<T>) -> Result<StepperState1D<T>> {
        let wrap = |e: Error| Error::Step {
            step: state.step,
            source: Box::new(e),
        };
        let system = self.assemble_step_system(state).map_err(wrap)?;
        let x = BandedMatrix::from_sparse(&system.matrix)
            .and_then(|band| band.solve(&system.rhs))
            .map_err(wrap)?;
        self.state_from_solution(state, &system, &x).map_err(wrap)
    }

    /// Matrix-free residual of the mass and constitutive equations between two
    /// consecutive levels: the largest absolute equation defect.
    pub fn residual(&self, old: &StepperState1D<T>, new: &StepperState1D<T>) -> Result<T> {
        let m = self.grid.cells();
        let t_half = self.half_time(old);
        let b_mid = self.b_faces(t_half);
        let half = T::lit(0.5);
        let memory = old.history.memory_flux();
        let mut u_half = FaceField1D::zeros(self.grid);
        for f in 0..=m {
            let avg = half * (old.velocity[f] + new.velocity[f]);
            u_half[f] = avg + memory[f] + half * self.dt * b_mid[f] / self.a_faces[f] * avg;
        }
        let mass_new = noflux::mass_operator(self.stencil, &new.pressure);
        let mass_old = noflux::mass_operator(self.stencil, &old.pressure);
        let div = noflux::delta_x_to_cells(&u_half);
        let forcing = self.interpolated_forcing(t_half)?;
        let mass_defect = (0..m)
            .map(|c| ((mass_new[c] - mass_old[c]) / self.dt + div[c] - forcing[c]).abs())
            .fold(T::zero(), T::max);

        let mut scaled = new.velocity.clone();
        for f in 0..=m {
            scaled[f] = scaled[f] / self.a_faces[f];
        }
        let interp = noflux::face_operator(self.stencil, &scaled);
        let grad = noflux::delta_x_to_faces(&new.pressure);
        let const_defect = (1..m)
            .map(|f| (grad[f] + interp[f]).abs())
            .fold(T::zero(), T::max);
        Ok(mass_defect.max(const_defect))
    }

    /// Relative defect of the discrete mass balance
    /// `h sum psi_hat P^{n+1} - h sum psi_hat P^n = dt h sum psi_tilde f^{n+1/2}`.
    pub fn mass_balance_defect(&self, old: &StepperState1D<T>, new: &StepperState1D<T>) -> Result<T> {
        let h = self.grid.h();
        let mass_new = noflux::mass_operator(self.stencil, &new.pressure);
        let mass_old = noflux::mass_operator(self.stencil, &old.pressure);
        let forcing = self.interpolated_forcing(self.half_time(old))?;
        let sum = |v: &[T]| h * v.iter().copied().sum::<T>();
        let abs_sum = |v: &[T]| h * v.iter().map(|x| x.abs()).sum::<T>();
        let lhs = sum(mass_new.values()) - sum(mass_old.values());
        let rhs = self.dt * sum(forcing.values());
        let scale = abs_sum(mass_new.values()) + abs_sum(mass_old.values()) + self.dt * abs_sum(forcing.values());
        if scale == T::zero() {
            return Ok((lhs - rhs).abs());
        }
        Ok((lhs - rhs).abs() / scale)
    }

    /// Runs to the final time, calling `observer(old, new)` after every step.
    pub fn run_observed(
        &self,
        mut observer: impl FnMut(&StepperState1D<T>, &StepperState1D<T>) -> Result<()>,
    ) -> Result<RunOutput1D<T>> {
        let mut state = self.initial_state()?;
        for _ in 0..self.steps {
            let next = self.step(&state)?;
            observer(&state, &next)?;
            state = next;
        }
        let errors = self.spec.exact.as_ref().map(|_| error_report_1d(&state, &self.spec)).transpose()?;
        Ok(RunOutput1D { state, errors })
    }

    pub fn run(&self) -> Result<RunOutput1D<T>> {
        self.run_observed(|_, _| Ok(()))
    }
}

/// Runs `spec` on `cells` cells with step `dt` and returns the final state
/// and, when the exact solution is known, the error norms.
pub fn run<T: Scalar>(spec: &ProblemSpec1D<T>, cells: usize, dt: T, stencil: Stencil) -> Result<RunOutput1D<T>> {
    Scheme1D::new(spec.clone(), cells, dt, stencil)?.run()
}

/// Largest entry of `|A x - b|` scaled by the data, for checking solves.
pub fn solve_residual<T: Scalar>(system: &LinearSystem1D<T>, x: &[T]) -> T {
    let r: Vec<T> = system
        .matrix
        .matvec(x)
        .iter()
        .zip(&system.rhs)
        .map(|(a, b)| *a - *b)
        .collect();
    max_abs(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsolve::dense_oracle_solve;
    use crate::problem::Fn1;
    use std::sync::Arc;

    fn constant_problem(p: f64, a: f64) -> ProblemSpec1D<f64> {
        ProblemSpec1D {
            length: 1.0,
            final_time: 1.0,
            a: Arc::new(move |_| a),
            b: Arc::new(|x, t| 1.0 + 0.5 * x * t),
            forcing: Arc::new(|_, _| 0.0),
            initial_pressure: Arc::new(move |_| p),
            exact: None,
        }
    }

    #[test]
    fn layout_is_interleaved() {
        let l = Layout1D::new(4);
        assert_eq!(l.unknowns(), 7);
        assert_eq!((l.pressure(0), l.velocity(1), l.pressure(1), l.velocity(3), l.pressure(3)), (0, 1, 2, 5, 6));
    }

    #[test]
    fn constant_pressure_gives_zero_velocity() {
        let s = Scheme1D::new(constant_problem(2.0, 1.0), 8, 0.125, Stencil::Compact).unwrap();
        let st = s.initial_state().unwrap();
        assert!(st.velocity.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn linear_pressure_initial_velocity_matches_dense_solve() {
        let mut spec = constant_problem(0.0, 1.0);
        spec.initial_pressure = Arc::new(|x| x) as Fn1<f64>;
        let m = 8;
        let s = Scheme1D::new(spec, m, 0.125, Stencil::Compact).unwrap();
        let st = s.initial_state().unwrap();
        // Dense psi with zero boundary data, right-hand side -1.
        let n = m - 1;
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = 22.0 / 24.0;
            if i > 0 {
                a[i][i - 1] = 1.0 / 24.0;
            }
            if i + 1 < n {
                a[i][i + 1] = 1.0 / 24.0;
            }
        }
        let expect = dense_oracle_solve(&a, &vec![-1.0; n]).unwrap();
        for f in 1..m {
            assert!((st.velocity[f] - expect[f - 1]).abs() < 1e-14);
        }
        assert!((st.velocity[1] + 1.0).abs() > 1e-3, "boundary data must enter the stencil");
        assert_eq!(st.velocity.boundary_values(), (0.0, 0.0));
    }

    #[test]
    fn constant_state_is_steady() {
        for stencil in [Stencil::Compact, Stencil::Classical] {
            let s = Scheme1D::new(constant_problem(3.0, 0.7), 10, 0.01, stencil).unwrap();
            let mut st = s.initial_state().unwrap();
            for _ in 0..100 {
                st = s.step(&st).unwrap();
            }
            assert!(st.pressure.values().iter().all(|p| (p - 3.0).abs() < 1e-12));
            assert!(st.velocity.values().iter().all(|u| u.abs() < 1e-12));
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let s = Scheme1D::new(constant_problem(0.0, 1.0), 6, 0.1, Stencil::Compact).unwrap();
        let out = s.run().unwrap();
        assert!(out.state.pressure.values().iter().all(|p| *p == 0.0));
        assert!(out.errors.is_none());
        assert_eq!(out.state.step, 10);
    }

    #[test]
    fn non_integer_step_count_is_rejected() {
        assert!(matches!(
            Scheme1D::new(constant_problem(0.0, 1.0), 6, 0.3, Stencil::Compact),
            Err(Error::TimeStep(_))
        ));
    }
}
