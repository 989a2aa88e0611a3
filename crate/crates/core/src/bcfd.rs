//! Classical second-order block-centered baseline.
//!
//! Shares assembly, memory treatment and solvers with the compact steppers;
//! only the stencil set differs ([`Stencil::Classical`]).

use crate::cbcfd1d::{Scheme1D, StepperState1D};
use crate::cbcfd2d::{Scheme2D, StepperState2D};
use crate::error::Result;
use crate::ops::Stencil;
use crate::problem::{ProblemSpec1D, ProblemSpec2D};
use crate::scalar::Scalar;

pub fn scheme_1d<T: Scalar>(spec: ProblemSpec1D<T>, cells: usize, dt: T) -> Result<Scheme1D<T>> {
    Scheme1D::new(spec, cells, dt, Stencil::Classical)
}

pub fn scheme_2d<T: Scalar>(spec: ProblemSpec2D<T>, nx: usize, ny: usize, dt: T) -> Result<Scheme2D<T>> {
    Scheme2D::new(spec, nx, ny, dt, Stencil::Classical)
}

/// One classical step; `scheme` must have been built with [`Stencil::Classical`].
pub fn step_bcfd_1d<T: Scalar>(scheme: &Scheme1D<T>, state: &StepperState1D<T>) -> Result<StepperState1D<T>> {
    debug_assert_eq!(scheme.stencil(), Stencil::Classical);
    scheme.step(state)
}

pub fn step_bcfd_2d<T: Scalar>(scheme: &Scheme2D<T>, state: &StepperState2D<T>) -> Result<StepperState2D<T>> {
    debug_assert_eq!(scheme.stencil(), Stencil::Classical);
    scheme.step(state)
}
