//! Compact block-centered finite difference (CBCFD) schemes with
//! Crank–Nicolson time stepping for non-Fickian flow with a memory term,
//!
//! ```text
//! p_t + div u = f,    u = -A grad p - int_0^t B grad p ds,
//! ```
//!
//! in 1D with no-flux walls and in 2D on a periodic rectangle, together with
//! the classical second-order baseline, a manufactured-solution catalog and
//! grid-refinement studies.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod bcfd;
pub mod cbcfd1d;
pub mod cbcfd2d;
pub mod error;
pub mod grid;
pub mod linsolve;
pub mod memory;
pub mod mms;
pub mod ops;
pub mod problem;
pub mod scalar;
pub mod study;

pub use cbcfd1d::{Scheme1D, StepperState1D};
pub use cbcfd2d::{Scheme2D, StepperState2D};
pub use error::{Error, Result};
pub use grid::{Axis, CellField1D, CellField2D, FaceField1D, FaceField2D, StaggeredGrid1D, StaggeredGrid2D};
pub use memory::HistoryState;
pub use mms::{ErrorReport, ForcingVariant, MmsProblem};
pub use ops::Stencil;
pub use problem::{ProblemSpec1D, ProblemSpec2D};
pub use scalar::Scalar;

pub type Grid1D = StaggeredGrid1D<f64>;
pub type Grid2D = StaggeredGrid2D<f64>;
pub type Problem1D = ProblemSpec1D<f64>;
pub type Problem2D = ProblemSpec2D<f64>;
pub type Cbcfd1D = Scheme1D<f64>;
pub type Cbcfd2D = Scheme2D<f64>;
pub type State1D = StepperState1D<f64>;
pub type State2D = StepperState2D<f64>;
