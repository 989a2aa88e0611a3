//! Difference operators and the three-point compact interpolation operators
//! `psi`, `psi_tilde` and `psi_hat`, each available as a matrix-free kernel
//! and as a sparse matrix for implicit assembly.
//!
//! The interior stencil of every compact operator is `(g[-1] + 22 g[0] + g[1]) / 24`,
//! i.e. `I + h^2/24 delta^2`. Near no-flux boundaries `psi_tilde` uses the
//! Simpson closure `(g_{1/2} + 4 g_1 + g_{3/2}) / 6`, which reads the face
//! values bracketing the first (last) cell, and `psi_hat` the one-sided
//! closure `(26 g_1 - 5 g_2 + 4 g_3 - g_4) / 24`, mirrored at the right end.

use crate::error::{Error, Result};
use crate::grid::{Axis, CellField1D, CellField2D, FaceField1D, FaceField2D, StaggeredGrid1D, StaggeredGrid2D};
use crate::linsolve::SparseMatrix;
use crate::scalar::Scalar;

/// Boundary treatment an operator is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorVariant {
    NoFlux1D,
    Periodic1D,
    Periodic2DAxisX,
    Periodic2DAxisY,
}

impl OperatorVariant {
    /// Fewest points the variant supports along its axis.
    pub fn min_points(self) -> usize {
        match self {
            OperatorVariant::NoFlux1D => 4,
            _ => 3,
        }
    }
}

/// Interpolation stencils a scheme is built from. `Classical` replaces every
/// compact operator by the identity, which yields the second-order
/// block-centered scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Stencil {
    #[default]
    Compact,
    Classical,
}

impl Stencil {
    pub fn label(self) -> &'static str {
        match self {
            Stencil::Compact => "cbcfd",
            Stencil::Classical => "bcfd",
        }
    }
}

pub(crate) fn psi_weights<T: Scalar>() -> (T, T) {
    (T::lit(1.0) / T::lit(24.0), T::lit(22.0) / T::lit(24.0))
}

pub(crate) fn hat_closure<T: Scalar>() -> [T; 4] {
    [26.0, -5.0, 4.0, -1.0].map(|w| T::lit(w) / T::lit(24.0))
}

#[inline]
fn psi3<T: Scalar>(left: T, mid: T, right: T) -> T {
    (left + T::lit(22.0) * mid + right) / T::lit(24.0)
}

/// No-flux 1D operators on [`CellField1D`] / [`FaceField1D`].
pub mod noflux {
    use super::*;

    /// `delta_x w_i = (w_{i+1/2} - w_{i-1/2}) / h`, faces to cells.
    pub fn delta_x_to_cells<T: Scalar>(w: &FaceField1D<T>) -> CellField1D<T> {
        let grid = *w.grid();
        let h = grid.h();
        let v = w.values();
        let out = (0..grid.cells()).map(|c| (v[c + 1] - v[c]) / h).collect();
        CellField1D::from_values(grid, out).expect("length matches grid")
    }

    /// `delta_x q_{i+1/2} = (q_{i+1} - q_i) / h` on interior faces; boundary faces are zero.
    pub fn delta_x_to_faces<T: Scalar>(q: &CellField1D<T>) -> FaceField1D<T> {
        let grid = *q.grid();
        let h = grid.h();
        let v = q.values();
        let m = grid.cells();
        let mut out = vec![T::zero(); m + 1];
        for f in 1..m {
            out[f] = (v[f] - v[f - 1]) / h;
        }
        FaceField1D::from_values(grid, out).expect("length matches grid")
    }

    /// Compact `psi_x` on interior faces. Boundary faces are passed through
    /// unchanged; they enter the interior stencils as supplied data.
    pub fn psi_x_faces<T: Scalar>(g: &FaceField1D<T>) -> FaceField1D<T> {
        let grid = *g.grid();
        let v = g.values();
        let m = grid.cells();
        let mut out = v.to_vec();
        for f in 1..m {
            out[f] = psi3(v[f - 1], v[f], v[f + 1]);
        }
        FaceField1D::from_values(grid, out).expect("length matches grid")
    }

    /// `psi_tilde_x` on cells. `faces` supplies the face samples of the same
    /// function; only the four faces bracketing the end cells are read.
    pub fn psi_tilde_x<T: Scalar>(g: &CellField1D<T>, faces: &FaceField1D<T>) -> Result<CellField1D<T>> {
        if g.grid() != faces.grid() {
            return Err(Error::Contract(
                "psi_tilde needs face data on the grid of the cell field".into(),
            ));
        }
        let grid = *g.grid();
        let m = grid.cells();
        let v = g.values();
        let fv = faces.values();
        let six = T::lit(6.0);
        let four = T::lit(4.0);
        let mut out = vec![T::zero(); m];
        out[0] = (fv[0] + four * v[0] + fv[1]) / six;
        out[m - 1] = (fv[m - 1] + four * v[m - 1] + fv[m]) / six;
        for c in 1..m - 1 {
            out[c] = psi3(v[c - 1], v[c], v[c + 1]);
        }
        CellField1D::from_values(grid, out)
    }

    /// `psi_hat_x` on cells with the one-sided four-point closures.
    pub fn psi_hat_x<T: Scalar>(g: &CellField1D<T>) -> CellField1D<T> {
        let grid = *g.grid();
        let m = grid.cells();
        let v = g.values();
        let w = hat_closure::<T>();
        let mut out = vec![T::zero(); m];
        out[0] = (0..4).map(|k| w[k] * v[k]).sum();
        out[m - 1] = (0..4).map(|k| w[k] * v[m - 1 - k]).sum();
        for c in 1..m - 1 {
            out[c] = psi3(v[c - 1], v[c], v[c + 1]);
        }
        CellField1D::from_values(grid, out).expect("length matches grid")
    }

    /// Applies `psi_hat_x` or, for the classical stencil, the identity.
    pub fn mass_operator<T: Scalar>(stencil: Stencil, g: &CellField1D<T>) -> CellField1D<T> {
        match stencil {
            Stencil::Compact => psi_hat_x(g),
            Stencil::Classical => g.clone(),
        }
    }

    /// Applies `psi_tilde_x` or, for the classical stencil, the identity.
    pub fn forcing_operator<T: Scalar>(
        stencil: Stencil,
        g: &CellField1D<T>,
        faces: &FaceField1D<T>,
    ) -> Result<CellField1D<T>> {
        match stencil {
            Stencil::Compact => psi_tilde_x(g, faces),
            Stencil::Classical => Ok(g.clone()),
        }
    }

    /// Applies `psi_x` on faces or, for the classical stencil, the identity.
    pub fn face_operator<T: Scalar>(stencil: Stencil, g: &FaceField1D<T>) -> FaceField1D<T> {
        match stencil {
            Stencil::Compact => psi_x_faces(g),
            Stencil::Classical => g.clone(),
        }
    }

    /// `M x (M+1)` matrix of [`delta_x_to_cells`].
    pub fn delta_x_to_cells_matrix<T: Scalar>(grid: &StaggeredGrid1D<T>) -> SparseMatrix<T> {
        let inv_h = T::one() / grid.h();
        let trip: Vec<_> = (0..grid.cells())
            .flat_map(|c| [(c, c + 1, inv_h), (c, c, -inv_h)])
            .collect();
        SparseMatrix::from_triplets(grid.cells(), grid.faces(), &trip).expect("in range")
    }

    /// `(M+1) x M` matrix of [`delta_x_to_faces`]; boundary rows are empty.
    pub fn delta_x_to_faces_matrix<T: Scalar>(grid: &StaggeredGrid1D<T>) -> SparseMatrix<T> {
        let inv_h = T::one() / grid.h();
        let trip: Vec<_> = (1..grid.cells())
            .flat_map(|f| [(f, f, inv_h), (f, f - 1, -inv_h)])
            .collect();
        SparseMatrix::from_triplets(grid.faces(), grid.cells(), &trip).expect("in range")
    }

    /// `(M+1) x (M+1)` matrix of [`face_operator`].
    pub fn face_operator_matrix<T: Scalar>(stencil: Stencil, grid: &StaggeredGrid1D<T>) -> SparseMatrix<T> {
        let m = grid.cells();
        if stencil == Stencil::Classical {
            return SparseMatrix::identity(m + 1);
        }
        let (off, diag) = psi_weights::<T>();
        let mut trip = vec![(0, 0, T::one()), (m, m, T::one())];
        for f in 1..m {
            trip.extend([(f, f - 1, off), (f, f, diag), (f, f + 1, off)]);
        }
        SparseMatrix::from_triplets(m + 1, m + 1, &trip).expect("in range")
    }

    /// `M x M` matrix of [`mass_operator`].
    pub fn mass_operator_matrix<T: Scalar>(stencil: Stencil, grid: &StaggeredGrid1D<T>) -> SparseMatrix<T> {
        let m = grid.cells();
        if stencil == Stencil::Classical {
            return SparseMatrix::identity(m);
        }
        let (off, diag) = psi_weights::<T>();
        let w = hat_closure::<T>();
        let mut trip = Vec::new();
        for k in 0..4 {
            trip.push((0, k, w[k]));
            trip.push((m - 1, m - 1 - k, w[k]));
        }
        for c in 1..m - 1 {
            trip.extend([(c, c - 1, off), (c, c, diag), (c, c + 1, off)]);
        }
        SparseMatrix::from_triplets(m, m, &trip).expect("in range")
    }

    /// `psi_tilde_x` split as `cells_part * g_cells + faces_part * g_faces`.
    pub fn psi_tilde_x_matrices<T: Scalar>(grid: &StaggeredGrid1D<T>) -> (SparseMatrix<T>, SparseMatrix<T>) {
        let m = grid.cells();
        let (off, diag) = psi_weights::<T>();
        let sixth = T::one() / T::lit(6.0);
        let two_thirds = T::lit(4.0) / T::lit(6.0);
        let mut cells = vec![(0, 0, two_thirds), (m - 1, m - 1, two_thirds)];
        for c in 1..m - 1 {
            cells.extend([(c, c - 1, off), (c, c, diag), (c, c + 1, off)]);
        }
        let faces = [(0, 0, sixth), (0, 1, sixth), (m - 1, m - 1, sixth), (m - 1, m, sixth)];
        (
            SparseMatrix::from_triplets(m, m, &cells).expect("in range"),
            SparseMatrix::from_triplets(m, m + 1, &faces).expect("in range"),
        )
    }
}

/// Three-point periodic operators along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodicOp {
    Identity,
    /// `(g[-1] + 22 g[0] + g[1]) / 24`.
    Psi,
    /// `psi_hat` with periodic wraparound, written as `I + h^2/24 delta^2`.
    PsiHat,
    /// `psi_tilde` with periodic wraparound, written as `I + h^2/24 delta^2`.
    PsiTilde,
}

impl PeriodicOp {
    /// The operator a stencil set uses in place of `psi`.
    pub fn for_stencil(stencil: Stencil) -> Self {
        match stencil {
            Stencil::Compact => PeriodicOp::Psi,
            Stencil::Classical => PeriodicOp::Identity,
        }
    }

    /// `(left, center, right)` weights for spacing `h`.
    pub fn weights<T: Scalar>(self, h: T) -> (T, T, T) {
        match self {
            PeriodicOp::Identity => (T::zero(), T::one(), T::zero()),
            PeriodicOp::Psi => {
                let (off, diag) = psi_weights::<T>();
                (off, diag, off)
            }
            PeriodicOp::PsiHat | PeriodicOp::PsiTilde => {
                let s = h * h / T::lit(24.0);
                let inv_h2 = T::one() / (h * h);
                let off = s * inv_h2;
                (off, T::one() - s * T::lit(2.0) * inv_h2, off)
            }
        }
    }

    /// Applies the operator to one periodic line.
    pub fn apply_line<T: Scalar>(self, line: &[T], h: T) -> Vec<T> {
        let n = line.len();
        match self {
            PeriodicOp::Identity => line.to_vec(),
            PeriodicOp::Psi => (0..n)
                .map(|i| psi3(line[(i + n - 1) % n], line[i], line[(i + 1) % n]))
                .collect(),
            PeriodicOp::PsiHat | PeriodicOp::PsiTilde => {
                let s = h * h / T::lit(24.0);
                (0..n)
                    .map(|i| {
                        let d2 = (line[(i + n - 1) % n] - T::lit(2.0) * line[i] + line[(i + 1) % n]) / (h * h);
                        line[i] + s * d2
                    })
                    .collect()
            }
        }
    }

    /// Circulant `n x n` matrix of the operator.
    pub fn matrix<T: Scalar>(self, n: usize, h: T) -> SparseMatrix<T> {
        if self == PeriodicOp::Identity {
            return SparseMatrix::identity(n);
        }
        let (l, c, r) = self.weights(h);
        let trip: Vec<_> = (0..n)
            .flat_map(|i| [(i, (i + n - 1) % n, l), (i, i, c), (i, (i + 1) % n, r)])
            .collect();
        SparseMatrix::from_triplets(n, n, &trip).expect("in range")
    }
}

/// Periodic difference operators on one line.
pub mod periodic {
    use super::*;

    /// Faces to cells: `out[c] = (w[c+1] - w[c]) / h`, face `c` being the left face of cell `c`.
    pub fn delta_to_cells<T: Scalar>(w: &[T], h: T) -> Vec<T> {
        let n = w.len();
        (0..n).map(|c| (w[(c + 1) % n] - w[c]) / h).collect()
    }

    /// Cells to faces: `out[f] = (q[f] - q[f-1]) / h`.
    pub fn delta_to_faces<T: Scalar>(q: &[T], h: T) -> Vec<T> {
        let n = q.len();
        (0..n).map(|f| (q[f] - q[(f + n - 1) % n]) / h).collect()
    }

    pub fn delta_to_cells_matrix<T: Scalar>(n: usize, h: T) -> SparseMatrix<T> {
        let inv_h = T::one() / h;
        let trip: Vec<_> = (0..n)
            .flat_map(|c| [(c, (c + 1) % n, inv_h), (c, c, -inv_h)])
            .collect();
        SparseMatrix::from_triplets(n, n, &trip).expect("in range")
    }

    pub fn delta_to_faces_matrix<T: Scalar>(n: usize, h: T) -> SparseMatrix<T> {
        let inv_h = T::one() / h;
        let trip: Vec<_> = (0..n)
            .flat_map(|f| [(f, f, inv_h), (f, (f + n - 1) % n, -inv_h)])
            .collect();
        SparseMatrix::from_triplets(n, n, &trip).expect("in range")
    }
}

/// Applies a 1D periodic operator along `axis` of a row-major 2D array.
pub fn apply_along_axis<T: Scalar>(op: PeriodicOp, grid: &StaggeredGrid2D<T>, axis: Axis, values: &[T]) -> Vec<T> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = vec![T::zero(); values.len()];
    match axis {
        Axis::X => {
            let mut line = vec![T::zero(); nx];
            for j in 0..ny {
                for i in 0..nx {
                    line[i] = values[grid.index(i, j)];
                }
                for (i, v) in op.apply_line(&line, grid.hx()).into_iter().enumerate() {
                    out[grid.index(i, j)] = v;
                }
            }
        }
        Axis::Y => {
            for i in 0..nx {
                let row = &values[grid.index(i, 0)..grid.index(i, 0) + ny];
                out[grid.index(i, 0)..grid.index(i, 0) + ny].copy_from_slice(&op.apply_line(row, grid.hy()));
            }
        }
    }
    out
}

/// Lifts a 1D operator matrix acting along `axis` to the 2D row-major layout.
pub fn on_axis<T: Scalar>(grid: &StaggeredGrid2D<T>, axis: Axis, line_op: &SparseMatrix<T>) -> SparseMatrix<T> {
    match axis {
        Axis::X => line_op.kron(&SparseMatrix::identity(grid.ny())),
        Axis::Y => SparseMatrix::identity(grid.nx()).kron(line_op),
    }
}

/// Applies `x_op` along x and then `y_op` along y (e.g. `psi_x psi_y`).
pub fn compose_xy<T: Scalar>(x_op: PeriodicOp, y_op: PeriodicOp, field: &CellField2D<T>) -> CellField2D<T> {
    let grid = *field.grid();
    let after_x = apply_along_axis(x_op, &grid, Axis::X, field.values());
    let out = apply_along_axis(y_op, &grid, Axis::Y, &after_x);
    CellField2D::from_values(grid, out).expect("length matches grid")
}

/// Same composition applied in the opposite order (y first).
pub fn compose_yx<T: Scalar>(x_op: PeriodicOp, y_op: PeriodicOp, field: &CellField2D<T>) -> CellField2D<T> {
    let grid = *field.grid();
    let after_y = apply_along_axis(y_op, &grid, Axis::Y, field.values());
    let out = apply_along_axis(x_op, &grid, Axis::X, &after_y);
    CellField2D::from_values(grid, out).expect("length matches grid")
}

/// Faces of orientation `w.axis()` to cells: `delta_x U^x` or `delta_y U^y`.
pub fn delta_to_cells_2d<T: Scalar>(w: &FaceField2D<T>) -> CellField2D<T> {
    let grid = *w.grid();
    let axis = w.axis();
    let (nx, ny) = (grid.nx(), grid.ny());
    let h = grid.spacing(axis);
    let v = w.values();
    let mut out = vec![T::zero(); grid.len()];
    for i in 0..nx {
        for j in 0..ny {
            let next = match axis {
                Axis::X => grid.index((i + 1) % nx, j),
                Axis::Y => grid.index(i, (j + 1) % ny),
            };
            out[grid.index(i, j)] = (v[next] - v[grid.index(i, j)]) / h;
        }
    }
    CellField2D::from_values(grid, out).expect("length matches grid")
}

/// Cells to faces of orientation `axis`: `delta_x P` on x-faces or `delta_y P` on y-faces.
pub fn delta_to_faces_2d<T: Scalar>(q: &CellField2D<T>, axis: Axis) -> FaceField2D<T> {
    let grid = *q.grid();
    let (nx, ny) = (grid.nx(), grid.ny());
    let h = grid.spacing(axis);
    let v = q.values();
    let mut out = vec![T::zero(); grid.len()];
    for i in 0..nx {
        for j in 0..ny {
            let prev = match axis {
                Axis::X => grid.index((i + nx - 1) % nx, j),
                Axis::Y => grid.index(i, (j + ny - 1) % ny),
            };
            out[grid.index(i, j)] = (v[grid.index(i, j)] - v[prev]) / h;
        }
    }
    FaceField2D::from_values(grid, axis, out).expect("length matches grid")
}

/// Applies `op` along the face's own axis (`psi_x` on x-faces, `psi_y` on y-faces).
pub fn face_op_2d<T: Scalar>(op: PeriodicOp, w: &FaceField2D<T>) -> FaceField2D<T> {
    let grid = *w.grid();
    let out = apply_along_axis(op, &grid, w.axis(), w.values());
    FaceField2D::from_values(grid, w.axis(), out).expect("length matches grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn grid(m: usize) -> StaggeredGrid1D<f64> {
        StaggeredGrid1D::new(1.0, m).unwrap()
    }

    #[test]
    fn delta_examples() {
        let g = grid(4);
        let w = FaceField1D::from_values(g, vec![0.0, 1.0, 3.0, 2.0, 0.0]).unwrap();
        assert_eq!(noflux::delta_x_to_cells(&w).values(), &[4.0, 8.0, -4.0, -8.0]);
        let q = CellField1D::from_values(g, vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        assert_eq!(noflux::delta_x_to_faces(&q).values(), &[0.0, 4.0, 8.0, 16.0, 0.0]);

        let lin = FaceField1D::from_fn(g, |x| x);
        for v in noflux::delta_x_to_cells(&lin).values() {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let c = CellField1D::from_fn(g, |_| 3.0);
        assert!(noflux::delta_x_to_faces(&c).values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn psi_examples() {
        let g = grid(4);
        let w = FaceField1D::from_values(g, vec![0.0, 1.0, 2.0, 3.0, 0.0]).unwrap();
        assert!((noflux::psi_x_faces(&w)[2] - 2.0).abs() < 1e-15);
        let c = FaceField1D::from_fn(g, |_| 2.5);
        assert!(noflux::psi_x_faces(&c).values().iter().all(|v| (v - 2.5).abs() < 1e-15));
        let lin = FaceField1D::from_fn(grid(9), |x| 3.0 * x - 1.0);
        let out = noflux::psi_x_faces(&lin);
        for f in 1..9 {
            assert!((out[f] - lin[f]).abs() < 1e-14);
        }
    }

    #[test]
    fn psi_tilde_examples() {
        let g = grid(5);
        let cells = CellField1D::from_values(g, vec![0.0, 0.0, 24.0, 0.0, 0.0]).unwrap();
        let faces = FaceField1D::zeros(g);
        let out = noflux::psi_tilde_x(&cells, &faces).unwrap();
        assert!((out[2] - 22.0).abs() < 1e-13);

        let c = CellField1D::from_fn(g, |_| 1.5);
        let cf = FaceField1D::from_fn(g, |_| 1.5);
        let out = noflux::psi_tilde_x(&c, &cf).unwrap();
        assert!(out.values().iter().all(|v| (v - 1.5).abs() < 1e-15));

        let other = FaceField1D::zeros(grid(6));
        assert!(matches!(noflux::psi_tilde_x(&c, &other), Err(Error::Contract(_))));
    }

    #[test]
    fn psi_hat_examples() {
        let g = grid(6);
        let c = CellField1D::from_fn(g, |_| -2.0);
        assert!(noflux::psi_hat_x(&c).values().iter().all(|v| (v + 2.0).abs() < 1e-14));

        let ramp = CellField1D::from_values(g, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let out = noflux::psi_hat_x(&ramp);
        assert!((out[0] - 1.0).abs() < 1e-15);
        // Linear data is reproduced everywhere, closures included.
        for c in 0..6 {
            assert!((out[c] - ramp[c]).abs() < 1e-14);
        }
    }

    #[test]
    fn kernels_agree_with_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let g = grid(13);
        let cells: Vec<f64> = (0..13).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let faces: Vec<f64> = (0..14).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cf = CellField1D::from_values(g, cells.clone()).unwrap();
        let ff = FaceField1D::from_values(g, faces.clone()).unwrap();

        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-14 * (1.0 + x.abs()));
        assert!(close(noflux::delta_x_to_cells(&ff).values(), &noflux::delta_x_to_cells_matrix(&g).matvec(&faces)));
        assert!(close(noflux::delta_x_to_faces(&cf).values(), &noflux::delta_x_to_faces_matrix(&g).matvec(&cells)));
        assert!(close(noflux::psi_x_faces(&ff).values(), &noflux::face_operator_matrix(Stencil::Compact, &g).matvec(&faces)));
        assert!(close(noflux::psi_hat_x(&cf).values(), &noflux::mass_operator_matrix(Stencil::Compact, &g).matvec(&cells)));
        let (tc, tf) = noflux::psi_tilde_x_matrices(&g);
        let tilde: Vec<f64> = tc.matvec(&cells).iter().zip(tf.matvec(&faces)).map(|(a, b)| a + b).collect();
        assert!(close(noflux::psi_tilde_x(&cf, &ff).unwrap().values(), &tilde));

        for op in [PeriodicOp::Identity, PeriodicOp::Psi, PeriodicOp::PsiHat, PeriodicOp::PsiTilde] {
            assert!(close(&op.apply_line(&cells, 0.1), &op.matrix(13, 0.1).matvec(&cells)));
        }
        assert!(close(&periodic::delta_to_cells(&cells, 0.1), &periodic::delta_to_cells_matrix(13, 0.1).matvec(&cells)));
        assert!(close(&periodic::delta_to_faces(&cells, 0.1), &periodic::delta_to_faces_matrix(13, 0.1).matvec(&cells)));
    }

    #[test]
    fn collapsed_periodic_operators_match_psi() {
        let h = 1.0 / 7.0;
        let psi = PeriodicOp::Psi.matrix::<f64>(7, h);
        for op in [PeriodicOp::PsiHat, PeriodicOp::PsiTilde] {
            let m = op.matrix(7, h);
            assert!(m.same_pattern(&psi));
            for (a, b) in m.triplets().zip(psi.triplets()) {
                assert!((a.2 - b.2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn compose_identity_and_constant() {
        let g = StaggeredGrid2D::new(1.0f64, 2.0, 5, 4).unwrap();
        let f = CellField2D::from_fn(g, |x, y| x * y + 1.0);
        assert_eq!(compose_xy(PeriodicOp::Identity, PeriodicOp::Identity, &f), f);
        let c = CellField2D::from_fn(g, |_, _| 7.0);
        let out = compose_xy(PeriodicOp::Psi, PeriodicOp::Psi, &c);
        assert!(out.values().iter().all(|v| (v - 7.0).abs() < 1e-14));
    }

    #[test]
    fn two_d_axis_kernels_match_lifted_matrices() {
        let g = StaggeredGrid2D::new(1.0f64, 1.0, 5, 6).unwrap();
        let f = CellField2D::from_fn(g, |x, y| (3.0 * x).sin() + (5.0 * y).cos() * x);
        for axis in [Axis::X, Axis::Y] {
            let n = if axis == Axis::X { 5 } else { 6 };
            let h = g.spacing(axis);
            let lifted = on_axis(&g, axis, &PeriodicOp::Psi.matrix(n, h));
            let direct = apply_along_axis(PeriodicOp::Psi, &g, axis, f.values());
            for (a, b) in direct.iter().zip(lifted.matvec(f.values())) {
                assert!((a - b).abs() < 1e-14);
            }
            let faces = delta_to_faces_2d(&f, axis);
            let lifted = on_axis(&g, axis, &periodic::delta_to_faces_matrix(n, h));
            for (a, b) in faces.values().iter().zip(lifted.matvec(f.values())) {
                assert!((a - b).abs() < 1e-12);
            }
            let back = delta_to_cells_2d(&faces);
            let lifted = on_axis(&g, axis, &periodic::delta_to_cells_matrix(n, h));
            for (a, b) in back.values().iter().zip(lifted.matvec(faces.values())) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
