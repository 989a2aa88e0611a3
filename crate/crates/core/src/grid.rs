//! Uniform staggered grids, the discrete fields living on them, and the
//! weighted inner products used for every error and stability norm.
//!
//! Indexing is zero based throughout. In 1D, cell `c` (`0..M`) has center
//! `(c + 1/2) h` and sits between faces `c` and `c + 1`; face `f` (`0..=M`)
//! is at `f h`. In 2D the grid is periodic: x-face `(i, j)` is the left face
//! of cell `(i, j)` at `(i h, y_j)`, y-face `(i, j)` the bottom face at
//! `(x_i, j k)`. Two-dimensional arrays are row-major with `j` fastest.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Smallest cell count accepted along any axis.
pub const MIN_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaggeredGrid1D<T> {
    length: T,
    cells: usize,
    h: T,
}

impl<T: Scalar> StaggeredGrid1D<T> {
    pub fn new(length: T, cells: usize) -> Result<Self> {
        if cells < MIN_CELLS {
            return Err(Error::Grid(format!(
                "need at least {MIN_CELLS} cells, got {cells}"
            )));
        }
        if !(length.is_finite() && length > T::zero()) {
            return Err(Error::Grid(format!("domain length must be positive, got {length}")));
        }
        Ok(Self {
            length,
            cells,
            h: length / T::from_count(cells),
        })
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn faces(&self) -> usize {
        self.cells + 1
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn center(&self, c: usize) -> T {
        (T::from_count(c) + T::lit(0.5)) * self.h
    }

    pub fn face(&self, f: usize) -> T {
        T::from_count(f) * self.h
    }

    pub fn centers(&self) -> Vec<T> {
        (0..self.cells).map(|c| self.center(c)).collect()
    }

    pub fn face_coords(&self) -> Vec<T> {
        (0..=self.cells).map(|f| self.face(f)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaggeredGrid2D<T> {
    lx: T,
    ly: T,
    nx: usize,
    ny: usize,
    hx: T,
    hy: T,
}

impl<T: Scalar> StaggeredGrid2D<T> {
    pub fn new(lx: T, ly: T, nx: usize, ny: usize) -> Result<Self> {
        if nx < MIN_CELLS || ny < MIN_CELLS {
            return Err(Error::Grid(format!(
                "need at least {MIN_CELLS} cells per axis, got {nx}x{ny}"
            )));
        }
        for (name, l) in [("L1", lx), ("L2", ly)] {
            if !(l.is_finite() && l > T::zero()) {
                return Err(Error::Grid(format!("{name} must be positive, got {l}")));
            }
        }
        Ok(Self {
            lx,
            ly,
            nx,
            ny,
            hx: lx / T::from_count(nx),
            hy: ly / T::from_count(ny),
        })
    }

    pub fn lx(&self) -> T {
        self.lx
    }

    pub fn ly(&self) -> T {
        self.ly
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Cell width along x (`h`).
    pub fn hx(&self) -> T {
        self.hx
    }

    /// Cell width along y (`k`).
    pub fn hy(&self) -> T {
        self.hy
    }

    pub fn h_max(&self) -> T {
        self.hx.max(self.hy)
    }

    pub fn spacing(&self, axis: Axis) -> T {
        match axis {
            Axis::X => self.hx,
            Axis::Y => self.hy,
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of `(i, j)`; `j` runs fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    pub fn x_center(&self, i: usize) -> T {
        (T::from_count(i) + T::lit(0.5)) * self.hx
    }

    pub fn y_center(&self, j: usize) -> T {
        (T::from_count(j) + T::lit(0.5)) * self.hy
    }

    pub fn x_face(&self, i: usize) -> T {
        T::from_count(i) * self.hx
    }

    pub fn y_face(&self, j: usize) -> T {
        T::from_count(j) * self.hy
    }

    pub fn center(&self, i: usize, j: usize) -> (T, T) {
        (self.x_center(i), self.y_center(j))
    }

    /// Location of the face of the given orientation with index `(i, j)`.
    pub fn face_point(&self, axis: Axis, i: usize, j: usize) -> (T, T) {
        match axis {
            Axis::X => (self.x_face(i), self.y_center(j)),
            Axis::Y => (self.x_center(i), self.y_face(j)),
        }
    }
}

fn check_finite<T: Scalar>(values: &[T]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

fn check_len(expected: usize, got: usize, what: &str) -> Result<()> {
    if expected != got {
        return Err(Error::Shape(format!(
            "{what}: expected {expected} values, got {got}"
        )));
    }
    Ok(())
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

macro_rules! field_common {
    ($name:ident, $grid:ident) => {
        impl<T: Scalar> $name<T> {
            pub fn grid(&self) -> &$grid<T> {
                &self.grid
            }

            pub fn values(&self) -> &[T] {
                &self.values
            }

            pub fn values_mut(&mut self) -> &mut [T] {
                &mut self.values
            }

            pub fn into_values(self) -> Vec<T> {
                self.values
            }

            pub fn max_abs(&self) -> T {
                crate::scalar::max_abs(&self.values)
            }

            pub fn norm(&self) -> T {
                self.inner(self)
                    .expect("a field always matches itself")
                    .max(T::zero())
                    .sqrt()
            }

            /// Pointwise `self - other` on the same grid.
            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.check_compatible(other)?;
                let mut out = self.clone();
                out.values
                    .iter_mut()
                    .zip(&other.values)
                    .for_each(|(a, b)| *a = *a - *b);
                Ok(out)
            }
        }

        impl<T> std::ops::Index<usize> for $name<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.values[i]
            }
        }

        impl<T> std::ops::IndexMut<usize> for $name<T> {
            fn index_mut(&mut self, i: usize) -> &mut T {
                &mut self.values[i]
            }
        }
    };
}

/// Pressure-like values at the `M` cell centers of a 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField1D<T> {
    grid: StaggeredGrid1D<T>,
    values: Vec<T>,
}

impl<T: Scalar> CellField1D<T> {
    pub fn zeros(grid: StaggeredGrid1D<T>) -> Self {
        Self {
            values: vec![T::zero(); grid.cells()],
            grid,
        }
    }

    pub fn from_values(grid: StaggeredGrid1D<T>, values: Vec<T>) -> Result<Self> {
        check_len(grid.cells(), values.len(), "cell field")?;
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: StaggeredGrid1D<T>, f: impl Fn(T) -> T) -> Self {
        Self {
            values: grid.centers().into_iter().map(f).collect(),
            grid,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape("cell fields live on different grids".into()));
        }
        Ok(())
    }

    /// `(f, g) = sum_i h f_i g_i`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        Ok(self.grid.h() * dot(&self.values, &other.values))
    }
}

field_common!(CellField1D, StaggeredGrid1D);

/// Flux-like values at all `M + 1` faces of a 1D grid, boundary faces included.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField1D<T> {
    grid: StaggeredGrid1D<T>,
    values: Vec<T>,
}

impl<T: Scalar> FaceField1D<T> {
    pub fn zeros(grid: StaggeredGrid1D<T>) -> Self {
        Self {
            values: vec![T::zero(); grid.faces()],
            grid,
        }
    }

    pub fn from_values(grid: StaggeredGrid1D<T>, values: Vec<T>) -> Result<Self> {
        check_len(grid.faces(), values.len(), "face field")?;
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: StaggeredGrid1D<T>, f: impl Fn(T) -> T) -> Self {
        Self {
            values: grid.face_coords().into_iter().map(f).collect(),
            grid,
        }
    }

    /// Like [`from_fn`](Self::from_fn) but with both boundary faces forced to zero.
    pub fn from_fn_interior(grid: StaggeredGrid1D<T>, f: impl Fn(T) -> T) -> Self {
        let mut field = Self::from_fn(grid, f);
        let m = grid.cells();
        field.values[0] = T::zero();
        field.values[m] = T::zero();
        field
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn boundary_values(&self) -> (T, T) {
        (self.values[0], self.values[self.grid.cells()])
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape("face fields live on different grids".into()));
        }
        Ok(())
    }

    /// `(f, g) = sum_{interior faces} h f g`; boundary faces carry the
    /// homogeneous no-flux data and are excluded.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        let m = self.grid.cells();
        Ok(self.grid.h() * dot(&self.values[1..m], &other.values[1..m]))
    }
}

field_common!(FaceField1D, StaggeredGrid1D);

/// Cell-centered values on a periodic 2D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField2D<T> {
    grid: StaggeredGrid2D<T>,
    values: Vec<T>,
}

impl<T: Scalar> CellField2D<T> {
    pub fn zeros(grid: StaggeredGrid2D<T>) -> Self {
        Self {
            values: vec![T::zero(); grid.len()],
            grid,
        }
    }

    pub fn from_values(grid: StaggeredGrid2D<T>, values: Vec<T>) -> Result<Self> {
        check_len(grid.len(), values.len(), "2D cell field")?;
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: StaggeredGrid2D<T>, f: impl Fn(T, T) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                let (x, y) = grid.center(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape("cell fields live on different grids".into()));
        }
        Ok(())
    }

    /// `(f, g) = sum_ij h k f_ij g_ij`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        Ok(self.grid.hx() * self.grid.hy() * dot(&self.values, &other.values))
    }
}

field_common!(CellField2D, StaggeredGrid2D);

/// Periodic face values of one orientation; one value per face modulo wraparound.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField2D<T> {
    grid: StaggeredGrid2D<T>,
    axis: Axis,
    values: Vec<T>,
}

impl<T: Scalar> FaceField2D<T> {
    pub fn zeros(grid: StaggeredGrid2D<T>, axis: Axis) -> Self {
        Self {
            values: vec![T::zero(); grid.len()],
            grid,
            axis,
        }
    }

    pub fn from_values(grid: StaggeredGrid2D<T>, axis: Axis, values: Vec<T>) -> Result<Self> {
        check_len(grid.len(), values.len(), "2D face field")?;
        check_finite(&values)?;
        Ok(Self { grid, axis, values })
    }

    pub fn from_fn(grid: StaggeredGrid2D<T>, axis: Axis, f: impl Fn(T, T) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                let (x, y) = grid.face_point(axis, i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, axis, values }
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape("face fields live on different grids".into()));
        }
        if self.axis != other.axis {
            return Err(Error::Shape(format!(
                "face orientation mismatch: {:?} vs {:?}",
                self.axis, other.axis
            )));
        }
        Ok(())
    }

    /// `(f, g)_x` or `(f, g)_y`: weight `h k`, summed over exactly one period of faces.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        Ok(self.grid.hx() * self.grid.hy() * dot(&self.values, &other.values))
    }
}

field_common!(FaceField2D, StaggeredGrid2D);

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(m: usize) -> StaggeredGrid1D<f64> {
        StaggeredGrid1D::new(1.0, m).unwrap()
    }

    #[test]
    fn grid_rejects_too_few_cells() {
        assert!(matches!(StaggeredGrid1D::new(1.0, 3), Err(Error::Grid(_))));
        assert!(StaggeredGrid2D::new(1.0f64, 1.0, 4, 3).is_err());
        assert!(StaggeredGrid1D::<f64>::new(0.0, 8).is_err());
    }

    #[test]
    fn centers_bisect_faces() {
        let g = StaggeredGrid1D::new(2.5f64, 7).unwrap();
        for c in 0..7 {
            let mid = 0.5 * (g.face(c) + g.face(c + 1));
            assert!((g.center(c) - mid).abs() < 1e-15);
        }
        assert!((g.face(7) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn cell_inner_examples() {
        let ones = CellField1D::from_fn(unit(10), |_| 1.0);
        assert!((ones.inner(&ones).unwrap() - 1.0).abs() < 1e-15);
        let zeros = CellField1D::zeros(unit(10));
        assert_eq!(ones.inner(&zeros).unwrap(), 0.0);

        let x = CellField1D::from_fn(unit(4), |x| x);
        assert!((x.inner(&x).unwrap() - 0.328125).abs() < 1e-15);
        assert!((x.norm() - 0.328125f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn face_inner_excludes_boundary_faces() {
        let ones = FaceField1D::from_fn(unit(4), |_| 1.0);
        assert!((ones.inner(&ones).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn periodic_face_inner_sums_one_period() {
        let g = StaggeredGrid2D::new(1.0f64, 1.0, 4, 4).unwrap();
        let ones = FaceField2D::from_fn(g, Axis::X, |_, _| 1.0);
        assert!((ones.inner(&ones).unwrap() - 1.0).abs() < 1e-15);
        let zero = FaceField2D::zeros(g, Axis::X);
        assert_eq!(ones.inner(&zero).unwrap(), 0.0);
        let y = FaceField2D::from_fn(g, Axis::Y, |_, _| 1.0);
        assert!(matches!(ones.inner(&y), Err(Error::Shape(_))));
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = CellField1D::<f64>::zeros(unit(4));
        let b = CellField1D::<f64>::zeros(unit(5));
        assert!(matches!(a.inner(&b), Err(Error::Shape(_))));
        assert!(CellField1D::from_values(unit(4), vec![0.0; 3]).is_err());
        assert!(matches!(
            CellField1D::from_values(unit(4), vec![0.0, f64::NAN, 0.0, 0.0]),
            Err(Error::NonFinite(1))
        ));
    }

    #[test]
    fn norm_of_zero_and_unit() {
        let g = StaggeredGrid2D::new(1.0f64, 1.0, 5, 6).unwrap();
        assert_eq!(CellField2D::<f64>::zeros(g).norm(), 0.0);
        let one = CellField2D::from_fn(g, |_, _| 1.0);
        assert!((one.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let g = StaggeredGrid1D::<f32>::new(1.0, 4).unwrap();
        let x = CellField1D::from_fn(g, |x| x);
        assert!((x.inner(&x).unwrap() - 0.328125).abs() < 1e-6);
    }
}
