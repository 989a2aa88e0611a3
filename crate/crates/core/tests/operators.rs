use cbcfd_core::grid::*;
use cbcfd_core::ops::{self, noflux, periodic, PeriodicOp, Stencil};
use proptest::prelude::*;

fn unit(m: usize) -> StaggeredGrid1D<f64> {
    StaggeredGrid1D::new(1.0, m).unwrap()
}

fn cells(m: usize) -> impl Strategy<Value = CellField1D<f64>> {
    prop::collection::vec(-10.0..10.0f64, m).prop_map(move |v| CellField1D::from_values(unit(m), v).unwrap())
}

fn interior_faces(m: usize) -> impl Strategy<Value = FaceField1D<f64>> {
    prop::collection::vec(-10.0..10.0f64, m - 1).prop_map(move |v| {
        let mut all = vec![0.0];
        all.extend(v);
        all.push(0.0);
        FaceField1D::from_values(unit(m), all).unwrap()
    })
}

fn sized_pair() -> impl Strategy<Value = (CellField1D<f64>, FaceField1D<f64>)> {
    (4usize..40).prop_flat_map(|m| (cells(m), interior_faces(m)))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn summation_by_parts((q, w) in sized_pair()) {
        let lhs = q.inner(&noflux::delta_x_to_cells(&w)).unwrap();
        let rhs = noflux::delta_x_to_faces(&q).inner(&w).unwrap();
        let scale = q.norm() * w.norm() * q.grid().cells() as f64;
        prop_assert!((lhs + rhs).abs() <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn cauchy_schwarz_and_symmetry((f, w) in sized_pair(), seed in 0u64..1000) {
        let m = f.grid().cells();
        let g = CellField1D::from_fn(*f.grid(), |x| (x * 7.0 + seed as f64).sin() * 3.0);
        let fg = f.inner(&g).unwrap();
        prop_assert!(fg.abs() <= f.norm() * g.norm() + 1e-12);
        prop_assert_eq!(fg, g.inner(&f).unwrap());
        let v = FaceField1D::from_fn_interior(unit(m), |x| (x * 5.0).cos());
        prop_assert!(w.inner(&v).unwrap().abs() <= w.norm() * v.norm() + 1e-12);
    }

    #[test]
    fn inner_products_are_bilinear(f in cells(9), g in cells(9), h in cells(9), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let mut comb = f.clone();
        for i in 0..9 {
            comb[i] = a * f[i] + b * g[i];
        }
        let lhs = comb.inner(&h).unwrap();
        let rhs = a * f.inner(&h).unwrap() + b * g.inner(&h).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn kernels_match_matrices(q in cells(11), w in interior_faces(11)) {
        let grid = *q.grid();
        for stencil in [Stencil::Compact, Stencil::Classical] {
            let by_kernel = noflux::mass_operator(stencil, &q);
            let by_matrix = noflux::mass_operator_matrix(stencil, &grid).matvec(q.values());
            prop_assert!(max_diff(by_kernel.values(), &by_matrix) < 1e-14);
            let by_kernel = noflux::face_operator(stencil, &w);
            let by_matrix = noflux::face_operator_matrix(stencil, &grid).matvec(w.values());
            prop_assert!(max_diff(by_kernel.values(), &by_matrix) < 1e-14);
        }
        let (c, f) = noflux::psi_tilde_x_matrices(&grid);
        let faces = FaceField1D::from_fn(grid, |x| x * x - 0.3);
        let expect: Vec<f64> = c.matvec(q.values()).iter().zip(f.matvec(faces.values())).map(|(a, b)| a + b).collect();
        let got = noflux::psi_tilde_x(&q, &faces).unwrap();
        prop_assert!(max_diff(got.values(), &expect) < 1e-14);
    }

    #[test]
    fn tensor_operators_commute(v in prop::collection::vec(-1.0..1.0f64, 35)) {
        let g = StaggeredGrid2D::new(1.0, 1.4, 5, 7).unwrap();
        let f = CellField2D::from_values(g, v).unwrap();
        let xy = ops::compose_xy(PeriodicOp::Psi, PeriodicOp::PsiHat, &f);
        let yx = ops::compose_yx(PeriodicOp::Psi, PeriodicOp::PsiHat, &f);
        prop_assert!(max_diff(xy.values(), yx.values()) < 1e-14);
    }

    #[test]
    fn periodic_summation_by_parts(q in prop::collection::vec(-1.0..1.0f64, 9), w in prop::collection::vec(-1.0..1.0f64, 9)) {
        let h = 1.0 / 9.0;
        let a: f64 = q.iter().zip(periodic::delta_to_cells(&w, h)).map(|(x, y)| x * y).sum();
        let b: f64 = periodic::delta_to_faces(&q, h).iter().zip(&w).map(|(x, y)| x * y).sum();
        prop_assert!((a + b).abs() < 1e-12);
    }
}

#[test]
fn operator_examples() {
    let g = unit(4);
    let w = FaceField1D::from_values(g, vec![0.0, 1.0, 3.0, 2.0, 0.0]).unwrap();
    assert_eq!(noflux::delta_x_to_cells(&w).values(), &[4.0, 8.0, -4.0, -8.0]);
    let q = CellField1D::from_values(g, vec![1.0, 2.0, 4.0, 8.0]).unwrap();
    assert_eq!(&noflux::delta_x_to_faces(&q).values()[1..4], &[4.0, 8.0, 16.0]);

    let lin = CellField1D::from_values(unit(6), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    let hat = noflux::psi_hat_x(&lin);
    for (a, b) in hat.values().iter().zip(lin.values()) {
        assert!((a - b).abs() < 1e-14);
    }
    let spike = CellField1D::from_values(unit(6), vec![0.0, 0.0, 24.0, 0.0, 0.0, 0.0]).unwrap();
    let faces = FaceField1D::zeros(unit(6));
    assert!((noflux::psi_tilde_x(&spike, &faces).unwrap()[2] - 22.0).abs() < 1e-14);
    let ones = CellField1D::from_fn(unit(6), |_| 1.0);
    let face_ones = FaceField1D::from_fn(unit(6), |_| 1.0);
    assert!(noflux::psi_tilde_x(&ones, &face_ones).unwrap().values().iter().all(|v| (v - 1.0).abs() < 1e-15));
    let other_grid = FaceField1D::zeros(unit(7));
    assert!(noflux::psi_tilde_x(&ones, &other_grid).is_err());
    assert!((PeriodicOp::Psi.apply_line(&[1.0f64, 2.0, 3.0], 1.0)[1] - 2.0).abs() < 1e-15);
}

#[test]
fn compact_face_operator_reproduces_linears_in_the_interior() {
    let w = FaceField1D::from_fn(unit(10), |x| 3.0 * x - 1.0);
    let out = noflux::psi_x_faces(&w);
    for f in 1..10 {
        assert!((out[f] - w[f]).abs() < 1e-14);
    }
}

#[test]
fn collapsed_periodic_forms_share_the_compact_stencil() {
    for n in [4usize, 9, 16] {
        let h = 1.0 / n as f64;
        let psi = PeriodicOp::Psi.matrix::<f64>(n, h);
        for op in [PeriodicOp::PsiHat, PeriodicOp::PsiTilde] {
            let m = op.matrix::<f64>(n, h);
            assert!(m.same_pattern(&psi));
            for (r, c, v) in m.triplets() {
                assert!((v - psi.get(r, c)).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn y_derivative_of_x_only_field_vanishes() {
    let g = StaggeredGrid2D::new(1.0, 1.0, 6, 5).unwrap();
    let f = CellField2D::from_fn(g, |x, _| (2.0 * std::f64::consts::PI * x).cos());
    assert!(ops::delta_to_faces_2d(&f, Axis::Y).max_abs() < 1e-12);
    let u = ops::delta_to_faces_2d(&f, Axis::X);
    assert!(ops::delta_to_cells_2d(&u).values().iter().sum::<f64>().abs() < 1e-10);
}
