use cbcfd_core::cbcfd2d::FactorizationPolicy;
use cbcfd_core::grid::*;
use cbcfd_core::linsolve::dense_oracle_solve;
use cbcfd_core::mms::{self, CosineFamily, ForcingVariant};
use cbcfd_core::{HistoryState, ProblemSpec1D, ProblemSpec2D, Scheme1D, Scheme2D, Stencil};
use num_rational::BigRational;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

const STENCILS: [Stencil; 2] = [Stencil::Compact, Stencil::Classical];

fn rough_1d() -> ProblemSpec1D<f64> {
    ProblemSpec1D {
        length: 1.0,
        final_time: 0.25,
        a: Arc::new(|x| 1.0 + 0.5 * x),
        b: Arc::new(|x, t| 0.2 + x * t),
        forcing: Arc::new(|x, t| (2.0 * x).cos() * (1.0 + t * t)),
        initial_pressure: Arc::new(|x| (PI * x).cos() + 0.3 * (3.0 * PI * x).cos()),
        exact: None,
    }
}

fn rough_2d() -> ProblemSpec2D<f64> {
    let tau = 2.0 * PI;
    ProblemSpec2D {
        lx: 1.0,
        ly: 1.0,
        final_time: 0.1,
        ax: Arc::new(move |x, y| 1.0 + 0.3 * (tau * x).sin() * (tau * y).cos()),
        ay: Arc::new(move |x, _| 1.5 + 0.2 * (tau * x).cos()),
        bx: Arc::new(move |x, _, t| 0.4 + t * (tau * x).cos() * 0.1),
        by: Arc::new(|_, _, _| 0.3),
        forcing: Arc::new(move |x, y, t| (tau * x).sin() * (tau * y).cos() * (1.0 + t)),
        initial_pressure: Arc::new(move |x, y| (tau * x).cos() + 0.5 * (tau * y).sin()),
        exact: None,
        time_independent_b: false,
    }
}

fn diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn one_d_steps_match_dense_oracle() {
    for stencil in STENCILS {
        for m in [4usize, 9, 16] {
            let s = Scheme1D::new(rough_1d(), m, 0.05, stencil).unwrap();
            let mut st = s.initial_state().unwrap();
            for _ in 0..s.steps() {
                let sys = s.assemble_step_system(&st).unwrap();
                let x = dense_oracle_solve(&sys.matrix.to_dense(), &sys.rhs).unwrap();
                let expect = s.state_from_solution(&st, &sys, &x).unwrap();
                let got = s.step(&st).unwrap();
                assert!(diff(got.pressure.values(), expect.pressure.values()) < 1e-12);
                assert!(diff(got.velocity.values(), expect.velocity.values()) < 1e-12);
                st = got;
            }
        }
    }
}

#[test]
fn one_d_banded_solve_matches_exact_rational_solve() {
    let s = Scheme1D::new(rough_1d(), 8, 0.05, Stencil::Compact).unwrap();
    let st = s.initial_state().unwrap();
    let sys = s.assemble_step_system(&st).unwrap();
    let to_q = |v: f64| BigRational::from_float(v).unwrap();
    let a: Vec<Vec<BigRational>> = sys.matrix.to_dense().iter().map(|r| r.iter().map(|&v| to_q(v)).collect()).collect();
    let b: Vec<BigRational> = sys.rhs.iter().map(|&v| to_q(v)).collect();
    let exact = dense_oracle_solve(&a, &b).unwrap();
    let next = s.step(&st).unwrap();
    for (c, v) in next.pressure.values().iter().enumerate() {
        let q = &exact[2 * c];
        let approx = num_traits::ToPrimitive::to_f64(q).unwrap();
        assert!((v - approx).abs() < 1e-13, "cell {c}: {v} vs {approx}");
    }
}

#[test]
fn two_d_steps_match_dense_oracle() {
    for stencil in STENCILS {
        for (nx, ny) in [(4usize, 4usize), (5, 4), (8, 8)] {
            let s = Scheme2D::new(rough_2d(), nx, ny, 0.025, stencil).unwrap();
            let mut st = s.initial_state().unwrap();
            for _ in 0..2 {
                let sys = s.assemble_step_system(&st).unwrap();
                let x = dense_oracle_solve(&sys.matrix.to_dense(), &sys.rhs).unwrap();
                let expect = s.state_from_solution(&st, &x).unwrap();
                let got = s.step(&st).unwrap();
                assert!(diff(got.pressure.values(), expect.pressure.values()) < 1e-12);
                assert!(diff(got.velocity_x.values(), expect.velocity_x.values()) < 1e-12);
                assert!(diff(got.velocity_y.values(), expect.velocity_y.values()) < 1e-12);
                st = got;
            }
        }
    }
}

#[test]
fn catalog_steps_satisfy_the_scheme_matrix_free() {
    let ex1 = mms::example1::<f64>(ForcingVariant::Derived);
    let s = Scheme1D::new(ex1, 20, 1.0 / 400.0, Stencil::Compact).unwrap();
    let mut st = s.initial_state().unwrap();
    for _ in 0..5 {
        let next = s.step(&st).unwrap();
        assert!(s.residual(&st, &next).unwrap() <= 1e-11);
        st = next;
    }
    let ex2 = mms::example2::<f64>(ForcingVariant::Derived);
    let s = Scheme2D::new(ex2, 10, 10, 0.01, Stencil::Compact).unwrap();
    let mut st = s.initial_state().unwrap();
    for _ in 0..5 {
        let next = s.step(&st).unwrap();
        assert!(s.residual(&st, &next).unwrap() <= 1e-11);
        st = next;
    }
}

#[test]
fn mass_balance_holds_every_step() {
    for stencil in STENCILS {
        let s = Scheme1D::new(rough_1d(), 24, 0.01, stencil).unwrap();
        s.run_observed(|a, b| {
            assert!(s.mass_balance_defect(a, b).unwrap() <= 1e-11);
            Ok(())
        })
        .unwrap();
        let s = Scheme2D::new(rough_2d(), 7, 6, 0.01, stencil).unwrap();
        s.run_observed(|a, b| {
            assert!(s.mass_balance_defect(a, b).unwrap() <= 1e-11);
            Ok(())
        })
        .unwrap();
    }
}

#[test]
fn one_d_initial_velocity_is_fourth_order() {
    let family = CosineFamily { a: 1.0, b: 0.0, b_time_power: 0, time_power: 0, wavenumber: 1, final_time: 1.0 };
    let spec = family.one_d();
    let mut errs = Vec::new();
    for m in [16usize, 32, 64, 128] {
        let s = Scheme1D::new(spec.clone(), m, 1.0, Stencil::Compact).unwrap();
        let p0 = CellField1D::from_fn(*s.grid(), |x| (PI * x).cos());
        let u = s.init_utilde(&p0).unwrap();
        assert_eq!(u.boundary_values(), (0.0, 0.0));
        let exact = FaceField1D::from_fn_interior(*s.grid(), |x| PI * (PI * x).sin());
        errs.push(u.sub(&exact).unwrap().max_abs());
    }
    for w in errs.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!(rate > 3.7, "rate {rate} from {errs:?}");
    }
}

#[test]
fn two_d_initial_velocity_of_a_cosine_wave() {
    let family = CosineFamily { a: 1.0, b: 0.0, b_time_power: 0, time_power: 0, wavenumber: 1, final_time: 1.0 };
    let mut spec = family.two_d();
    spec.initial_pressure = Arc::new(|x, _| (2.0 * PI * x).cos());
    let mut errs = Vec::new();
    for n in [8usize, 16, 32] {
        let s = Scheme2D::new(spec.clone(), n, n, 1.0, Stencil::Compact).unwrap();
        let p0 = CellField2D::from_fn(*s.grid(), |x, _| (2.0 * PI * x).cos());
        let (ux, uy) = s.init_utilde(&p0).unwrap();
        assert!(uy.max_abs() < 1e-12);
        let exact = FaceField2D::from_fn(*s.grid(), Axis::X, |x, _| 2.0 * PI * (2.0 * PI * x).sin());
        errs.push(ux.sub(&exact).unwrap().max_abs());
    }
    assert!(errs[2] < 1e-3);
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() > 3.7, "{errs:?}");
    }
}

#[test]
fn y_independent_data_stays_y_independent() {
    let tau = 2.0 * PI;
    let spec = ProblemSpec2D {
        lx: 1.0,
        ly: 1.0,
        final_time: 0.2,
        ax: Arc::new(|_, _| 1.0),
        ay: Arc::new(|_, _| 1.0),
        bx: Arc::new(|_, _, t| 0.5 * t),
        by: Arc::new(|_, _, t| 0.5 * t),
        forcing: Arc::new(move |x, _, t| (tau * x).cos() * (1.0 + t)),
        initial_pressure: Arc::new(move |x, _| (tau * x).sin()),
        exact: None,
        time_independent_b: false,
    };
    let s = Scheme2D::new(spec, 8, 5, 0.02, Stencil::Compact).unwrap();
    let out = s.run().unwrap().state;
    let g = *out.pressure.grid();
    for i in 0..g.nx() {
        for j in 1..g.ny() {
            assert!((out.pressure.at(i, j) - out.pressure.at(i, 0)).abs() < 1e-12);
        }
    }
    assert!(out.velocity_y.max_abs() < 1e-12);
}

#[test]
fn history_replay_matches_running_sum() {
    let spec = mms::example1::<f64>(ForcingVariant::Derived);
    let s = Scheme1D::new(spec, 12, 0.01, Stencil::Compact).unwrap().with_history_replay(true);
    let mut st = s.initial_state().unwrap();
    for n in 1..=60 {
        st = s.step(&st).unwrap();
        if n % 20 == 0 {
            let replayed = st.history.replayed_sum().unwrap();
            assert!(diff(&replayed, st.history.sum()) <= 1e-14 * n as f64);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn history_update_is_linear(
        u0 in prop::collection::vec(-5.0..5.0f64, 6),
        u1 in prop::collection::vec(-5.0..5.0f64, 6),
        v0 in prop::collection::vec(-5.0..5.0f64, 6),
        v1 in prop::collection::vec(-5.0..5.0f64, 6),
        alpha in -2.0..2.0f64,
    ) {
        let b = [0.3, 0.0, 1.2, 0.7, 0.1, 2.0];
        let a = [1.0, 2.0, 0.5, 1.5, 1.0, 3.0];
        let zero = HistoryState::new(6, 0.1);
        let su = zero.advanced(&b, &a, &u0, &u1).unwrap();
        let sv = zero.advanced(&b, &a, &v0, &v1).unwrap();
        let w0: Vec<f64> = u0.iter().zip(&v0).map(|(x, y)| x + alpha * y).collect();
        let w1: Vec<f64> = u1.iter().zip(&v1).map(|(x, y)| x + alpha * y).collect();
        let sw = zero.advanced(&b, &a, &w0, &w1).unwrap();
        for f in 0..6 {
            let expect = su.sum()[f] + alpha * sv.sum()[f];
            prop_assert!((sw.sum()[f] - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn history_replay_is_exact_bookkeeping(samples in prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 3), 1..30)) {
        let mut h = HistoryState::with_replay(3, 0.05);
        let ones = [1.0; 3];
        let zeros = [0.0; 3];
        for s in &samples {
            h.advance(&ones, &ones, s, &zeros).unwrap();
        }
        prop_assert_eq!(h.steps(), samples.len());
        let replayed = h.replayed_sum().unwrap();
        for f in 0..3 {
            prop_assert!((replayed[f] - h.sum()[f]).abs() <= 1e-13);
        }
    }
}

#[test]
fn zero_stability_on_zero_forcing() {
    for stencil in STENCILS {
        let mut spec = rough_1d();
        spec.forcing = Arc::new(|_, _| 0.0);
        spec.final_time = 2.0;
        let s = Scheme1D::new(spec, 32, 0.01, stencil).unwrap();
        let start = s.initial_state().unwrap().pressure.norm();
        let mut peak: f64 = 0.0;
        s.run_observed(|_, b| {
            peak = peak.max(b.pressure.norm());
            Ok(())
        })
        .unwrap();
        assert!(peak.is_finite() && peak <= 1.5 * start, "{peak} vs {start}");

        let mut spec = rough_2d();
        spec.forcing = Arc::new(|_, _, _| 0.0);
        spec.final_time = 0.5;
        let s = Scheme2D::new(spec, 8, 8, 0.02, stencil).unwrap();
        let start = s.initial_state().unwrap().pressure.norm();
        let end = s.run().unwrap().state.pressure.norm();
        assert!(end.is_finite() && end <= 1.5 * start);
    }
}

#[test]
fn factorization_policies_agree_on_time_dependent_memory() {
    let spec = mms::example2::<f64>(ForcingVariant::Derived);
    let every = Scheme2D::new(spec.clone(), 8, 8, 1.0 / 64.0, Stencil::Compact)
        .unwrap()
        .with_factorization_policy(FactorizationPolicy::EveryStep)
        .run()
        .unwrap();
    let reuse = Scheme2D::new(spec, 8, 8, 1.0 / 64.0, Stencil::Compact).unwrap().run().unwrap();
    assert!(diff(every.state.pressure.values(), reuse.state.pressure.values()) < 1e-12);
}

#[test]
fn single_precision_scheme_converges() {
    let family = CosineFamily { a: 1.0f32, b: 1.0, b_time_power: 1, time_power: 2, wavenumber: 1, final_time: 0.5 };
    let spec = family.one_d();
    let coarse = cbcfd_core::cbcfd1d::run(&spec, 8, 1.0 / 64.0, Stencil::Compact).unwrap();
    let fine = cbcfd_core::cbcfd1d::run(&spec, 16, 1.0 / 256.0, Stencil::Compact).unwrap();
    let (ec, ef) = (coarse.errors.unwrap().pressure, fine.errors.unwrap().pressure);
    assert!(ec.is_finite() && ef < ec / 8.0, "{ec} {ef}");
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(Scheme1D::new(rough_1d(), 2, 0.05, Stencil::Compact).is_err());
    assert!(Scheme1D::new(rough_1d(), 8, 0.07, Stencil::Compact).is_err());
    let mut bad = rough_1d();
    bad.a = Arc::new(|x| x - 0.5);
    assert!(Scheme1D::new(bad, 8, 0.05, Stencil::Compact).is_err());
    assert!(Scheme2D::new(rough_2d(), 2, 8, 0.025, Stencil::Compact).is_err());
}
