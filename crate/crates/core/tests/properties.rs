use std::f64::consts::PI;

use fundsol::assembly::build_table;
use fundsol::kernel::{v_eval, ContourSpec, PlaneWaveSolver};
use fundsol::operator::{fd_derivative, Operator};
use fundsol::MultiIndex;
use proptest::prelude::*;

fn mi(s: &str) -> MultiIndex {
    s.parse().unwrap()
}

/// `[m11, m12, m22]` of a symmetric matrix with eigenvalues `l1, l2` rotated by `t`.
fn spd2(l1: f64, l2: f64, t: f64) -> [f64; 3] {
    let (c, s) = (t.cos(), t.sin());
    [
        l1 * c * c + l2 * s * s,
        (l1 - l2) * c * s,
        l1 * s * s + l2 * c * c,
    ]
}

fn second_order_2d() -> impl Strategy<Value = Operator<f64>> {
    (
        0.5f64..2.0,
        0.5f64..2.0,
        0.0f64..PI,
        proptest::collection::vec(-1.0f64..1.0, 3),
    )
        .prop_map(|(l1, l2, t, low)| {
            let m = spd2(l1, l2, t);
            Operator::new(
                2,
                1,
                [
                    (mi("2,0"), m[0]),
                    (mi("1,1"), 2.0 * m[1]),
                    (mi("0,2"), m[2]),
                    (mi("1,0"), low[0]),
                    (mi("0,1"), low[1]),
                    (mi("0,0"), low[2]),
                ],
            )
            .unwrap()
        })
}

fn fourth_order_2d() -> impl Strategy<Value = Operator<f64>> {
    (
        second_order_2d(),
        second_order_2d(),
        proptest::collection::vec(-0.5f64..0.5, 10),
    )
        .prop_map(|(p, q, low)| {
            let a = [
                p.coefficient(&mi("2,0")),
                p.coefficient(&mi("1,1")) / 2.0,
                p.coefficient(&mi("0,2")),
            ];
            let b = [
                q.coefficient(&mi("2,0")),
                q.coefficient(&mi("1,1")) / 2.0,
                q.coefficient(&mi("0,2")),
            ];
            let mut coeffs = vec![
                (mi("4,0"), a[0] * b[0]),
                (mi("3,1"), 2.0 * (a[0] * b[1] + a[1] * b[0])),
                (mi("2,2"), a[0] * b[2] + 4.0 * a[1] * b[1] + a[2] * b[0]),
                (mi("1,3"), 2.0 * (a[1] * b[2] + a[2] * b[1])),
                (mi("0,4"), a[2] * b[2]),
            ];
            coeffs.extend(MultiIndex::up_to_order(2, 3).into_iter().zip(low));
            Operator::new(2, 2, coeffs).unwrap()
        })
}

fn any_operator() -> impl Strategy<Value = Operator<f64>> {
    prop_oneof![second_order_2d(), fourth_order_2d()]
}

fn direction() -> impl Strategy<Value = [f64; 2]> {
    (0.0f64..2.0 * PI).prop_map(|t| [t.cos(), t.sin()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn contour_radius_does_not_matter(a in any_operator(), xi in direction()) {
        let base = PlaneWaveSolver::new(&a).unwrap();
        let rho = base.contour().radius;
        let wide = PlaneWaveSolver::with_contour(&a, ContourSpec::new(2.0 * rho, 64).unwrap()).unwrap();
        let (p, q) = (base.raw(&xi, 16).unwrap(), wide.raw(&xi, 16).unwrap());
        for j in 0..=16 {
            let unit = p.scale[j].max(q.scale[j]).max(1.0);
            prop_assert!((p.values[j] - q.values[j]).norm() <= 1e-10 * unit);
            prop_assert!(p.values[j].im.abs() <= 1e-10 * unit);
        }
    }

    #[test]
    fn plane_wave_depends_on_x_dot_xi_minus_t(
        a in any_operator(), xi in direction(), x in proptest::array::uniform2(-1.0f64..1.0), t in -1.0f64..1.0,
    ) {
        let c = ContourSpec::for_operator(&a).unwrap();
        let s = x[0] * xi[0] + x[1] * xi[1];
        let lhs = v_eval(&a, &x, &xi, t, &c).unwrap();
        let rhs = v_eval(&a, &[0.0, 0.0], &xi, t - s, &c).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn plane_wave_solves_the_ode(a in any_operator(), xi in direction(), s in -1.0f64..1.0) {
        let pw = PlaneWaveSolver::new(&a).unwrap().series(&xi, 60).unwrap();
        let v = |y: &[f64]| pw.v_series(y[0]);
        let mut total = 0.0;
        for (alpha, &c) in a.coefficients() {
            let d = fd_derivative(&v, &[s], &MultiIndex::new(vec![alpha.order()]), 1e-2).unwrap();
            total += c * alpha.monomial(&xi) * d;
        }
        prop_assert!((total - 1.0).abs() < 1e-5, "{}", total);
    }

    #[test]
    fn plane_wave_is_flat_of_order_2k(a in any_operator(), xi in direction()) {
        let c = ContourSpec::for_operator(&a).unwrap();
        let two_k = 2 * a.k() as i32;
        // v(s) / s^{2k} tends to a_2k / (2k)! = 1 / ((2k)! P_0(xi)).
        let limit = 1.0 / ((1..=two_k).product::<i32>() as f64 * a.principal_symbol(&xi));
        for s in [1e-2, 1e-3, 1e-4] {
            let ratio = v_eval(&a, &[0.0, 0.0], &xi, -s, &c).unwrap() / s.powi(two_k);
            prop_assert!((ratio / limit - 1.0).abs() < 0.5, "s = {s}: {ratio} vs {limit}");
        }
    }
}

fn spd3() -> impl Strategy<Value = Operator<f64>> {
    (
        proptest::collection::vec(-0.4f64..0.4, 3),
        proptest::collection::vec(0.6f64..1.6, 3),
    )
        .prop_map(|(off, diag)| {
            // Diagonally dominant, hence positive definite.
            Operator::new(
                3,
                1,
                [
                    (mi("2,0,0"), diag[0]),
                    (mi("0,2,0"), diag[1]),
                    (mi("0,0,2"), diag[2]),
                    (mi("1,1,0"), off[0]),
                    (mi("1,0,1"), off[1]),
                    (mi("0,1,1"), off[2]),
                ],
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn principal_part_is_homogeneous_in_odd_dimension(
        a in spd3(), x in proptest::array::uniform3(-1.0f64..1.0), t in 0.3f64..3.0,
    ) {
        prop_assume!(x.iter().map(|v| v * v).sum::<f64>() > 0.01);
        let table = build_table(&a, 40).unwrap();
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        let lhs = table.eval_s0(&tx).unwrap();
        let rhs = t.powi(2 - 3) * table.eval_s0(&x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-3));
    }

    #[test]
    fn principal_part_scales_inversely(a in second_order_2d(), lambda in 0.2f64..5.0, x in direction()) {
        let a = a.principal_part();
        let t1 = build_table(&a, 40).unwrap();
        let t2 = build_table(&a.scaled(lambda).unwrap(), 40).unwrap();
        let y = [0.7 * x[0], 0.7 * x[1]];
        let (s1, s2) = (t1.eval_s0(&y).unwrap(), t2.eval_s0(&y).unwrap());
        prop_assert!((s2 - s1 / lambda).abs() <= 1e-10 * s1.abs().max(1e-3));
    }
}
