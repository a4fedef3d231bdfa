mod common;

use common::{in_cone, mat, pyramid, wedge};
use homcone::cone::{OrderRelation, PolyhedralCone};
use homcone::hypotheses::{beta_range, check_b1, reduction_matches_grid};
use homcone::linalg::{add, scale, sub, Matrix};
use homcone::maps::ConeMap;
use homcone::sampling::first_failure;
use homcone::scalar::{format_rational, parse_rational, rat, Rational};
use homcone::spectral::bonsall_radius;
use num_traits::Signed;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=8).prop_map(|(p, q)| rat(p, q))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=8).prop_map(|(p, q)| rat(p, q))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(rational(), n)
}

fn nonneg_matrix(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec(proptest::collection::vec((0i64..=12, 1i64..=4).prop_map(|(p, q)| rat(p, q)), n), n)
        .prop_map(|rows| Matrix::from_rows(rows).unwrap())
}

fn cone(which: u8) -> PolyhedralCone<Rational> {
    match which % 4 {
        0 => PolyhedralCone::orthant(2),
        1 => wedge(),
        2 => PolyhedralCone::orthant(3),
        _ => pyramid(),
    }
}

/// Cone point as a nonnegative combination of the extreme rays.
fn cone_point(k: &PolyhedralCone<Rational>, coeffs: &[Rational]) -> Vec<Rational> {
    k.extreme_rays()
        .iter()
        .zip(coeffs.iter().cycle())
        .fold(vec![rat(0, 1); k.dim()], |acc, (g, c)| add(&acc, &scale(&c.abs(), g)))
}

fn min_map() -> impl Strategy<Value = ConeMap<Rational>> {
    (nonneg_matrix(2), nonneg_matrix(2), nonneg_matrix(2))
        .prop_map(|(a, b, c)| ConeMap::min_of_linear(PolyhedralCone::orthant(2), vec![a, b, c]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cone_closed_under_sums_and_scaling(which in 0u8..4, a in vector(4), b in vector(4), c in positive_rational()) {
        let k = cone(which);
        let x = cone_point(&k, &a);
        let y = cone_point(&k, &b);
        prop_assert!(k.contains(&x, 0.0).unwrap());
        prop_assert!(k.contains(&add(&x, &y), 0.0).unwrap());
        prop_assert!(k.contains(&scale(&c, &x), 0.0).unwrap());
        prop_assert_eq!(k.contains(&x, 0.0).unwrap(), in_cone(&k, &x));
    }

    #[test]
    fn pointed_cone_meets_its_negative_only_at_zero(which in 0u8..4, a in vector(4)) {
        let k = cone(which);
        let x = cone_point(&k, &a);
        let minus: Vec<Rational> = x.iter().map(|v| -v).collect();
        if x.iter().any(|v| *v != rat(0, 1)) {
            prop_assert!(!k.contains(&minus, 0.0).unwrap());
        }
    }

    #[test]
    fn compare_is_antisymmetric(which in 0u8..4, a in vector(4), b in vector(4), c in vector(4)) {
        let k = cone(which);
        let x = cone_point(&k, &a);
        let y = add(&x, &cone_point(&k, &b));
        let z = cone_point(&k, &c);
        let xy = k.compare(&x, &y, 0.0).unwrap();
        let yx = k.compare(&y, &x, 0.0).unwrap();
        prop_assert!(xy.is_leq());
        prop_assert_eq!(xy.is_lt(), yx.is_gt());
        prop_assert_eq!(xy == OrderRelation::Equal, yx == OrderRelation::Equal);
        let xz = k.compare(&x, &z, 0.0).unwrap();
        let zx = k.compare(&z, &x, 0.0).unwrap();
        prop_assert_eq!(xz.is_leq(), zx.is_geq());
        if xz.is_leq() && zx.is_leq() {
            prop_assert_eq!(x, z);
        }
    }

    #[test]
    fn min_maps_are_homogeneous(t in min_map(), x in vector(2), c in positive_rational()) {
        let x: Vec<Rational> = x.iter().map(|v| v.abs()).collect();
        prop_assert_eq!(t.apply(&scale(&c, &x)).unwrap(), scale(&c, &t.apply(&x).unwrap()));
    }

    #[test]
    fn composition_applies_right_to_left(a in nonneg_matrix(2), b in nonneg_matrix(2), s in min_map(), x in vector(2)) {
        let k = PolyhedralCone::orthant(2);
        let x: Vec<Rational> = x.iter().map(|v| v.abs()).collect();
        let f = ConeMap::linear(k.clone(), a).unwrap();
        let g = ConeMap::max_of_linear(k, vec![b, mat(&[&[1, 0], &[0, 1]])]).unwrap();
        let h = ConeMap::compose(vec![f.clone(), g.clone(), s.clone()]).unwrap();
        let direct = f.apply(&g.apply(&s.apply(&x).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(h.apply(&x).unwrap(), direct);
    }

    #[test]
    fn conjugate_dominates_superadditive_map(t in min_map(), x in vector(2)) {
        let s = t.negate_conjugate().unwrap();
        let d = sub(&s.apply(&x).unwrap(), &t.apply(&x).unwrap());
        prop_assert!(d.iter().all(|v| *v >= rat(0, 1)));
    }

    #[test]
    fn min_maps_are_superadditive_on_space(t in min_map(), x in vector(2), y in vector(2)) {
        let lhs = t.apply(&add(&x, &y)).unwrap();
        let rhs = add(&t.apply(&x).unwrap(), &t.apply(&y).unwrap());
        prop_assert!(sub(&lhs, &rhs).iter().all(|v| *v >= rat(0, 1)));
    }

    #[test]
    fn beta_reduction_matches_grid(which in 0u8..4, a in vector(4), w in vector(3)) {
        let k = cone(which);
        let z = cone_point(&k, &a);
        let w: Vec<Rational> = w.into_iter().take(k.dim()).collect();
        prop_assert!(reduction_matches_grid(&k, &z, &w));
        let range = beta_range(&k, &z, &w);
        for j in -6i32..=3 {
            let beta = if j >= 0 { rat(1 << j, 1) } else { rat(1, 1 << -j) };
            let p: Vec<Rational> = z.iter().zip(&w).map(|(a, b)| a - &beta * b).collect();
            prop_assert_eq!(in_cone(&k, &p), range.admits(&beta));
        }
    }

    #[test]
    fn rationals_round_trip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bonsall_radius_scales_linearly(t in min_map(), c in (1i64..=12, 1i64..=4)) {
        let c = rat(c.0, c.1);
        let tf = t.to_f64();
        let base = bonsall_radius(&tf, 32, 16, 0).unwrap().value;
        let scaled = ConeMap::scaled(c.clone(), t).unwrap().to_f64();
        let value = bonsall_radius(&scaled, 32, 16, 0).unwrap().value;
        let cf = homcone::scalar::Scalar::to_f64(&c);
        prop_assert!((value - cf * base).abs() <= 1e-9 * (1.0 + cf * base), "{value} vs {}", cf * base);
    }

    #[test]
    fn b1_transfers_to_the_conjugate(t in min_map()) {
        if check_b1(&t, 64, 0).is_ok_and(|v| v.verdict.is_pass()) {
            let s = t.negate_conjugate().unwrap();
            prop_assert!(check_b1(&s, 64, 0).unwrap().verdict.is_pass());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn first_failure_ignores_thread_count(n in 1usize..400, bad in proptest::collection::vec(0usize..400, 0..6)) {
        let check = |i: usize| bad.contains(&i).then_some(i * 3);
        let expected = (0..n).find(|i| bad.contains(i)).map(|i| (i, i * 3));
        for threads in [1, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            prop_assert_eq!(pool.install(|| first_failure(n, check)), expected);
        }
    }
}
