mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use toric_core::degrees::{degree_sequence, degree_sequence_geometric, dynamical_degrees, MonomialMap};
use toric_core::linalg::{eigen_spectrum, IntegerMatrix};
use toric_core::polytope::{
    edge_normal_fan, linear_image, minkowski_sum, mixed_area_sam, mixed_volume_vector, polytope_from_divisor, volume,
    LatticePolytope, ToricDivisor,
};

fn apply(a: &IntegerMatrix, p: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let e = |i, j| -> i64 { a.get(i, j).try_into().unwrap() };
    p.iter().map(|&(x, y)| (e(0, 0) * x + e(0, 1) * y, e(1, 0) * x + e(1, 1) * y)).collect()
}

/// `2 V(AⁿP, P)` from hull areas alone.
fn surface_degree_oracle(a: &IntegerMatrix, p: &[(i64, i64)], n: u64) -> BigRational {
    q(2) * mixed_area_i64(&apply(&a.pow(n), p), p)
}

const SIMPLEX: [(i64, i64); 3] = [(0, 0), (1, 0), (0, 1)];
const SQUARE: [(i64, i64); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

#[test]
fn known_surface_sequence() {
    let map = MonomialMap::from_i64(&[[2, -1], [1, 2]]).unwrap();
    let seq = degree_sequence(&map, &ToricDivisor::o1_projective(2), 1, 8).unwrap();
    let want = [1, 4, 11, 24, 48, 82, 234, 556, 1054];
    assert_eq!(seq.terms, want.iter().map(|&x| q(x)).collect::<Vec<_>>());
}

#[test]
fn extremes_agree_with_geometry() {
    let map = MonomialMap::from_i64(&[[2, 1, 0], [0, 1, -1], [1, 0, 2]]).unwrap();
    let div = ToricDivisor::o1_projective(3);
    for k in [0, 3] {
        let fast = degree_sequence(&map, &div, k, 4).unwrap();
        let slow = degree_sequence_geometric(&map, &div, k, 4).unwrap();
        assert_eq!(fast.terms, slow.terms, "k = {k}");
    }
}

#[test]
fn lambda_of_diagonal() {
    let map = MonomialMap::new(IntegerMatrix::diagonal(&[BigInt::from(2), BigInt::from(-3), BigInt::from(5)])).unwrap();
    let dd = dynamical_degrees(&map, 128).unwrap();
    let want = [1.0, 5.0, 15.0, 30.0];
    for (l, w) in dd.lambda.iter().zip(want) {
        assert!(l.contains_f64(w), "{l:?} vs {w}");
    }
}

#[test]
fn o1_simplex_is_standard() {
    let p = polytope_from_divisor(&ToricDivisor::o1_projective(2)).unwrap();
    assert_eq!(volume(&p), BigRational::new(1.into(), 2.into()));
    let p = polytope_from_divisor(&ToricDivisor::o11_p1xp1()).unwrap();
    assert_eq!(volume(&p), q(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn surface_degrees_match_hull_oracle(a in invertible(2, 4)) {
        let map = MonomialMap::new(a.clone()).unwrap();
        let seq = degree_sequence(&map, &ToricDivisor::o1_projective(2), 1, 6).unwrap();
        for n in 0..=6 {
            prop_assert_eq!(&seq.terms[n], &surface_degree_oracle(&a, &SIMPLEX, n as u64));
        }
        let seq = degree_sequence(&map, &ToricDivisor::o11_p1xp1(), 1, 4).unwrap();
        for n in 0..=4 {
            prop_assert_eq!(&seq.terms[n], &surface_degree_oracle(&a, &SQUARE, n as u64));
        }
    }

    #[test]
    fn topological_degree_2x2(a in invertible(2, 5)) {
        let map = MonomialMap::new(a.clone()).unwrap();
        let seq = degree_sequence_geometric(&map, &ToricDivisor::o1_projective(2), 2, 8).unwrap();
        let det = a.det().abs();
        for (n, t) in seq.terms.iter().enumerate() {
            prop_assert_eq!(t, &BigRational::from_integer(num_traits::pow(det.clone(), n)));
        }
    }

    #[test]
    fn mixed_area_three_ways(p in lattice_polygon(6), r in lattice_polygon(6)) {
        let lp = LatticePolytope::from_integer_points(&to_points(&p)).unwrap();
        let lr = LatticePolytope::from_integer_points(&to_points(&r)).unwrap();
        let interp = mixed_volume_vector(&lp, &lr).unwrap();
        let sam = mixed_area_sam(&lp, &lr).unwrap();
        let oracle = mixed_area_i64(&p, &r);
        prop_assert_eq!(interp.get(1), &oracle);
        prop_assert_eq!(&sam, &oracle);
        prop_assert_eq!(interp.get(0), &volume(&lr));
        prop_assert_eq!(interp.get(2), &volume(&lp));
        prop_assert!(edge_normal_fan(&lp).unwrap().closes());
    }

    #[test]
    fn mixed_area_is_symmetric_and_monotone(p in lattice_polygon(5), r in lattice_polygon(5)) {
        let lp = LatticePolytope::from_integer_points(&to_points(&p)).unwrap();
        let lr = LatticePolytope::from_integer_points(&to_points(&r)).unwrap();
        let sum = minkowski_sum(&lp, &lr).unwrap();
        let v = |x: &LatticePolytope, y: &LatticePolytope| mixed_area_sam(x, y).unwrap();
        prop_assert_eq!(v(&lp, &lr), v(&lr, &lp));
        // V(P+R, R) = V(P, R) + vol(R)
        prop_assert_eq!(v(&sum, &lr), v(&lp, &lr) + volume(&lr));
        prop_assert!(v(&lp, &lr) >= BigRational::zero());
    }

    #[test]
    fn image_scales_volume(a in invertible(2, 4), p in lattice_polygon(4)) {
        let lp = LatticePolytope::from_integer_points(&to_points(&p)).unwrap();
        let img = linear_image(&lp, &a).unwrap();
        prop_assert_eq!(volume(&img), volume(&lp) * BigRational::from_integer(a.det().abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn lambda_k_is_compound_spectral_radius(a in invertible(3, 4)) {
        let dd = dynamical_degrees(&MonomialMap::new(a.clone()).unwrap(), 128).unwrap();
        for k in 1..=3 {
            let c = a.compound(k).unwrap();
            let rho = eigen_spectrum(&c, 128).unwrap().summaries().iter().map(|r| r.modulus).fold(0.0, f64::max);
            let l = &dd.lambda[k];
            prop_assert!((l.midpoint() - rho).abs() <= 1e-9 * rho.max(1.0), "k = {}: {:?} vs {}", k, l, rho);
        }
    }

    #[test]
    fn topological_degree_3x3(a in invertible(3, 3)) {
        let map = MonomialMap::new(a.clone()).unwrap();
        let seq = degree_sequence_geometric(&map, &ToricDivisor::o1_projective(3), 3, 4).unwrap();
        let det = a.det().abs();
        for (n, t) in seq.terms.iter().enumerate() {
            prop_assert_eq!(t, &BigRational::from_integer(num_traits::pow(det.clone(), n)));
        }
    }
}
