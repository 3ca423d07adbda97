mod common;

use std::f64::consts::TAU;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::degrees::{degree_sequence, MonomialMap};
use toric_core::fourier::{
    build_surface_plf, closed_form_coefficient, d_coefficient, degree_from_arc, fourier_closed_form,
    fourier_quadrature_oracle, master_identity_defect, quadrature_energy, PiecewiseLinearCircleFunction,
};
use toric_core::linalg::IntegerMatrix;
use toric_core::polytope::ToricDivisor;

/// Riemann sum of `g(e^{ix}) e^{-imx}` on a uniform grid; independent of
/// the arc integrals and of the adaptive rule.
fn riemann_coefficient(g: &PiecewiseLinearCircleFunction, m: i64, points: usize) -> Complex64 {
    let h = TAU / points as f64;
    (0..points)
        .map(|k| {
            let x = (k as f64 + 0.5) * h;
            Complex64::from_polar(g.eval_direct(x), -(m as f64) * x)
        })
        .sum::<Complex64>()
        / points as f64
}

fn surface(a: &IntegerMatrix, div: &ToricDivisor) -> (toric_core::fourier::CommutantPlane, PiecewiseLinearCircleFunction) {
    build_surface_plf(&MonomialMap::new(a.clone()).unwrap(), div).unwrap()
}

#[test]
fn coefficients_of_the_standard_example_against_riemann_sums() {
    let a = IntegerMatrix::from_i64(&[[2, -1], [1, 2]]);
    let (_, g) = surface(&a, &ToricDivisor::o1_projective(2));
    for m in -12..=12 {
        let closed = closed_form_coefficient(&g, m);
        let riemann = riemann_coefficient(&g, m, 1 << 16);
        assert!((closed - riemann).norm() < 1e-7, "m = {m}: {closed} vs {riemann}");
    }
}

#[test]
fn arc_forms_give_exact_degrees() {
    let a = IntegerMatrix::from_i64(&[[2, -1], [1, 2]]);
    let div = ToricDivisor::o1_projective(2);
    let (plane, g) = surface(&a, &div);
    let seq = degree_sequence(&MonomialMap::new(a).unwrap(), &div, 1, 40).unwrap();
    for (n, d) in seq.terms.iter().enumerate() {
        let (j, dist) = g.locate(n as f64 * plane.theta);
        if dist < 1e-9 {
            continue;
        }
        let forms = g.arcs[j].forms.as_ref().unwrap();
        let (s, t) = plane.power_coordinates(n as u64);
        assert_eq!(&degree_from_arc(forms, &s, &t), d, "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circle_function_invariants(a in complex_2x2(4), seed in any::<u64>()) {
        for div in [ToricDivisor::o1_projective(2), ToricDivisor::o11_p1xp1()] {
            let (plane, g) = surface(&a, &div);
            prop_assert!(g.continuity_defect() <= 1e-9);
            prop_assert!(g.reality_defect() <= 1e-12);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pairs: Vec<(Complex64, Complex64)> = (0..1000)
                .map(|_| {
                    let z = |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    (z(&mut rng), z(&mut rng))
                })
                .collect();
            prop_assert!(g.convexity_defect(&pairs) <= 1e-12);
            for k in 0..200 {
                let x = k as f64 * TAU / 200.0;
                prop_assert!(g.eval(x) > 0.0);
                prop_assert!((g.eval(x) - g.eval_direct(x)).abs() <= 1e-9 * (1.0 + g.eval(x).abs()));
            }
            let seq = degree_sequence(&MonomialMap::new(a.clone()).unwrap(), &div, 1, 24).unwrap();
            prop_assert!(master_identity_defect(&plane, &g, &seq.terms) <= 1e-9);
        }
    }

    #[test]
    fn fourier_invariants(a in complex_2x2(3)) {
        let (_, g) = surface(&a, &ToricDivisor::o1_projective(2));
        let ev = fourier_closed_form(&g, 40);
        prop_assert!(ev.reality_defect <= 1e-10);
        for m in [-7i64, -2, 0, 3, 8] {
            let q = fourier_quadrature_oracle(&g, m).unwrap();
            prop_assert!((q - ev.coefficient(m).unwrap()).norm() <= 1e-8);
            if m.abs() != 1 {
                let lhs = ev.coefficient(m).unwrap() * ((m * m - 1) as f64);
                prop_assert!((lhs - d_coefficient(&g, m)).norm() <= 1e-9 * (1.0 + lhs.norm()));
            }
        }
        // Parseval: the tail beyond |m| = 40 is O(M⁻³) for a Lipschitz g.
        let energy = quadrature_energy(&g).unwrap();
        let partial: f64 = ev.coefficients.iter().map(|c| c.a().norm_sqr()).sum();
        prop_assert!(partial <= energy * (1.0 + 1e-9));
        prop_assert!(energy - partial <= 1e-4 * energy);
        let worst = |modes: usize| {
            (0..64).map(|k| k as f64 * TAU / 64.0).map(|x| (ev.synthesize(x, modes) - g.eval(x)).abs()).fold(0.0, f64::max)
        };
        prop_assert!(worst(40) < worst(4));
    }
}
