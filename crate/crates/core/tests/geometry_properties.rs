use igusa_core::arith::Rational;
use igusa_core::geometry::{self, CPoly, ProjPoint};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point_on_line(line: &geometry::Line, a: i64, b: i64) -> Vec<Rational> {
    (0..6)
        .map(|k| &(&line.u[k] * &Rational::from(a)) + &(&line.w[k] * &Rational::from(b)))
        .collect()
}

fn permutation() -> impl Strategy<Value = Vec<usize>> {
    Just((0..6).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lines_lie_on_the_quartic(a in -9i64..=9, b in -9i64..=9) {
        let (_, igusa) = geometry::canonical_polys();
        let hyper = geometry::hyperplane();
        for l in geometry::fifteen_lines().unwrap() {
            let p = point_on_line(&l.line, a, b);
            prop_assert!(igusa.eval(&p).is_zero());
            prop_assert!(hyper.eval(&p).is_zero());
        }
    }

    #[test]
    fn cubics_vanish_on_base_lines(a in -9i64..=9, b in -9i64..=9) {
        for line in geometry::base_lines() {
            let p = point_on_line(&line, a, b);
            for c in geometry::fifteen_cubics() {
                prop_assert!(c.poly.eval(&p).is_zero());
            }
        }
    }

    #[test]
    fn canonical_polynomials_are_symmetric(sigma in permutation()) {
        let (segre, igusa) = geometry::canonical_polys();
        prop_assert_eq!(segre.permute(&sigma), segre);
        prop_assert_eq!(igusa.permute(&sigma), igusa);
    }

    #[test]
    fn roots_are_recovered(roots in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..9)) {
        let mut p = CPoly(vec![Complex64::new(1.0, 0.0)]);
        for &(re, im) in &roots {
            let r = Complex64::new(re, im);
            let mut next = vec![Complex64::new(0.0, 0.0); p.0.len() + 1];
            for (k, c) in p.0.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            p = CPoly(next);
        }
        let found = geometry::polynomial_roots(&p);
        prop_assert_eq!(found.len(), roots.len());
        for &(re, im) in &roots {
            let r = Complex64::new(re, im);
            let best = found.iter().map(|z| (z - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-4, "root {} missed by {}", r, best);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fitted_curves_pass_through_their_points(
        coords in proptest::collection::vec(-7i64..=7, 5),
        seed in 0u64..1000,
    ) {
        let mut c = coords.clone();
        c.push(-coords.iter().sum::<i64>());
        prop_assume!(c.iter().any(|&x| x != 0));
        let p = ProjPoint::from_integers(&c).unwrap();
        let mut points = vec![p];
        points.extend(geometry::base_points());
        prop_assume!(geometry::in_general_position(&points));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let curve = geometry::fit_rnc(&points, None, &mut rng).unwrap();
        prop_assert!(curve.residual <= geometry::RESIDUAL_TOLERANCE);
        prop_assert!(curve.coordinate_polys().iter().all(|q| q.degree() <= 4));
        prop_assert!(geometry::quartic_on_curve(&curve).degree() <= 16);
    }
}

#[test]
fn base_points_are_off_the_quartic_exactly() {
    let (_, igusa) = geometry::canonical_polys();
    for p in geometry::base_points() {
        assert!(p.on_hyperplane());
        assert!(!igusa.eval(p.coords()).is_zero(), "{p}");
    }
}

#[test]
fn cubic_dependencies_hold_exactly() {
    let span = geometry::cubic_span(&geometry::fifteen_cubics()).unwrap();
    assert_eq!(span.rank, 5);
    assert_eq!(span.dependencies.len(), 10);
    assert!(span.dependencies_verified);
}

#[test]
fn degree_sixteen_is_seed_stable() {
    let a = geometry::degree16_check(6, 3);
    let b = geometry::degree16_check(6, 3);
    assert_eq!(a.successes, b.successes);
    assert_eq!(serde_json::to_string(&a.outcomes).unwrap(), serde_json::to_string(&b.outcomes).unwrap());
    assert!(a.passed());
}
