use igusa_core::arith::cyclotomic::DEGREE;
use igusa_core::arith::eigen::eigenphase_multiplicities;
use igusa_core::arith::matrix::{CMatrix, Matrix};
use igusa_core::arith::qseries::QSeries;
use igusa_core::arith::{Cyclotomic, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n, d))
}

fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    proptest::collection::vec(rational(), DEGREE).prop_map(|c| Cyclotomic::from_coeffs(c.try_into().unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_axioms(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, Cyclotomic::zero());
    }

    #[test]
    fn cyclotomic_inverse(a in cyclotomic()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().expect("nonzero elements are invertible");
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn norm_is_multiplicative(a in cyclotomic(), b in cyclotomic()) {
        prop_assert_eq!((&a * &b).norm(), &a.norm() * &b.norm());
    }

    #[test]
    fn roots_of_unity_compose(j in -30i64..30, k in -30i64..30) {
        prop_assert_eq!(&Cyclotomic::zeta(j) * &Cyclotomic::zeta(k), Cyclotomic::zeta(j + k));
        prop_assert!(Cyclotomic::zeta(j).pow(24).is_one());
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn eigenphases_account_for_the_trace(
        exps in proptest::collection::vec(0i64..24, 1..5),
        shear in proptest::collection::vec(-3i64..=3, 16),
    ) {
        let n = exps.len();
        let d = Matrix::diagonal(exps.iter().map(|&k| Cyclotomic::zeta(k)).collect());
        let p: CMatrix = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => Cyclotomic::one(),
            std::cmp::Ordering::Less => Cyclotomic::from_int(shear[i * 4 + j]),
            std::cmp::Ordering::Greater => Cyclotomic::zero(),
        });
        let a = p.mul(&d).mul(&p.inverse().unwrap());
        let phases = eigenphase_multiplicities(&a).unwrap();
        let total: u64 = phases.iter().map(|e| e.multiplicity).sum();
        prop_assert_eq!(total as usize, n);
        let trace: Cyclotomic = phases
            .iter()
            .map(|e| Cyclotomic::exp_2pi_i(&e.phase).unwrap().scale(&Rational::from(e.multiplicity as i64)))
            .sum();
        prop_assert_eq!(trace, a.trace());
    }

    #[test]
    fn qseries_product_valuation(
        a in proptest::collection::vec((0i64..12, -5i64..=5), 1..6),
        b in proptest::collection::vec((0i64..12, -5i64..=5), 1..6),
    ) {
        let t = Rational::from(8);
        let series = |terms: &[(i64, i64)]| {
            QSeries::from_terms(terms.iter().map(|&(e, c)| (Rational::new(e, 4), Cyclotomic::from_int(c))), t.clone()).unwrap()
        };
        let (x, y) = (series(&a), series(&b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).valuation(), &x.valuation() + &y.valuation());
    }
}

#[test]
fn field_is_closed_under_the_needed_roots() {
    assert_eq!(Cyclotomic::i().pow(2), Cyclotomic::from_int(-1));
    assert!(Cyclotomic::root_of_unity(8, 1).is_ok());
    assert!(Cyclotomic::root_of_unity(5, 1).is_err());
}
