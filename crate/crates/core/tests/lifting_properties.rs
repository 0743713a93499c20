use igusa_core::arith::Cyclotomic;
use igusa_core::context::NContext;
use igusa_core::lifting::{self, LiftCheckInput};
use igusa_core::weil;
use num_bigint::BigInt;
use proptest::prelude::*;

fn truncated_product(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| &a[i] * &b[k - i]).sum()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eta_powers_multiply(a in 0i64..20, b in 0i64..20) {
        let terms = 25;
        let pa = lifting::eta_product_coefficients(a, terms);
        let pb = lifting::eta_product_coefficients(b, terms);
        prop_assert_eq!(truncated_product(&pa, &pb), lifting::eta_product_coefficients(a + b, terms));
    }

    #[test]
    fn recurrence_matches_multiplication(m in 0i64..24) {
        prop_assert_eq!(
            lifting::eta_product_coefficients(m, 30),
            lifting::eta_product_by_multiplication(m, 30)
        );
    }

    #[test]
    fn lift_coefficient_is_linear_in_theta(j in 0usize..15, k in 0usize..15, c in -4i64..=4) {
        let ctx = NContext::shared().unwrap();
        let thetas = ctx.thetas().unwrap();
        let lift = |t: &weil::GroupRingVector| {
            lifting::lift_leading_coefficient(&ctx.disc, &LiftCheckInput::fixture(t.clone(), 18)).unwrap()
        };
        let combo = thetas[j].add(&thetas[k].scale(&Cyclotomic::from_int(c)));
        let expected = &lift(&thetas[j]) + &lift(&thetas[k]).scale(&c.into());
        prop_assert_eq!(lift(&combo), expected);
    }
}

#[test]
fn eta_negative_power_inverts() {
    let p = lifting::eta_product_coefficients(6, 20);
    let q = lifting::eta_product_coefficients(-6, 20);
    let one = truncated_product(&p, &q);
    assert_eq!(one[0], BigInt::from(1));
    assert!(one[1..].iter().all(|c| *c == BigInt::from(0)));
}

#[test]
fn multiplier_pairs_are_exclusive() {
    let ctx = NContext::shared().unwrap();
    let n = ctx.signature.1;
    let theta0 = &ctx.w0().unwrap().1[0];
    for theta in ctx.thetas().unwrap() {
        assert!(lifting::multiplier_compatibility(&ctx.weil, theta, 18, n).compatible);
        assert!(!lifting::multiplier_compatibility(&ctx.weil, theta, 6, n).compatible);
    }
    assert!(lifting::multiplier_compatibility(&ctx.weil, theta0, 6, n).compatible);
    assert!(!lifting::multiplier_compatibility(&ctx.weil, theta0, 18, n).compatible);
}
