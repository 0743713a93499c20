use std::collections::BTreeSet;

use igusa_core::arith::{Cyclotomic, QSeries, Rational};
use igusa_core::context::NContext;
use igusa_core::fixtures;
use igusa_core::fqm::ElementType;
use igusa_core::obstruction::{self, CollapsedRep, DivisorSpec, EisensteinSeries};
use proptest::prelude::*;

fn collapsed() -> CollapsedRep {
    let ctx = NContext::shared().unwrap();
    obstruction::collapsed_rep(&ctx.weil.dual(), &ctx.kappa, &fixtures::n_type_order()).unwrap()
}

fn basis() -> Vec<EisensteinSeries> {
    obstruction::eisenstein_basis(16).unwrap()
}

fn f_of(a: i64, b: i64, basis: &[EisensteinSeries]) -> Vec<QSeries> {
    obstruction::f_tuple(&Rational::from(a), &Rational::from(b), basis).unwrap()
}

#[test]
fn dimension_splits_into_eisenstein_and_cusp() {
    let rep = collapsed();
    obstruction::verify_reference(&rep).unwrap();
    let dim = obstruction::dim_modular_forms(&rep, 3).unwrap();
    let eis = obstruction::eisenstein_subspace(&rep, 3).len() as i64;
    assert!(dim.dimension >= 0);
    assert!(eis <= dim.dimension);
    assert_eq!(dim.dimension - eis, 0);
}

#[test]
fn each_component_lives_in_one_exponent_class() {
    let rep = collapsed();
    let f = f_of(1, 3, &basis());
    let mut matches_t = true;
    let mut matches_conj = true;
    for (j, series) in f.iter().enumerate() {
        let classes: BTreeSet<String> = series
            .terms()
            .map(|(e, _)| Cyclotomic::exp_2pi_i(e).unwrap().to_string())
            .collect();
        assert!(classes.len() <= 1, "component {j} mixes exponent classes {classes:?}");
        if let Some((e, _)) = series.terms().next() {
            let phase = Cyclotomic::exp_2pi_i(e).unwrap();
            matches_t &= phase == rep.t[(j, j)];
            matches_conj &= phase == rep.t[(j, j)].conj();
        }
    }
    assert!(matches_t || matches_conj);
}

#[test]
fn oracle_agrees_off_the_basis() {
    for (a1, a2) in [(1, 1), (3, 0), (2, 3)] {
        let cmp = obstruction::compare_with_oracle(a1, a2, 400).unwrap();
        assert!(cmp.error < 1e-5, "{a1},{a2}: {}", cmp.error);
    }
}

#[test]
fn type_shares_are_orbit_constant() {
    let ctx = NContext::shared().unwrap();
    assert!(obstruction::orbits_are_types(ctx.module(), &ctx.kappa, ctx.orthogonal_group().unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn f_tuple_is_linear_in_its_parameters(a in -5i64..=5, b in -5i64..=5) {
        let basis = basis();
        let whole = f_of(a, b, &basis);
        let (fa, fb) = (f_of(1, 0, &basis), f_of(0, 1, &basis));
        for j in 0..6 {
            let combo = fa[j].scale(&Cyclotomic::from_int(a)).add(&fb[j].scale(&Cyclotomic::from_int(b)));
            prop_assert_eq!(&whole[j], &combo);
        }
    }

    #[test]
    fn weight_is_linear_in_the_divisor(c in proptest::collection::vec(-3i64..=3, 4)) {
        let ctx = NContext::shared().unwrap();
        let order = fixtures::n_type_order();
        let f = f_of(-1, 0, &basis());
        let mut spec = DivisorSpec::empty();
        let mut expected = Rational::ZERO;
        for (&(label, w), k) in fixtures::PRODUCT_WEIGHTS.iter().zip(&c) {
            let mut term = DivisorSpec::heegner_type(ElementType::parse(label).unwrap()).unwrap().terms.remove(0);
            term.multiplicity = *k;
            spec = spec.with(term);
            expected += &(&Rational::from(w) * &Rational::from(*k));
        }
        let weight = obstruction::borcherds_weight(&spec, ctx.module(), &ctx.kappa, &order, &f).unwrap();
        prop_assert_eq!(weight, expected);
    }
}
