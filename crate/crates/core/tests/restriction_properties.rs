use std::collections::BTreeSet;

use igusa_core::arith::Rational;
use igusa_core::context::NContext;
use igusa_core::lattice::lattice_m;
use igusa_core::restriction;

#[test]
fn embedding_index_bookkeeping() {
    let (emb, rep) = restriction::build_embedding().unwrap();
    assert!(rep.passed());
    assert_eq!(rep.index, 2);
    let det_n = emb.ambient.determinant().abs();
    let det_m = emb.member.determinant().abs();
    let det_c = Rational::from(rep.complement_norm.abs());
    assert_eq!(&det_m * &det_c, &det_n * &Rational::from(rep.index * rep.index));
}

#[test]
fn heegner_classification_is_stable_across_boxes() {
    let summaries: Vec<_> = (3..=5)
        .map(|b| restriction::heegner_restriction_cases(b).unwrap())
        .collect();
    for s in &summaries {
        assert!(s.counterexamples.is_empty(), "box {}: {:?}", s.bound, s.counterexamples.first());
        assert!(s.opposite_m_pairs > 0);
        assert_eq!(s.shape(), summaries[0].shape());
    }
    for w in summaries.windows(2) {
        for (small, large) in w[0].cases.iter().zip(&w[1].cases) {
            assert!(small.count <= large.count);
        }
    }
}

#[test]
fn rejects_an_empty_box() {
    assert!(restriction::heegner_restriction_cases(0).is_err());
}

#[test]
fn v_to_v1_is_injective() {
    let ctx = NContext::shared().unwrap();
    let disc_m = lattice_m().discriminant_module().unwrap();
    let kappa_m = disc_m.module.radical_kappa().unwrap();
    let images = restriction::half_vector_images(2).unwrap();
    assert!(images.values().all(|v| v.len() == 1));
    let mut seen = BTreeSet::new();
    for plane in ctx.planes() {
        let v1 = restriction::v_to_v1(ctx.module(), plane, &ctx.kappa, &disc_m.module, &kappa_m, &images).unwrap();
        assert!(v1.passed());
        assert!(seen.insert(v1.elements.clone()));
        let lines = restriction::seven_lines(&disc_m.module, &kappa_m, &v1.betas);
        assert_eq!(lines.union, 7);
    }
    assert_eq!(seen.len(), 15);
}

#[test]
fn boundary_is_self_dual() {
    let disc_m = lattice_m().discriminant_module().unwrap();
    let rep = restriction::boundary_configuration(&disc_m.module);
    assert_eq!((rep.points, rep.lines), (15, 15));
    assert_eq!(rep.points * 3, rep.lines * 3);
}

#[test]
fn hyperbolic_difference_is_an_m_zero_witness() {
    let n = igusa_core::lattice::lattice_n();
    let disc_m = lattice_m().discriminant_module().unwrap();
    let kappa_m = disc_m.module.radical_kappa().unwrap();
    let case = restriction::restriction_case(&n, &disc_m, &kappa_m, &[1, -1, 0, 0, 0, 0]).unwrap();
    assert_eq!((case.norm, case.m, case.r1_norm), (-4, 0, -4));
    assert_eq!(Some((0, -4, case.target_type.as_str())), restriction::expected_case(-4));
}
