use igusa_core::arith::Cyclotomic;
use igusa_core::context::NContext;
use igusa_core::weil;

#[test]
fn generator_relations() {
    let ctx = NContext::shared().unwrap();
    for (name, holds) in ctx.weil.relations() {
        assert!(holds, "{name}");
    }
    assert!(ctx.weil.s.pow(4).is_identity());
    assert!(ctx.weil.t.pow(4).is_identity());
}

#[test]
fn orthogonal_group_commutes_with_generators() {
    let ctx = NContext::shared().unwrap();
    for g in ctx.orthogonal_group().unwrap() {
        assert!(weil::commutes_with(&ctx.weil.s, g));
        assert!(weil::commutes_with(&ctx.weil.t, g));
    }
}

#[test]
fn character_table_is_orthonormal() {
    let ctx = NContext::shared().unwrap();
    let table = ctx.character_table().unwrap();
    table.verify().unwrap();
    assert_eq!(table.group_order(), 48);
}

#[test]
fn every_theta_lies_in_w() {
    let ctx = NContext::shared().unwrap();
    let (p, _) = ctx.w().unwrap();
    for theta in ctx.thetas().unwrap() {
        assert_eq!(&weil::act(ctx.module(), p, theta), theta);
    }
}

#[test]
fn offset_choice_only_changes_the_sign() {
    let ctx = NContext::shared().unwrap();
    let m = ctx.module();
    for (plane, theta) in ctx.planes().iter().zip(ctx.thetas().unwrap()) {
        let offsets = weil::admissible_offsets(m, plane);
        assert!(!offsets.is_empty());
        let minus = theta.scale(&Cyclotomic::from_int(-1));
        for a in &offsets {
            let other = weil::theta_with_offset(m, plane, &ctx.kappa, a);
            assert!(other == *theta || other == minus, "offset {a}");
        }
    }
}

#[test]
fn dual_representation_is_the_conjugate() {
    let ctx = NContext::shared().unwrap();
    let dual = ctx.weil.dual();
    assert_eq!(dual.t, ctx.weil.t.map(|x| x.conj()));
    assert_eq!(dual.s, ctx.weil.s.map(|x| x.conj()));
}
