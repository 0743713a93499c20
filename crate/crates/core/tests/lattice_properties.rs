use std::collections::BTreeMap;

use igusa_core::arith::Rational;
use igusa_core::context::NContext;
use igusa_core::fixtures;
use igusa_core::fqm::FiniteQuadraticModule;
use igusa_core::lattice::{lattice_m, lattice_n, Lattice, RootKind};
use proptest::prelude::*;

fn piece(k: usize) -> Lattice {
    match k {
        0 => Lattice::standard(RootKind::Hyperbolic, 2),
        1 => Lattice::standard(RootKind::A(1), 1),
        2 => Lattice::standard(RootKind::A(1), 2),
        3 => Lattice::standard(RootKind::A(2), 1),
        _ => Lattice::standard(RootKind::Hyperbolic, 3),
    }
    .unwrap()
}

fn q_histogram(m: &FiniteQuadraticModule) -> BTreeMap<Rational, u64> {
    let mut h = BTreeMap::new();
    for x in m.elements() {
        *h.entry(m.q(x)).or_insert(0) += 1;
    }
    h
}

fn convolve(a: &BTreeMap<Rational, u64>, b: &BTreeMap<Rational, u64>) -> BTreeMap<Rational, u64> {
    let two = Rational::from(2);
    let mut h = BTreeMap::new();
    for (x, m) in a {
        for (y, n) in b {
            *h.entry((x + y).rem_euclid(&two)).or_insert(0) += m * n;
        }
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinant_is_discriminant_order(kinds in proptest::collection::vec(0usize..5, 1..4)) {
        let parts: Vec<Lattice> = kinds.iter().map(|&k| piece(k)).collect();
        let l = Lattice::direct_sum(&parts).unwrap();
        let disc = l.discriminant_module().unwrap();
        prop_assert_eq!(l.determinant().abs(), Rational::from(disc.module.order() as i64));
    }

    #[test]
    fn discriminant_of_sum_is_sum_of_discriminants(a in 0usize..5, b in 0usize..5) {
        let (x, y) = (piece(a), piece(b));
        let sum = Lattice::direct_sum(&[x.clone(), y.clone()]).unwrap();
        let hx = q_histogram(&x.discriminant_module().unwrap().module);
        let hy = q_histogram(&y.discriminant_module().unwrap().module);
        prop_assert_eq!(q_histogram(&sum.discriminant_module().unwrap().module), convolve(&hx, &hy));
    }
}

#[test]
fn small_discriminant_forms() {
    let a1 = piece(1).discriminant_module().unwrap().module;
    assert_eq!(a1.order(), 2);
    let nonzero = a1.elements().iter().find(|x| **x != a1.zero()).unwrap();
    assert_eq!(a1.q(nonzero), Rational::new(3, 2));
    let u2 = q_histogram(&piece(0).discriminant_module().unwrap().module);
    assert_eq!(u2, BTreeMap::from([(Rational::ZERO, 3), (Rational::ONE, 1)]));
}

#[test]
fn n_and_m_shapes() {
    let n = lattice_n();
    assert!(n.is_even());
    assert_eq!(n.signature().unwrap(), (2, 4));
    assert_eq!(n.determinant().abs(), Rational::from(64));
    let m = lattice_m();
    assert_eq!(m.signature().unwrap(), (2, 3));
    assert_eq!(m.discriminant_module().unwrap().module.order(), 64);
}

#[test]
fn census_sums_to_the_group_order() {
    let ctx = NContext::shared().unwrap();
    let census = ctx.module().classify_types().unwrap();
    let total: u64 = fixtures::n_type_order().iter().map(|t| census.count(t)).sum();
    assert_eq!(total, 64);
}

#[test]
fn pairing_rows_add_up_to_type_sizes() {
    let ctx = NContext::shared().unwrap();
    let order = fixtures::n_type_order();
    let table = ctx.module().pairing_table(&order).unwrap();
    for row in &table.counts {
        for (v, &(m0, m1)) in row.iter().enumerate() {
            assert_eq!(m0 + m1, fixtures::N_TYPE_COUNTS[v]);
        }
    }
}

#[test]
fn automorphisms_preserve_q_and_b() {
    let ctx = NContext::shared().unwrap();
    let m = ctx.module();
    let group = ctx.orthogonal_group().unwrap();
    assert_eq!(group.len(), 1440);
    for g in group {
        for i in 0..m.order() {
            let x = m.element(i);
            let gx = m.element(g.apply(i));
            assert_eq!(m.q(x), m.q(gx));
            for j in 0..m.order() {
                assert_eq!(m.b(x, m.element(j)), m.b(gx, m.element(g.apply(j))));
            }
        }
    }
}

#[test]
fn isotropic_incidence_double_count() {
    let ctx = NContext::shared().unwrap();
    let m = ctx.module();
    let planes = m.isotropic_planes();
    let vectors = m.isotropic_vectors();
    assert_eq!((vectors.len(), planes.len()), (15, 15));
    for v in &vectors {
        assert_eq!(planes.iter().filter(|p| p.contains(v)).count(), 3);
    }
    assert_eq!(planes.iter().map(|p| p.len()).sum::<usize>(), 15 * 3);
}
