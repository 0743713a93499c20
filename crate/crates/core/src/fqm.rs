//! Finite quadratic modules: a finite abelian group in Smith form with a
//! quadratic form `q` valued in `Q/2Z` and bilinear form `b` valued in `Q/Z`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Largest module we are willing to enumerate.
pub const MAX_ORDER: u64 = 1 << 16;

/// Smith coordinates of an element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FqmElement(pub Vec<u64>);

impl fmt::Display for FqmElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for FqmElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct FiniteQuadraticModule {
    orders: Vec<u64>,
    /// Inner products of chosen dual-lattice lifts of the generators.
    gram: Vec<Vec<Rational>>,
    elements: Vec<FqmElement>,
    q_values: Vec<Rational>,
}

impl FiniteQuadraticModule {
    /// Builds the module from generator orders and the rational Gram matrix of
    /// lifts of the generators. `q(x) = x^T G x mod 2`, `b(x,y) = x^T G y mod 1`.
    pub fn new(orders: Vec<u64>, gram: Vec<Vec<Rational>>) -> Result<Self> {
        let r = orders.len();
        if gram.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("gram does not match generator count".into()));
        }
        if orders.iter().any(|&n| n < 2) {
            return Err(Error::Module("generator orders must be at least 2".into()));
        }
        let total = orders.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n));
        match total {
            Some(t) if t <= MAX_ORDER => {}
            _ => return Err(Error::Module(format!("module order exceeds {MAX_ORDER}"))),
        }
        for i in 0..r {
            for j in 0..r {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Module("gram is not symmetric".into()));
                }
                let n = Rational::from(orders[i] as i64);
                if !(&gram[i][j] * &n).is_integer() {
                    return Err(Error::Module(format!("pairing of generators {i},{j} is not {}-torsion", orders[i])));
                }
            }
            let n = Rational::from(orders[i] as i64);
            if !(&(&gram[i][i] * &n) * &n).rem_euclid(&Rational::from(2)).is_zero() {
                return Err(Error::Module(format!("q is not well defined on generator {i}")));
            }
        }
        let mut module = FiniteQuadraticModule {
            orders,
            gram,
            elements: Vec::new(),
            q_values: Vec::new(),
        };
        module.elements = module.enumerate();
        module.q_values = module.elements.iter().map(|x| module.q_raw(x)).collect();
        Ok(module)
    }

    fn enumerate(&self) -> Vec<FqmElement> {
        let mut out = vec![FqmElement(Vec::new())];
        for &n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..n).map(move |k| {
                        let mut c = e.0.clone();
                        c.push(k);
                        FqmElement(c)
                    })
                })
                .collect();
        }
        out
    }

    fn q_raw(&self, x: &FqmElement) -> Rational {
        let mut acc = Rational::ZERO;
        for (i, &xi) in x.0.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &xj) in x.0.iter().enumerate() {
                if xj != 0 {
                    acc += &(&self.gram[i][j] * &Rational::from((xi * xj) as i64));
                }
            }
        }
        acc.rem_euclid(&Rational::from(2))
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[FqmElement] {
        &self.elements
    }

    pub fn zero(&self) -> FqmElement {
        FqmElement(vec![0; self.orders.len()])
    }

    pub fn is_two_elementary(&self) -> bool {
        self.orders.iter().all(|&n| n == 2)
    }

    /// Position of `x` in [`Self::elements`] (mixed radix, last coordinate fastest).
    pub fn index_of(&self, x: &FqmElement) -> usize {
        x.0.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + (c % n) as usize)
    }

    pub fn element(&self, i: usize) -> &FqmElement {
        &self.elements[i]
    }

    pub fn add(&self, x: &FqmElement, y: &FqmElement) -> FqmElement {
        FqmElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.orders)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        )
    }

    pub fn neg(&self, x: &FqmElement) -> FqmElement {
        FqmElement(x.0.iter().zip(&self.orders).map(|(a, n)| (n - a) % n).collect())
    }

    pub fn scalar(&self, k: i64, x: &FqmElement) -> FqmElement {
        FqmElement(
            x.0.iter()
                .zip(&self.orders)
                .map(|(&a, &n)| (k.rem_euclid(n as i64) as u64 * a) % n)
                .collect(),
        )
    }

    pub fn element_order(&self, x: &FqmElement) -> u64 {
        x.0.iter().zip(&self.orders).fold(1u64, |acc, (&a, &n)| {
            let o = n / num_integer::gcd(a, n);
            num_integer::lcm(acc, o)
        })
    }

    /// `q(x)` in `[0, 2)`.
    pub fn q(&self, x: &FqmElement) -> Rational {
        self.q_values[self.index_of(x)].clone()
    }

    pub fn q_at(&self, i: usize) -> &Rational {
        &self.q_values[i]
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn b(&self, x: &FqmElement, y: &FqmElement) -> Rational {
        let mut acc = Rational::ZERO;
        for (i, &xi) in x.0.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.0.iter().enumerate() {
                if yj != 0 {
                    acc += &(&self.gram[i][j] * &Rational::from((xi * yj) as i64));
                }
            }
        }
        acc.fract()
    }

    /// Elements `x != 0` with `q(x) = 0`.
    pub fn isotropic_vectors(&self) -> Vec<FqmElement> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(i, x)| self.q_values[*i].is_zero() && **x != self.zero())
            .map(|(_, x)| x.clone())
            .collect()
    }

    /// Totally isotropic subgroups `{0, x, y, x + y}` of order 4 with `2x = 2y = 0`,
    /// each listed by its three nonzero elements in sorted order.
    pub fn isotropic_planes(&self) -> Vec<[FqmElement; 3]> {
        let iso: Vec<FqmElement> = self
            .isotropic_vectors()
            .into_iter()
            .filter(|x| self.element_order(x) == 2)
            .collect();
        let mut seen = BTreeSet::new();
        for (k, x) in iso.iter().enumerate() {
            for y in &iso[k + 1..] {
                let z = self.add(x, y);
                if self.q(&z).is_zero() {
                    let mut plane = [x.clone(), y.clone(), z];
                    plane.sort();
                    seen.insert(plane);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// The subgroup generated by `gens`.
    pub fn span(&self, gens: &[FqmElement]) -> BTreeSet<FqmElement> {
        let mut out = BTreeSet::from([self.zero()]);
        let mut queue = VecDeque::from([self.zero()]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if out.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        out
    }

    /// The reflection `beta -> beta + 2 b(beta, alpha) alpha` in an element
    /// with `q(alpha) = 1` and `2 alpha = 0`.
    pub fn reflection(&self, alpha: &FqmElement) -> Result<FqmAutomorphism> {
        if !self.q(alpha).is_one() {
            return Err(Error::InvalidInput(format!("reflection vector {alpha} has q = {}", self.q(alpha))));
        }
        if self.element_order(alpha) != 2 {
            return Err(Error::InvalidInput(format!("reflection vector {alpha} has order {}", self.element_order(alpha))));
        }
        let perm = self
            .elements
            .iter()
            .map(|beta| {
                let k = (&self.b(beta, alpha) * &Rational::from(2)).to_i64().expect("2b is integral");
                self.index_of(&self.add(beta, &self.scalar(k, alpha)))
            })
            .collect();
        Ok(FqmAutomorphism { perm })
    }

    /// Translation by `x` as a permutation of element indices.
    pub fn translation(&self, x: &FqmElement) -> Vec<usize> {
        self.elements.iter().map(|y| self.index_of(&self.add(x, y))).collect()
    }

    /// The full orthogonal group by backtracking on generator images, with a
    /// cap on the number of search nodes.
    pub fn orthogonal_group(&self, node_budget: u64) -> Result<Vec<FqmAutomorphism>> {
        let gens: Vec<FqmElement> = (0..self.orders.len())
            .map(|k| {
                let mut c = vec![0; self.orders.len()];
                c[k] = 1;
                FqmElement(c)
            })
            .collect();
        let mut found = Vec::new();
        let mut nodes = 0u64;
        let mut images = Vec::with_capacity(gens.len());
        self.backtrack(&gens, &mut images, &mut found, &mut nodes, node_budget)?;
        Ok(found)
    }

    fn backtrack(
        &self,
        gens: &[FqmElement],
        images: &mut Vec<FqmElement>,
        found: &mut Vec<FqmAutomorphism>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExhausted(budget));
        }
        let k = images.len();
        if k == gens.len() {
            if let Some(a) = self.automorphism_from_images(images) {
                found.push(a);
            }
            return Ok(());
        }
        let g = &gens[k];
        let target_q = self.q(g);
        for (i, cand) in self.elements.iter().enumerate() {
            if self.q_values[i] != target_q || self.element_order(cand) != self.orders[k] {
                continue;
            }
            if (0..k).any(|j| self.b(cand, &images[j]) != self.b(g, &gens[j])) {
                continue;
            }
            images.push(cand.clone());
            self.backtrack(gens, images, found, nodes, budget)?;
            images.pop();
        }
        Ok(())
    }

    /// The homomorphism sending generator `k` to `images[k]`, if bijective.
    pub fn automorphism_from_images(&self, images: &[FqmElement]) -> Option<FqmAutomorphism> {
        let mut perm = Vec::with_capacity(self.order());
        let mut hit = vec![false; self.order()];
        for x in &self.elements {
            let mut y = self.zero();
            for (c, img) in x.0.iter().zip(images) {
                y = self.add(&y, &self.scalar(*c as i64, img));
            }
            let j = self.index_of(&y);
            if hit[j] {
                return None;
            }
            hit[j] = true;
            perm.push(j);
        }
        Some(FqmAutomorphism { perm })
    }

    pub fn preserves_form(&self, a: &FqmAutomorphism) -> bool {
        (0..self.order()).all(|i| self.q_values[i] == self.q_values[a.perm[i]])
    }

    /// `F = { x : 2x = 0, q(x) in Z }` and its unique nonzero element orthogonal
    /// to all of `F`.
    pub fn radical_kappa(&self) -> Result<FqmElement> {
        let f: Vec<&FqmElement> = self
            .elements
            .iter()
            .filter(|x| self.element_order(x) <= 2 && self.q(x).is_integer())
            .collect();
        let radical: Vec<&FqmElement> = f
            .iter()
            .filter(|x| ***x != self.zero() && f.iter().all(|y| self.b(x, y).is_zero()))
            .copied()
            .collect();
        match radical.as_slice() {
            [k] => Ok((*k).clone()),
            [] => Err(Error::Module("integral 2-torsion has no radical".into())),
            _ => Err(Error::Module(format!("radical of integral 2-torsion has {} nonzero elements", radical.len()))),
        }
    }

    /// Type of every element relative to `kappa`.
    pub fn element_type(&self, x: &FqmElement, kappa: &FqmElement) -> ElementType {
        if *x == self.zero() {
            ElementType::Zero
        } else if x == kappa {
            ElementType::Radical
        } else {
            let q = self.q(x);
            if q.is_zero() {
                ElementType::Isotropic
            } else if q.is_one() {
                ElementType::Unit
            } else {
                ElementType::Other(q)
            }
        }
    }

    pub fn classify_types(&self) -> Result<TypeCensus> {
        let kappa = self.radical_kappa()?;
        let mut counts: BTreeMap<ElementType, u64> = BTreeMap::new();
        for x in &self.elements {
            *counts.entry(self.element_type(x, &kappa)).or_default() += 1;
        }
        Ok(TypeCensus { kappa, counts })
    }

    /// Elements of each type, keyed by type.
    pub fn partition(&self, kappa: &FqmElement) -> BTreeMap<ElementType, Vec<FqmElement>> {
        let mut out: BTreeMap<ElementType, Vec<FqmElement>> = BTreeMap::new();
        for x in &self.elements {
            out.entry(self.element_type(x, kappa)).or_default().push(x.clone());
        }
        out
    }

    /// For each ordered pair of types, how many `v` of the second type pair to
    /// `0` and to `1/2` with a fixed `u` of the first, checking that the answer
    /// does not depend on `u`.
    pub fn pairing_table(&self, order: &[ElementType]) -> Result<PairingTable> {
        let kappa = self.radical_kappa()?;
        let parts = self.partition(&kappa);
        let empty = Vec::new();
        let mut counts = Vec::new();
        for tu in order {
            let us = parts.get(tu).unwrap_or(&empty);
            let mut row = Vec::new();
            for tv in order {
                let vs = parts.get(tv).unwrap_or(&empty);
                let tally = |u: &FqmElement| -> Result<(u64, u64)> {
                    let mut m = (0, 0);
                    for v in vs {
                        let b = self.b(u, v);
                        if b.is_zero() {
                            m.0 += 1;
                        } else if b == Rational::new(1, 2) {
                            m.1 += 1;
                        } else {
                            return Err(Error::Module(format!("b({u},{v}) = {b} is not in {{0, 1/2}}")));
                        }
                    }
                    Ok(m)
                };
                let first = us.first().map(tally).transpose()?.unwrap_or((0, 0));
                for u in us.iter().skip(1) {
                    let m = tally(u)?;
                    if m != first {
                        return Err(Error::mismatch(
                            format!("pairing counts of {} against {} at {u}", tu.label(), tv.label()),
                            format!("{first:?}"),
                            format!("{m:?}"),
                        ));
                    }
                }
                row.push(first);
            }
            counts.push(row);
        }
        Ok(PairingTable {
            types: order.to_vec(),
            counts,
        })
    }

    /// The group generated by `gens`, closed by breadth-first search.
    pub fn closure(&self, gens: &[FqmAutomorphism], limit: usize) -> Result<Vec<FqmAutomorphism>> {
        let id = FqmAutomorphism::identity(self.order());
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.perm.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in gens {
                let h = g.compose(s);
                if seen.insert(h.perm.clone()) {
                    if out.len() >= limit {
                        return Err(Error::BudgetExhausted(limit as u64));
                    }
                    out.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(out)
    }
}

/// Element types used throughout: zero, nonzero isotropic, `q = 1` other than
/// the radical element, the radical element itself, and every other value of `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ElementType {
    Zero,
    Isotropic,
    Unit,
    Radical,
    Other(Rational),
}

impl ElementType {
    pub fn label(&self) -> String {
        match self {
            ElementType::Zero => "00".into(),
            ElementType::Isotropic => "0".into(),
            ElementType::Unit => "1".into(),
            ElementType::Radical => "10".into(),
            ElementType::Other(q) => q.to_string(),
        }
    }

    pub fn parse(label: &str) -> Result<Self> {
        Ok(match label {
            "00" => ElementType::Zero,
            "0" => ElementType::Isotropic,
            "1" => ElementType::Unit,
            "10" => ElementType::Radical,
            other => ElementType::Other(other.parse().map_err(Error::InvalidInput)?),
        })
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug)]
pub struct TypeCensus {
    pub kappa: FqmElement,
    pub counts: BTreeMap<ElementType, u64>,
}

impl TypeCensus {
    pub fn count(&self, t: &ElementType) -> u64 {
        self.counts.get(t).copied().unwrap_or(0)
    }

    /// Fails with the first type whose count differs from `expected`.
    pub fn expect(&self, expected: &[(ElementType, u64)]) -> Result<()> {
        let total: u64 = expected.iter().map(|(_, c)| c).sum();
        let actual_total: u64 = self.counts.values().sum();
        for (t, c) in expected {
            if self.count(t) != *c {
                return Err(Error::mismatch(format!("number of elements of type {t}"), c, self.count(t)));
            }
        }
        if total != actual_total {
            return Err(Error::mismatch("module order", total, actual_total));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingTable {
    pub types: Vec<ElementType>,
    /// `counts[u][v] = (#{b = 0}, #{b = 1/2})`.
    pub counts: Vec<Vec<(u64, u64)>>,
}

/// An automorphism as a permutation of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqmAutomorphism {
    pub perm: Vec<usize>,
}

impl FqmAutomorphism {
    pub fn identity(n: usize) -> Self {
        FqmAutomorphism { perm: (0..n).collect() }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        FqmAutomorphism {
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        FqmAutomorphism { perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn hyperbolic_mod2() -> FiniteQuadraticModule {
        // discriminant form of U(2): generators e/2, f/2 with <e/2, f/2> = 1/2
        FiniteQuadraticModule::new(vec![2, 2], vec![vec![q(0, 1), q(1, 2)], vec![q(1, 2), q(0, 1)]]).unwrap()
    }

    #[test]
    fn hyperbolic_plane_values() {
        let m = hyperbolic_mod2();
        let qs: Vec<Rational> = m.elements().iter().map(|x| m.q(x)).collect();
        assert_eq!(qs, vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]);
        assert!(m.radical_kappa().is_err());
    }

    #[test]
    fn rejects_ill_defined_q() {
        assert!(FiniteQuadraticModule::new(vec![2], vec![vec![q(1, 4)]]).is_err());
    }

    #[test]
    fn reflection_is_involution() {
        let m = hyperbolic_mod2();
        let a = FqmElement(vec![1, 1]);
        let r = m.reflection(&a).unwrap();
        assert!(r.compose(&r).is_identity());
        assert!(m.preserves_form(&r));
        assert!(m.reflection(&FqmElement(vec![1, 0])).is_err());
    }
}
