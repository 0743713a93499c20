//! The sublattice `M = U(2)^2 + <a1 - a2>` of `N`, the structure of `A_M`,
//! and how Heegner divisors of `N` restrict to `M`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Matrix, Rational};
use crate::fixtures;
use crate::fqm::{ElementType, FiniteQuadraticModule, FqmElement};
use crate::lattice::{lattice_m, lattice_n, smith_normal_form, DiscriminantForm, Lattice, LatticeVector};
use crate::{Error, Result};

/// `M` inside `N`, in the basis `e1, f1, e2, f2, a1, a2` of `N`.
#[derive(Clone, Debug)]
pub struct EmbeddedSublattice {
    pub ambient: Lattice,
    pub member_basis: Vec<Vec<i64>>,
    pub complement_generator: Vec<i64>,
    pub member: Lattice,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub member_gram_matches: bool,
    pub primitive: bool,
    pub complement_orthogonal: bool,
    pub complement_rank: usize,
    pub complement_norm: i64,
    pub index: i64,
    pub member_discriminant_orders: Vec<u64>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.member_gram_matches
            && self.primitive
            && self.complement_orthogonal
            && self.complement_rank == 1
            && self.complement_norm == -4
            && self.index == 2
            && self.member_discriminant_orders == [2, 2, 2, 2, 4]
    }
}

pub fn build_embedding() -> Result<(EmbeddedSublattice, EmbeddingReport)> {
    let ambient = lattice_n();
    let member_basis: Vec<Vec<i64>> = vec![
        vec![1, 0, 0, 0, 0, 0],
        vec![0, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![0, 0, 0, 0, 1, -1],
    ];
    let complement_generator = vec![0, 0, 0, 0, 1, 1];
    let gram: Vec<Vec<i64>> = member_basis
        .iter()
        .map(|u| member_basis.iter().map(|v| ambient.inner_int(u, v)).collect())
        .collect();
    let member = Lattice::new(gram, lattice_m().labels().to_vec())?;
    let member_gram_matches = member.gram() == lattice_m().gram();

    let big: Vec<Vec<BigInt>> = member_basis.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let snf = smith_normal_form(&big);
    let primitive = snf.diagonal.len() == member_basis.len() && snf.diagonal.iter().all(|d| d.abs().is_one());

    let complement_orthogonal = member_basis.iter().all(|u| ambient.inner_int(u, &complement_generator) == 0);
    let products = Matrix::from_fn(member_basis.len(), ambient.rank(), |i, j| {
        let mut e = vec![0; ambient.rank()];
        e[j] = 1;
        Rational::from(ambient.inner_int(&member_basis[i], &e))
    });
    let complement_rank = products.nullspace().len();
    let complement_norm = ambient.norm_int(&complement_generator);

    // [N : M + <c>]^2 = det(M + <c>) / det(N)
    let ratio = &(&member.determinant() * &Rational::from(complement_norm)) / &ambient.determinant();
    let index = (1..=64i64)
        .find(|k| Rational::from(k * k) == ratio)
        .ok_or_else(|| Error::Lattice(format!("index^2 = {ratio} is not a square")))?;
    let member_discriminant_orders = member.discriminant_module()?.module.orders().to_vec();
    Ok((
        EmbeddedSublattice {
            ambient,
            member_basis,
            complement_generator,
            member,
        },
        EmbeddingReport {
            member_gram_matches,
            primitive,
            complement_orthogonal,
            complement_rank,
            complement_norm,
            index,
            member_discriminant_orders,
        },
    ))
}

/// Number of `+-1`-orbits on `A_M` of each type, in [`fixtures::m_type_order`].
#[derive(Clone, Debug, Serialize)]
pub struct MCensus {
    pub kappa: FqmElement,
    pub orbit_counts: Vec<u64>,
    pub quarter_types_have_order_four: bool,
    pub negation_is_kappa_shift: bool,
    pub kappa_fixed: bool,
}

pub fn am_census(module: &FiniteQuadraticModule) -> Result<MCensus> {
    let kappa = module.radical_kappa()?;
    let order = fixtures::m_type_order();
    let mut counts = vec![0u64; order.len()];
    let mut seen = BTreeSet::new();
    let mut quarter_order = true;
    let mut shift = true;
    for x in module.elements() {
        if seen.contains(x) {
            continue;
        }
        let neg = module.neg(x);
        seen.insert(x.clone());
        seen.insert(neg.clone());
        let t = module.element_type(x, &kappa);
        let k = order
            .iter()
            .position(|o| *o == t)
            .ok_or_else(|| Error::Module(format!("unexpected type {} in A_M", t.label())))?;
        counts[k] += 1;
        if let ElementType::Other(q) = &t {
            if !(q * &Rational::from(2)).is_integer() {
                quarter_order &= module.element_order(x) == 4;
                shift &= neg == module.add(x, &kappa);
            }
        }
    }
    Ok(MCensus {
        kappa_fixed: module.neg(&kappa) == kappa,
        kappa,
        orbit_counts: counts,
        quarter_types_have_order_four: quarter_order,
        negation_is_kappa_shift: shift,
    })
}

/// Isotropic points and lines of `A_M` and their incidence.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub points: usize,
    pub lines: usize,
    pub points_per_line: BTreeSet<usize>,
    pub lines_per_point: BTreeSet<usize>,
    pub perpendicular_points: BTreeSet<usize>,
}

impl BoundaryReport {
    pub fn passed(&self) -> bool {
        let three = BTreeSet::from([3]);
        self.points == 15
            && self.lines == 15
            && self.points_per_line == three
            && self.lines_per_point == three
            && self.perpendicular_points == BTreeSet::from([7])
    }
}

pub fn boundary_configuration(module: &FiniteQuadraticModule) -> BoundaryReport {
    let points = module.isotropic_vectors();
    let lines = module.isotropic_planes();
    let lines_per_point = points
        .iter()
        .map(|p| lines.iter().filter(|l| l.contains(p)).count())
        .collect();
    let points_per_line = lines
        .iter()
        .map(|l| l.iter().filter(|x| points.contains(x)).count())
        .collect();
    let perpendicular_points = points
        .iter()
        .map(|p| points.iter().filter(|y| module.b(p, y).is_zero()).count())
        .collect();
    BoundaryReport {
        points: points.len(),
        lines: lines.len(),
        points_per_line,
        lines_per_point,
        perpendicular_points,
    }
}

/// `r = r1 + (m/2)(a1 + a2)` with `r1` in `M*`; `r1` is recorded in the basis
/// `e1, f1, e2, f2, a` of `M` (twice its `a`-coordinate, to stay integral).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RestrictionCase {
    pub r: Vec<i64>,
    pub norm: i64,
    pub m: i64,
    pub r1_norm: i64,
    pub target_type: String,
}

/// Splits `r` and finds the type of `r1/2` in `A_M`.
pub fn restriction_case(n: &Lattice, disc_m: &DiscriminantForm, kappa_m: &FqmElement, r: &[i64]) -> Result<RestrictionCase> {
    let norm = n.norm_int(r);
    let m = r[4] + r[5];
    let r1_norm = norm + m * m;
    let half_r1 = LatticeVector(vec![
        Rational::new(r[0], 2),
        Rational::new(r[1], 2),
        Rational::new(r[2], 2),
        Rational::new(r[3], 2),
        Rational::new(r[4] - r[5], 4),
    ]);
    let class = disc_m.class_of(&half_r1)?;
    Ok(RestrictionCase {
        r: r.to_vec(),
        norm,
        m,
        r1_norm,
        target_type: disc_m.module.element_type(&class, kappa_m).label(),
    })
}

/// The allowed outcome for each norm, as `(|m|, r1^2, type of r1/2)`.
pub fn expected_case(norm: i64) -> Option<(i64, i64, &'static str)> {
    match norm {
        -4 => Some((0, -4, "1")),
        -2 => Some((1, -1, "7/4")),
        -6 => Some((1, -5, "3/4")),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CaseCount {
    pub norm: i64,
    pub abs_m: i64,
    pub r1_norm: i64,
    pub target_type: String,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeegnerSummary {
    pub bound: i64,
    pub cases: Vec<CaseCount>,
    pub kappa_vectors: u64,
    pub non_negative_r1: u64,
    /// Sorted; empty when the classification holds on the box.
    pub counterexamples: Vec<RestrictionCase>,
    /// Number of `r1` met with both `m = 1` and `m = -1`.
    pub opposite_m_pairs: u64,
}

impl HeegnerSummary {
    /// The classification keys, ignoring counts.
    pub fn shape(&self) -> BTreeSet<(i64, i64, i64, String)> {
        self.cases
            .iter()
            .map(|c| (c.norm, c.abs_m, c.r1_norm, c.target_type.clone()))
            .collect()
    }
}

/// Enumerates `r` in `[-bound, bound]^6` with `r^2 in {-2, -4, -6}` and
/// checks every restriction with `r1^2 < 0` against [`expected_case`].
/// Vectors with `r/2 = kappa_N` are set aside.
pub fn heegner_restriction_cases(bound: i64) -> Result<HeegnerSummary> {
    if bound < 1 {
        return Err(Error::InvalidInput(format!("box half-width {bound} must be positive")));
    }
    let n = lattice_n();
    let disc_n = n.discriminant_module()?;
    let kappa_n = disc_n.module.radical_kappa()?;
    let disc_m = lattice_m().discriminant_module()?;
    let kappa_m = disc_m.module.radical_kappa()?;
    let side: Vec<i64> = (-bound..=bound).collect();

    let found: Vec<(RestrictionCase, bool)> = side
        .par_iter()
        .map(|&x0| -> Result<Vec<(RestrictionCase, bool)>> {
            let mut out = Vec::new();
            let mut r = [x0, 0, 0, 0, 0, 0];
            for &x1 in &side {
                r[1] = x1;
                for &x2 in &side {
                    r[2] = x2;
                    for &x3 in &side {
                        r[3] = x3;
                        for &x4 in &side {
                            r[4] = x4;
                            for &x5 in &side {
                                r[5] = x5;
                                let norm = n.norm_int(&r);
                                if !matches!(norm, -2 | -4 | -6) {
                                    continue;
                                }
                                let is_kappa = norm == -4 && disc_n.class_of_half(&r)? == kappa_n;
                                out.push((restriction_case(&n, &disc_m, &kappa_m, &r)?, is_kappa));
                            }
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut counts: BTreeMap<(i64, i64, i64, String), u64> = BTreeMap::new();
    let mut kappa_vectors = 0;
    let mut non_negative_r1 = 0;
    let mut counterexamples = Vec::new();
    let mut signs: BTreeMap<Vec<i64>, BTreeSet<i64>> = BTreeMap::new();
    for (case, is_kappa) in found {
        if is_kappa {
            kappa_vectors += 1;
            continue;
        }
        if case.r1_norm >= 0 {
            non_negative_r1 += 1;
            continue;
        }
        let ok = expected_case(case.norm)
            .is_some_and(|(m, r1, t)| case.m.abs() == m && case.r1_norm == r1 && case.target_type == t);
        if !ok {
            counterexamples.push(case.clone());
        }
        if case.m.abs() == 1 {
            let r = &case.r;
            let r1 = vec![r[0], r[1], r[2], r[3], r[4] - r[5]];
            signs.entry(r1).or_default().insert(case.m);
        }
        *counts
            .entry((case.norm, case.m.abs(), case.r1_norm, case.target_type))
            .or_default() += 1;
    }
    counterexamples.sort();
    Ok(HeegnerSummary {
        bound,
        cases: counts
            .into_iter()
            .map(|((norm, abs_m, r1_norm, target_type), count)| CaseCount {
                norm,
                abs_m,
                r1_norm,
                target_type,
                count,
            })
            .collect(),
        kappa_vectors,
        non_negative_r1,
        counterexamples,
        opposite_m_pairs: signs.values().filter(|s| s.len() == 2).count() as u64,
    })
}

/// Images in `A_M` of the `(-4)`-vectors `r` with `m = 0`, keyed by the class
/// of `r/2` in `A_N`, over the box `[-bound, bound]^6`.
pub fn half_vector_images(bound: i64) -> Result<BTreeMap<FqmElement, BTreeSet<FqmElement>>> {
    let n = lattice_n();
    let disc_n = n.discriminant_module()?;
    let disc_m = lattice_m().discriminant_module()?;
    let side: Vec<i64> = (-bound..=bound).collect();
    let mut out: BTreeMap<FqmElement, BTreeSet<FqmElement>> = BTreeMap::new();
    for &x0 in &side {
        for &x1 in &side {
            for &x2 in &side {
                for &x3 in &side {
                    for &x4 in &side {
                        let r = [x0, x1, x2, x3, x4, -x4];
                        if n.norm_int(&r) != -4 {
                            continue;
                        }
                        let half_r1 = LatticeVector(vec![
                            Rational::new(x0, 2),
                            Rational::new(x1, 2),
                            Rational::new(x2, 2),
                            Rational::new(x3, 2),
                            Rational::new(2 * x4, 4),
                        ]);
                        out.entry(disc_n.class_of_half(&r)?)
                            .or_default()
                            .insert(disc_m.class_of(&half_r1)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct V1Report {
    pub betas: Vec<FqmElement>,
    pub elements: Vec<FqmElement>,
    pub dimension: usize,
    pub b_null: bool,
    pub contains_kappa: bool,
    pub sum_is_kappa: bool,
    pub unit_count: usize,
}

impl V1Report {
    pub fn passed(&self) -> bool {
        self.dimension == 3 && self.b_null && self.contains_kappa && self.sum_is_kappa && self.unit_count == 3
    }
}

/// Sends the three `q = 1` elements of `V = <I, kappa_N>` other than
/// `kappa_N` through their `(-4)`-lifts to `A_M`; fails if some element has
/// no lift in the table or its lifts disagree.
pub fn v_to_v1(
    module_n: &FiniteQuadraticModule,
    plane: &[FqmElement; 3],
    kappa_n: &FqmElement,
    module_m: &FiniteQuadraticModule,
    kappa_m: &FqmElement,
    images: &BTreeMap<FqmElement, BTreeSet<FqmElement>>,
) -> Result<V1Report> {
    let mut betas = Vec::new();
    for c in plane {
        let beta = module_n.add(c, kappa_n);
        let img = images
            .get(&beta)
            .ok_or_else(|| Error::Lattice(format!("no (-4)-lift of {beta} in the box")))?;
        if img.len() != 1 {
            return Err(Error::mismatch(format!("images of the lifts of {beta}"), 1, img.len()));
        }
        betas.push(img.iter().next().cloned().expect("one image"));
    }
    let mut gens = betas.clone();
    gens.push(kappa_m.clone());
    let elements: Vec<FqmElement> = module_m.span(&gens).into_iter().collect();
    let dimension = elements.len().trailing_zeros() as usize;
    let b_null = elements
        .iter()
        .all(|x| elements.iter().all(|y| module_m.b(x, y).is_zero()));
    let sum = betas.iter().fold(module_m.zero(), |acc, b| module_m.add(&acc, b));
    let unit_count = elements
        .iter()
        .filter(|x| module_m.element_type(x, kappa_m) == ElementType::Unit)
        .count();
    Ok(V1Report {
        contains_kappa: elements.contains(kappa_m),
        sum_is_kappa: sum == *kappa_m,
        betas,
        elements,
        dimension,
        b_null,
        unit_count,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SevenLinesReport {
    pub lines_per_beta: Vec<usize>,
    pub union: usize,
    pub common_line: bool,
    pub contain_shifted_point: bool,
    pub families_disjoint: bool,
}

impl SevenLinesReport {
    pub fn passed(&self) -> bool {
        self.lines_per_beta == [3, 3, 3]
            && self.union == 7
            && self.common_line
            && self.contain_shifted_point
            && self.families_disjoint
    }
}

/// Isotropic lines of `A_M` perpendicular to each `beta_i` of a `V_1`.
pub fn seven_lines(module_m: &FiniteQuadraticModule, kappa_m: &FqmElement, betas: &[FqmElement]) -> SevenLinesReport {
    let lines = module_m.isotropic_planes();
    let per_beta: Vec<Vec<&[FqmElement; 3]>> = betas
        .iter()
        .map(|b| lines.iter().filter(|l| l.iter().all(|x| module_m.b(b, x).is_zero())).collect())
        .collect();
    let union: BTreeSet<&[FqmElement; 3]> = per_beta.iter().flatten().copied().collect();
    let common: BTreeSet<&[FqmElement; 3]> = union
        .iter()
        .filter(|l| per_beta.iter().all(|f| f.contains(l)))
        .copied()
        .collect();
    let contain_shifted_point = betas
        .iter()
        .zip(&per_beta)
        .all(|(b, f)| f.iter().all(|l| l.contains(&module_m.add(b, kappa_m))));
    let own: Vec<BTreeSet<&[FqmElement; 3]>> = per_beta
        .iter()
        .map(|f| f.iter().filter(|l| !common.contains(*l)).copied().collect())
        .collect();
    let families_disjoint = (0..own.len()).all(|i| (i + 1..own.len()).all(|j| own[i].is_disjoint(&own[j])));
    SevenLinesReport {
        lines_per_beta: per_beta.iter().map(Vec::len).collect(),
        union: union.len(),
        common_line: common.len() == 1,
        contain_shifted_point,
        families_disjoint,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_restricts_to_a_seven_quarter_class() {
        let n = lattice_n();
        let disc_m = lattice_m().discriminant_module().unwrap();
        let kappa_m = disc_m.module.radical_kappa().unwrap();
        let case = restriction_case(&n, &disc_m, &kappa_m, &[0, 0, 0, 0, 1, 0]).unwrap();
        assert_eq!((case.norm, case.m, case.r1_norm), (-2, 1, -1));
        assert_eq!(case.target_type, "7/4");
    }

    #[test]
    fn embedding_is_primitive_of_index_two() {
        let (_, report) = build_embedding().unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
