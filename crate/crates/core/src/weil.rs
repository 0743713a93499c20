//! The Weil representation of `SL(2, Z)` on the group ring of a finite
//! quadratic module, its finite image, characters and isotypic pieces.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{CMatrix, Cyclotomic, Matrix, Rational};
use crate::error::{Error, Result};
use crate::fqm::{FiniteQuadraticModule, FqmAutomorphism, FqmElement};

/// Formal sum of module elements with cyclotomic coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Serialize)]
pub struct GroupRingVector(BTreeMap<FqmElement, Cyclotomic>);

impl GroupRingVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, x: FqmElement, c: Cyclotomic) {
        let slot = self.0.entry(x.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.0.remove(&x);
        }
    }

    pub fn coeff(&self, x: &FqmElement) -> Cyclotomic {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &FqmElement> {
        self.0.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FqmElement, &Cyclotomic)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, s: &Cyclotomic) -> Self {
        let mut out = Self::new();
        for (x, c) in &self.0 {
            out.add_term(x.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, c) in &other.0 {
            out.add_term(x.clone(), c.clone());
        }
        out
    }

    pub fn to_dense(&self, module: &FiniteQuadraticModule) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); module.order()];
        for (x, c) in &self.0 {
            v[module.index_of(x)] = c.clone();
        }
        v
    }

    pub fn from_dense(module: &FiniteQuadraticModule, v: &[Cyclotomic]) -> Self {
        let mut out = Self::new();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.0.insert(module.element(i).clone(), c.clone());
            }
        }
        out
    }

    /// Image under the permutation action `e_x -> e_{g x}`.
    pub fn permute(&self, module: &FiniteQuadraticModule, g: &FqmAutomorphism) -> Self {
        let mut out = Self::new();
        for (x, c) in &self.0 {
            out.add_term(module.element(g.apply(module.index_of(x))).clone(), c.clone());
        }
        out
    }
}

impl fmt::Debug for GroupRingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(x, c)| format!("({c})e{x}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    S,
    T,
}

/// An element of `SL(2, Z/level)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Sl2Label(pub [[i64; 2]; 2]);

impl Sl2Label {
    pub const IDENTITY: Sl2Label = Sl2Label([[1, 0], [0, 1]]);

    pub fn s(level: i64) -> Self {
        Sl2Label([[0, level - 1], [1, 0]])
    }

    pub fn t() -> Self {
        Sl2Label([[1, 1], [0, 1]])
    }

    pub fn mul(&self, other: &Self, level: i64) -> Self {
        let (a, b) = (self.0, other.0);
        let mut m = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]).rem_euclid(level);
            }
        }
        Sl2Label(m)
    }

    pub fn inverse(&self, level: i64) -> Self {
        let [[a, b], [c, d]] = self.0;
        Sl2Label([[d.rem_euclid(level), (-b).rem_euclid(level)], [(-c).rem_euclid(level), a.rem_euclid(level)]])
    }

    pub fn neg(&self, level: i64) -> Self {
        Sl2Label(self.0.map(|row| row.map(|x| (-x).rem_euclid(level))))
    }

    pub fn reduce(&self, level: i64) -> Self {
        Sl2Label(self.0.map(|row| row.map(|x| x.rem_euclid(level))))
    }
}

impl fmt::Display for Sl2Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

#[derive(Clone, Debug)]
pub struct RepElement {
    pub word: Vec<Generator>,
    pub label: Sl2Label,
    pub matrix: CMatrix,
}

#[derive(Clone, Debug)]
pub struct WeilRepresentation {
    pub module: FiniteQuadraticModule,
    pub s: CMatrix,
    pub t: CMatrix,
    pub level: i64,
}

impl WeilRepresentation {
    /// `rho(T) e_a = e(q(a)/2) e_a`, `rho(S) e_a = e(-sig/8)/sqrt|A| sum_b e(-b(b,a)) e_b`
    /// with `sig = positive - negative`. Requires `|A|` to be a square.
    pub fn new(module: &FiniteQuadraticModule, signature: (usize, usize)) -> Result<Self> {
        let n = module.order();
        let root = (n as f64).sqrt().round() as usize;
        if root * root != n {
            return Err(Error::InvalidInput(format!("module order {n} is not a perfect square")));
        }
        let sig = signature.0 as i64 - signature.1 as i64;
        let prefactor = Cyclotomic::zeta(-3 * sig).scale(&Rational::new(1, root as i64));
        let t = Matrix::diagonal(
            (0..n)
                .map(|i| Cyclotomic::exp_2pi_i(&(module.q_at(i) * &Rational::new(1, 2))))
                .collect::<Result<Vec<_>>>()?,
        );
        let elems = module.elements();
        let mut s = Matrix::zeros(n, n);
        for (bi, beta) in elems.iter().enumerate() {
            for (ai, alpha) in elems.iter().enumerate() {
                s[(bi, ai)] = &prefactor * &Cyclotomic::exp_2pi_i(&-module.b(beta, alpha))?;
            }
        }
        let tn = crate::arith::eigen::multiplicative_order(&t)?;
        Ok(WeilRepresentation {
            module: module.clone(),
            s,
            t,
            level: tn as i64,
        })
    }

    /// The complex-conjugate (dual) representation.
    pub fn dual(&self) -> Self {
        WeilRepresentation {
            module: self.module.clone(),
            s: self.s.map(Cyclotomic::conj),
            t: self.t.map(Cyclotomic::conj),
            level: self.level,
        }
    }

    pub fn generator(&self, g: Generator) -> &CMatrix {
        match g {
            Generator::S => &self.s,
            Generator::T => &self.t,
        }
    }

    /// `S^4 = 1`, `T^level = 1`, `(ST)^3 = S^2`, each reported separately.
    pub fn relations(&self) -> Vec<(&'static str, bool)> {
        let s2 = self.s.mul(&self.s);
        let st = self.s.mul(&self.t);
        vec![
            ("S^2 = -1", s2 == Matrix::identity(s2.rows()).neg()),
            ("S^4 = 1", s2.mul(&s2).is_identity()),
            ("T^level = 1", self.t.pow(self.level as u64).is_identity()),
            ("(ST)^3 = S^2", st.pow(3) == s2),
        ]
    }

    /// Closure of `{rho(S), rho(T)}` with `SL(2, Z/level)` labels; fails if a
    /// label is reached with two different matrices or the closure grows past `limit`.
    pub fn image_group(&self, limit: usize) -> Result<ImageGroup> {
        let n = self.module.order();
        let level = self.level;
        let id = RepElement {
            word: Vec::new(),
            label: Sl2Label::IDENTITY,
            matrix: Matrix::identity(n),
        };
        let mut index: HashMap<Sl2Label, usize> = HashMap::from([(id.label, 0)]);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        let t_diag: Vec<Cyclotomic> = (0..n).map(|i| self.t[(i, i)].clone()).collect();
        while let Some(k) = queue.pop_front() {
            for g in [Generator::S, Generator::T] {
                let src = &elements[k];
                let (label, matrix) = match g {
                    Generator::S => (src.label.mul(&Sl2Label::s(level), level), src.matrix.mul(&self.s)),
                    Generator::T => {
                        let mut m = src.matrix.clone();
                        for i in 0..n {
                            for j in 0..n {
                                if !m[(i, j)].is_zero() {
                                    m[(i, j)] = &m[(i, j)] * &t_diag[j];
                                }
                            }
                        }
                        (src.label.mul(&Sl2Label::t(), level), m)
                    }
                };
                if let Some(&j) = index.get(&label) {
                    if elements[j].matrix != matrix {
                        return Err(Error::Mismatch {
                            what: format!("matrix attached to {label}"),
                            expected: "a single matrix per SL(2) label".into(),
                            actual: "two different products".into(),
                        });
                    }
                    continue;
                }
                if elements.len() >= limit {
                    return Err(Error::BudgetExhausted(limit as u64));
                }
                let mut word = elements[k].word.clone();
                word.push(g);
                index.insert(label, elements.len());
                queue.push_back(elements.len());
                elements.push(RepElement { word, label, matrix });
            }
        }
        Ok(ImageGroup { level, elements, index })
    }
}

#[derive(Clone, Debug)]
pub struct ImageGroup {
    pub level: i64,
    pub elements: Vec<RepElement>,
    index: HashMap<Sl2Label, usize>,
}

impl ImageGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn by_label(&self, label: &Sl2Label) -> Option<&RepElement> {
        self.index.get(&label.reduce(self.level)).map(|&k| &self.elements[k])
    }

    /// Labels of the named class representatives, in table order.
    pub fn representative_labels(&self) -> Vec<Sl2Label> {
        let l = self.level;
        let e = Sl2Label::IDENTITY;
        let s = Sl2Label::s(l);
        let t = Sl2Label::t();
        let t2 = t.mul(&t, l);
        let st = s.mul(&t, l);
        let st2 = st.mul(&st, l);
        vec![e, e.neg(l), s, s.neg(l), t, t.neg(l), t2, t2.neg(l), st, st2]
    }

    /// Conjugacy classes as sets of labels.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Sl2Label>> {
        let l = self.level;
        let mut seen: HashMap<Sl2Label, usize> = HashMap::new();
        let mut classes: Vec<Vec<Sl2Label>> = Vec::new();
        for g in &self.elements {
            if seen.contains_key(&g.label) {
                continue;
            }
            let mut class: Vec<Sl2Label> = self
                .elements
                .iter()
                .map(|h| h.label.mul(&g.label, l).mul(&h.label.inverse(l), l))
                .collect();
            class.sort();
            class.dedup();
            for c in &class {
                seen.insert(*c, classes.len());
            }
            classes.push(class);
        }
        classes
    }

    /// Class index of each element plus sizes, ordered like the named
    /// representatives. Fails if two representatives share a class or some
    /// class has no representative.
    pub fn named_classes(&self) -> Result<NamedClasses> {
        let classes = self.conjugacy_classes();
        let reps = self.representative_labels();
        let mut rep_class = Vec::new();
        for r in &reps {
            let k = classes
                .iter()
                .position(|c| c.contains(r))
                .ok_or_else(|| Error::Module(format!("representative {r} not in the group")))?;
            if rep_class.contains(&k) {
                return Err(Error::Module(format!("representative {r} repeats a class")));
            }
            rep_class.push(k);
        }
        if rep_class.len() != classes.len() {
            return Err(Error::mismatch("number of conjugacy classes", reps.len(), classes.len()));
        }
        let mut of_label = HashMap::new();
        for (named, &k) in rep_class.iter().enumerate() {
            for label in &classes[k] {
                of_label.insert(*label, named);
            }
        }
        Ok(NamedClasses {
            sizes: rep_class.iter().map(|&k| classes[k].len() as u64).collect(),
            representatives: reps,
            of_label,
        })
    }

    /// Traces on the named representatives.
    pub fn class_traces(&self) -> Vec<Cyclotomic> {
        self.representative_labels()
            .iter()
            .map(|l| self.by_label(l).expect("representative present").matrix.trace())
            .collect()
    }

    /// Traces after complex conjugation of the representation.
    pub fn conjugate_class_traces(&self) -> Vec<Cyclotomic> {
        self.class_traces().iter().map(Cyclotomic::conj).collect()
    }

    /// `(deg chi / |G|) sum_g conj(chi(g)) rho(g)`.
    pub fn isotypic_projection(&self, classes: &NamedClasses, character: &[Cyclotomic]) -> CMatrix {
        let n = self.elements[0].matrix.rows();
        let deg = character[0].clone();
        let scale = deg.scale(&Rational::new(1, self.order() as i64));
        let parts: Vec<CMatrix> = self
            .elements
            .par_iter()
            .map(|g| {
                let c = character[classes.of_label[&g.label]].conj();
                if c.is_zero() {
                    Matrix::zeros(n, n)
                } else {
                    g.matrix.scale(&c)
                }
            })
            .collect();
        let mut acc = Matrix::zeros(n, n);
        for p in &parts {
            acc = acc.add(p);
        }
        acc.scale(&scale)
    }
}

#[derive(Clone, Debug)]
pub struct NamedClasses {
    pub representatives: Vec<Sl2Label>,
    pub sizes: Vec<u64>,
    /// Index into the named representatives for every group label.
    pub of_label: HashMap<Sl2Label, usize>,
}

/// A character table transcribed by hand, verified before use.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub class_names: Vec<String>,
    pub values: Vec<Vec<Cyclotomic>>,
    pub class_sizes: Vec<u64>,
}

impl CharacterTable {
    pub fn new(class_names: Vec<String>, values: Vec<Vec<Cyclotomic>>, class_sizes: Vec<u64>) -> Result<Self> {
        let table = CharacterTable {
            class_names,
            values,
            class_sizes,
        };
        table.verify()?;
        Ok(table)
    }

    pub fn group_order(&self) -> u64 {
        self.class_sizes.iter().sum()
    }

    pub fn inner(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for ((x, y), &size) in a.iter().zip(b).zip(&self.class_sizes) {
            acc += &(x * &y.conj()).scale(&Rational::from(size as i64));
        }
        acc.scale(&Rational::new(1, self.group_order() as i64))
    }

    /// Row orthonormality and the column relation `sum_i |chi_i(g)|^2 = |G| / |class(g)|`.
    pub fn verify(&self) -> Result<()> {
        let k = self.class_sizes.len();
        if self.values.len() != k || self.values.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch("character table is not square".into()));
        }
        for a in 0..k {
            for b in 0..k {
                let ip = self.inner(&self.values[a], &self.values[b]);
                let expect = if a == b { Cyclotomic::one() } else { Cyclotomic::zero() };
                if ip != expect {
                    return Err(Error::mismatch(format!("<chi_{}, chi_{}>", a + 1, b + 1), expect, ip));
                }
            }
        }
        let order = self.group_order() as i64;
        for c in 0..k {
            let mut acc = Cyclotomic::zero();
            for row in &self.values {
                acc += &(&row[c] * &row[c].conj());
            }
            let acc = acc.scale(&Rational::from(self.class_sizes[c] as i64));
            if acc != Cyclotomic::from_int(order) {
                return Err(Error::mismatch(format!("column relation at {}", self.class_names[c]), order, acc));
            }
        }
        Ok(())
    }

    /// Multiplicities of each irreducible in a class function; must be natural numbers.
    pub fn decompose(&self, class_function: &[Cyclotomic]) -> Result<Vec<i64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let m = self.inner(class_function, row);
                m.as_rational()
                    .and_then(Rational::to_i64)
                    .filter(|&x| x >= 0)
                    .ok_or_else(|| Error::Numerical(format!("multiplicity of chi_{} is {m}", i + 1)))
            })
            .collect()
    }
}

/// Basis of the column space of a projection, as group-ring vectors.
pub fn column_space(module: &FiniteQuadraticModule, p: &CMatrix) -> Vec<GroupRingVector> {
    let (_, pivots) = p.rref();
    pivots
        .iter()
        .map(|&j| GroupRingVector::from_dense(module, &p.column(j)))
        .collect()
}

/// The isotypic subspace for `character`, required to have dimension `expected_dim`.
pub fn isotypic_subspace(
    module: &FiniteQuadraticModule,
    group: &ImageGroup,
    classes: &NamedClasses,
    character: &[Cyclotomic],
    expected_dim: usize,
) -> Result<(CMatrix, Vec<GroupRingVector>)> {
    let p = group.isotypic_projection(classes, character);
    let basis = column_space(module, &p);
    if basis.len() != expected_dim {
        return Err(Error::mismatch("isotypic dimension", expected_dim, basis.len()));
    }
    Ok((p, basis))
}

/// `theta = sum_{c in I} (e_{a0 + c} - e_{a0 + c + kappa})` for the least
/// `a0` with `q(a0) = 3/2` orthogonal to the plane.
pub fn theta_v(module: &FiniteQuadraticModule, plane: &[FqmElement; 3], kappa: &FqmElement) -> Result<GroupRingVector> {
    let alpha0 = admissible_offsets(module, plane)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Module(format!("no admissible offset for plane {plane:?}")))?;
    Ok(theta_with_offset(module, plane, kappa, &alpha0))
}

/// Elements with `q = 3/2` orthogonal to every element of the plane, in Smith order.
pub fn admissible_offsets(module: &FiniteQuadraticModule, plane: &[FqmElement; 3]) -> Vec<FqmElement> {
    let three_halves = Rational::new(3, 2);
    module
        .elements()
        .iter()
        .filter(|x| module.q(x) == three_halves && plane.iter().all(|c| module.b(x, c).is_zero()))
        .cloned()
        .collect()
}

pub fn theta_with_offset(
    module: &FiniteQuadraticModule,
    plane: &[FqmElement; 3],
    kappa: &FqmElement,
    alpha0: &FqmElement,
) -> GroupRingVector {
    let mut theta = GroupRingVector::new();
    let zero = module.zero();
    for c in std::iter::once(&zero).chain(plane.iter()) {
        let plus = module.add(alpha0, c);
        let minus = module.add(&plus, kappa);
        theta.add_term(plus, Cyclotomic::one());
        theta.add_term(minus, Cyclotomic::from_int(-1));
    }
    theta
}

/// `rho(g) v` for a dense representation matrix.
pub fn act(module: &FiniteQuadraticModule, m: &CMatrix, v: &GroupRingVector) -> GroupRingVector {
    GroupRingVector::from_dense(module, &m.mul_vec(&v.to_dense(module)))
}

/// The scalar `lambda` with `m v = lambda v`, if `v` is an eigenvector.
pub fn eigenvalue(module: &FiniteQuadraticModule, m: &CMatrix, v: &GroupRingVector) -> Option<Cyclotomic> {
    let (x, c) = v.terms().next()?;
    let image = act(module, m, v);
    let lambda = &image.coeff(x) * &c.inv()?;
    (image == v.scale(&lambda)).then_some(lambda)
}

/// Results of certifying irreducibility of an isotypic piece under a
/// permutation group commuting with the representation.
#[derive(Clone, Debug, Serialize)]
pub struct IrreducibilityReport {
    pub group_order: usize,
    pub character_at_identity: Rational,
    pub norm: Rational,
    pub central_elements: usize,
    pub central_scalar: Option<Rational>,
    pub commutes: bool,
}

/// `chi(g) = trace(P * Perm_g) = sum_a P[a][g a]`.
pub fn permutation_character(p: &CMatrix, g: &FqmAutomorphism) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for a in 0..p.rows() {
        acc += &p[(a, g.apply(a))];
    }
    acc
}

pub fn irreducibility_check(
    rep: &WeilRepresentation,
    projection: &CMatrix,
    group: &[FqmAutomorphism],
) -> Result<IrreducibilityReport> {
    let chars: Vec<Cyclotomic> = group.par_iter().map(|g| permutation_character(projection, g)).collect();
    let mut norm = Cyclotomic::zero();
    for c in &chars {
        norm += &(c * &c.conj());
    }
    let norm = norm.scale(&Rational::new(1, group.len() as i64));
    let norm = norm
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::Numerical(format!("character norm {norm} is not rational")))?;
    let id_pos = group.iter().position(FqmAutomorphism::is_identity).ok_or_else(|| Error::Module("identity missing".into()))?;
    let at_identity = chars[id_pos].as_rational().cloned().unwrap_or(Rational::ZERO);

    let center: Vec<&FqmAutomorphism> = group
        .iter()
        .filter(|z| group.iter().all(|g| z.compose(g) == g.compose(z)))
        .collect();
    let central_scalar = center
        .iter()
        .find(|z| !z.is_identity())
        .and_then(|z| central_scalar(projection, z));

    let commutes = group.par_iter().all(|g| commutes_with(&rep.s, g) && commutes_with(&rep.t, g));
    Ok(IrreducibilityReport {
        group_order: group.len(),
        character_at_identity: at_identity,
        norm,
        central_elements: center.len(),
        central_scalar,
        commutes,
    })
}

/// `c` with `P * Perm_z = c P`, if any.
fn central_scalar(p: &CMatrix, z: &FqmAutomorphism) -> Option<Rational> {
    for c in [Rational::ONE, -Rational::ONE] {
        let ok = (0..p.rows()).all(|i| (0..p.cols()).all(|a| p[(i, z.apply(a))] == p[(i, a)].scale(&c)));
        if ok {
            return Some(c);
        }
    }
    None
}

/// `Perm_g M = M Perm_g`, i.e. `M[g b][g a] = M[b][a]`.
pub fn commutes_with(m: &CMatrix, g: &FqmAutomorphism) -> bool {
    (0..m.rows()).all(|b| (0..m.cols()).all(|a| m[(g.apply(b), g.apply(a))] == m[(b, a)]))
}

/// Dense rank of a family of group-ring vectors.
pub fn rank(module: &FiniteQuadraticModule, vectors: &[GroupRingVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.iter().map(|v| v.to_dense(module)).collect()).rank()
}

/// `V = <I, kappa>` in Smith order.
pub fn plane_with_kappa(module: &FiniteQuadraticModule, plane: &[FqmElement; 3], kappa: &FqmElement) -> Vec<FqmElement> {
    let mut gens = plane.to_vec();
    gens.push(kappa.clone());
    module.span(&gens).into_iter().collect()
}

/// Elements of `V = <I, kappa>` with `q = 1`, `kappa` included.
pub fn unit_elements(module: &FiniteQuadraticModule, plane: &[FqmElement; 3], kappa: &FqmElement) -> Vec<FqmElement> {
    plane_with_kappa(module, plane, kappa)
        .into_iter()
        .filter(|x| module.q(x).is_one())
        .collect()
}

/// `+1` or `-1` if the reflection in `beta` fixes or negates `theta`, `None` otherwise.
pub fn reflection_sign(module: &FiniteQuadraticModule, beta: &FqmElement, theta: &GroupRingVector) -> Result<Option<i64>> {
    let image = theta.permute(module, &module.reflection(beta)?);
    Ok(if image == *theta {
        Some(1)
    } else if image == theta.scale(&Cyclotomic::from_int(-1)) {
        Some(-1)
    } else {
        None
    })
}
