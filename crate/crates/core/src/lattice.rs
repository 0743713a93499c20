//! Integral lattices given by Gram matrices, with signatures and discriminant
//! modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{Matrix, QMatrix, Rational};
use crate::error::{Error, Result};
use crate::fqm::{FiniteQuadraticModule, FqmElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
}

/// Rational coordinates with respect to a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeVector(pub Vec<Rational>);

impl LatticeVector {
    pub fn from_ints(v: &[i64]) -> Self {
        LatticeVector(v.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        LatticeVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }
}

/// Root-system building blocks. Definite blocks are negative definite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Hyperbolic,
    A(usize),
    D(usize),
    E(usize),
}

impl Lattice {
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if labels.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("gram and labels disagree in size".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Lattice(format!("gram is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Lattice { gram, labels })
    }

    /// `kind` with its Gram matrix multiplied by `scale`.
    pub fn standard(kind: RootKind, scale: i64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::Lattice("scale must be nonzero".into()));
        }
        let (mut gram, prefix) = match kind {
            RootKind::Hyperbolic => (vec![vec![0, 1], vec![1, 0]], ""),
            RootKind::A(n) if n >= 1 => (cartan(n, |i, j| i + 1 == j), "a"),
            RootKind::D(n) if n >= 4 => (cartan(n, |i, j| (i + 1 == j && j < n - 1) || (i == n - 3 && j == n - 1)), "d"),
            RootKind::E(n) if (6..=8).contains(&n) => (cartan(n, |i, j| (i + 1 == j && i >= 1) || (i == 0 && j == 3)), "e"),
            other => return Err(Error::Lattice(format!("no standard lattice {other:?}"))),
        };
        for row in gram.iter_mut() {
            for x in row.iter_mut() {
                *x *= scale;
            }
        }
        let labels = if kind == RootKind::Hyperbolic {
            vec!["e".to_string(), "f".to_string()]
        } else {
            (1..=gram.len()).map(|k| format!("{prefix}{k}")).collect()
        };
        Lattice::new(gram, labels)
    }

    pub fn direct_sum(parts: &[Lattice]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Lattice("direct sum of no lattices".into()));
        }
        let n: usize = parts.iter().map(Lattice::rank).sum();
        let mut gram = vec![vec![0; n]; n];
        let mut labels = Vec::with_capacity(n);
        let mut off = 0;
        for p in parts {
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    gram[off + i][off + j] = p.gram[i][j];
                }
            }
            labels.extend(p.labels.iter().cloned());
            off += p.rank();
        }
        Lattice::new(gram, labels)
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::DimensionMismatch("label count".into()));
        }
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Vector from integer coefficients on labelled basis vectors.
    pub fn vector(&self, terms: &[(i64, &str)]) -> Result<LatticeVector> {
        let mut v = vec![Rational::ZERO; self.rank()];
        for (c, label) in terms {
            let k = self
                .label_index(label)
                .ok_or_else(|| Error::InvalidInput(format!("unknown basis label {label}")))?;
            v[k] += &Rational::from(*c);
        }
        Ok(LatticeVector(v))
    }

    pub fn gram_q(&self) -> QMatrix {
        Matrix::from_fn(self.rank(), self.rank(), |i, j| Rational::from(self.gram[i][j]))
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn inner(&self, v: &LatticeVector, w: &LatticeVector) -> Rational {
        let mut acc = Rational::ZERO;
        for i in 0..self.rank() {
            if v.0[i].is_zero() {
                continue;
            }
            for j in 0..self.rank() {
                if self.gram[i][j] != 0 && !w.0[j].is_zero() {
                    acc += &(&(&v.0[i] * &w.0[j]) * &Rational::from(self.gram[i][j]));
                }
            }
        }
        acc
    }

    pub fn norm(&self, v: &LatticeVector) -> Rational {
        self.inner(v, v)
    }

    /// Integer variant of [`Self::norm`] for hot enumeration loops.
    pub fn norm_int(&self, v: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..v.len() {
            if v[i] == 0 {
                continue;
            }
            for j in 0..v.len() {
                acc += v[i] * v[j] * self.gram[i][j];
            }
        }
        acc
    }

    pub fn inner_int(&self, v: &[i64], w: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..v.len() {
            for j in 0..w.len() {
                acc += v[i] * w[j] * self.gram[i][j];
            }
        }
        acc
    }

    /// `v` lies in the dual lattice.
    pub fn in_dual(&self, v: &LatticeVector) -> bool {
        self.gram_q().mul_vec(&v.0).iter().all(Rational::is_integer)
    }

    /// Signature `(positive, negative)` via symmetric Gaussian elimination.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let n = self.rank();
        let mut m = self.gram_q();
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            if m[(k, k)].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                    swap_sym(&mut m, k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !m[(k, j)].is_zero()) {
                    // replace basis vector k by b_k + b_j, giving diagonal 2 m_kj
                    for t in 0..n {
                        let v = &m[(k, t)] + &m[(j, t)];
                        m[(k, t)] = v;
                    }
                    for t in 0..n {
                        let v = &m[(t, k)] + &m[(t, j)];
                        m[(t, k)] = v;
                    }
                } else {
                    return Err(Error::Lattice("degenerate gram matrix".into()));
                }
            }
            let p = m[(k, k)].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &p;
                for j in k..n {
                    let v = &m[(i, j)] - &(&f * &m[(k, j)]);
                    m[(i, j)] = v;
                }
                for j in k..n {
                    let v = &m[(j, i)] - &(&f * &m[(j, k)]);
                    m[(j, i)] = v;
                }
            }
        }
        Ok((pos, neg))
    }

    pub fn determinant(&self) -> Rational {
        determinant(&self.gram_q())
    }

    /// `L*/L` with the induced forms, via a Smith normal form of the Gram matrix.
    pub fn discriminant_module(&self) -> Result<DiscriminantForm> {
        if !self.is_even() {
            return Err(Error::Lattice("lattice is not even".into()));
        }
        let g: Vec<Vec<BigInt>> = self.gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let snf = smith_normal_form(&g);
        if snf.diagonal.iter().any(Zero::is_zero) {
            return Err(Error::Lattice("degenerate gram matrix".into()));
        }
        let n = self.rank();
        let to_q = |m: &[Vec<BigInt>]| Matrix::from_fn(n, n, |i, j| Rational::from(m[i][j].clone()));
        let u = to_q(&snf.left);
        let gq = self.gram_q();
        let ginv = gq.inverse().expect("nondegenerate");
        let uinv = u.inverse().expect("unimodular");
        let lift = ginv.mul(&uinv);
        let mut orders = Vec::new();
        let mut reps = Vec::new();
        let mut rows = Vec::new();
        for (i, d) in snf.diagonal.iter().enumerate() {
            let d = d.abs().to_u64().ok_or_else(|| Error::Lattice("elementary divisor too large".into()))?;
            if d > 1 {
                orders.push(d);
                reps.push(LatticeVector(lift.column(i)));
                rows.push(i);
            }
        }
        let module_gram: Vec<Vec<Rational>> =
            reps.iter().map(|x| reps.iter().map(|y| self.inner(x, y)).collect()).collect();
        let module = FiniteQuadraticModule::new(orders, module_gram)?;
        let ug = u.mul(&gq);
        let to_smith = Matrix::from_fn(rows.len(), n, |r, j| ug[(rows[r], j)].clone());
        Ok(DiscriminantForm {
            lattice: self.clone(),
            module,
            representatives: reps,
            to_smith,
        })
    }
}

fn cartan(n: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; n]; n];
    for i in 0..n {
        g[i][i] = -2;
        for j in 0..n {
            if i != j && (edge(i, j) || edge(j, i)) {
                g[i][j] = 1;
            }
        }
    }
    g
}

fn swap_sym(m: &mut QMatrix, a: usize, b: usize) {
    m.swap_rows(a, b);
    for t in 0..m.rows() {
        let x = m[(t, a)].clone();
        m[(t, a)] = m[(t, b)].clone();
        m[(t, b)] = x;
    }
}

pub fn determinant(m: &QMatrix) -> Rational {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Rational::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Rational::ZERO;
        };
        if p != c {
            a.swap_rows(p, c);
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det = &det * &piv;
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] / &piv;
            for j in c..n {
                let v = &a[(i, j)] - &(&f * &a[(c, j)]);
                a[(i, j)] = v;
            }
        }
    }
    det
}

/// The discriminant module of a lattice together with the data needed to
/// move between dual-lattice vectors and Smith coordinates.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    pub lattice: Lattice,
    pub module: FiniteQuadraticModule,
    /// Dual-lattice lifts of the Smith generators.
    pub representatives: Vec<LatticeVector>,
    /// Rows of `U G` for the nontrivial elementary divisors.
    to_smith: QMatrix,
}

impl DiscriminantForm {
    /// Class of a dual-lattice vector.
    pub fn class_of(&self, v: &LatticeVector) -> Result<FqmElement> {
        if !self.lattice.in_dual(v) {
            return Err(Error::InvalidInput(format!("{:?} is not in the dual lattice", v.0)));
        }
        let s = self.to_smith.mul_vec(&v.0);
        let coords = s
            .iter()
            .zip(self.module.orders())
            .map(|(x, &n)| {
                x.rem_euclid(&Rational::from(n as i64))
                    .to_i64()
                    .expect("integral Smith coordinate") as u64
            })
            .collect();
        Ok(FqmElement(coords))
    }

    /// A dual-lattice vector in the class `x`.
    pub fn lift(&self, x: &FqmElement) -> LatticeVector {
        let mut v = LatticeVector(vec![Rational::ZERO; self.lattice.rank()]);
        for (c, rep) in x.0.iter().zip(&self.representatives) {
            v = v.add(&rep.scale(&Rational::from(*c as i64)));
        }
        v
    }

    /// Class of `v / 2` for an integral vector `v`.
    pub fn class_of_half(&self, v: &[i64]) -> Result<FqmElement> {
        let lv = LatticeVector(v.iter().map(|&x| Rational::new(x, 2)).collect());
        self.class_of(&lv)
    }
}

/// `left * a * right = diag(diagonal)` with unimodular `left`, `right`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

/// Smith normal form of a square integer matrix; each diagonal entry divides the next.
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let ident = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
    };
    let mut left = ident(rows);
    let mut right = ident(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        left.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in right.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let f = m[i][t].div_floor(&m[t][t]);
            if f.is_zero() {
                if !m[i][t].is_zero() {
                    clean = false;
                }
                continue;
            }
            for j in 0..cols {
                let v = &m[t][j] * &f;
                m[i][j] -= v;
            }
            for j in 0..rows {
                let v = &left[t][j] * &f;
                left[i][j] -= v;
            }
            if !m[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let f = m[t][j].div_floor(&m[t][t]);
            if f.is_zero() {
                if !m[t][j].is_zero() {
                    clean = false;
                }
                continue;
            }
            for i in 0..rows {
                let v = &m[i][t] * &f;
                m[i][j] -= v;
            }
            for i in 0..cols {
                let v = &right[i][t] * &f;
                right[i][j] -= v;
            }
            if !m[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the remaining block by the pivot
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
        if let Some(i) = bad {
            for j in 0..cols {
                let v = m[i][j].clone();
                m[t][j] += v;
            }
            for j in 0..rows {
                let v = left[i][j].clone();
                left[t][j] += v;
            }
            continue;
        }
        if m[t][t].is_negative() {
            for j in 0..cols {
                m[t][j] = -m[t][j].clone();
            }
            for j in 0..rows {
                left[t][j] = -left[t][j].clone();
            }
        }
        t += 1;
    }
    let diagonal = (0..rows.min(cols)).map(|i| m[i][i].clone()).collect();
    SmithForm { diagonal, left, right }
}

/// `U(2) + U(2) + A1 + A1` with basis `e1, f1, e2, f2, a1, a2`.
pub fn lattice_n() -> Lattice {
    let u2 = Lattice::standard(RootKind::Hyperbolic, 2).expect("standard");
    let a1 = Lattice::standard(RootKind::A(1), 1).expect("standard");
    Lattice::direct_sum(&[u2.clone(), u2, a1.clone(), a1])
        .and_then(|l| l.with_labels(&["e1", "f1", "e2", "f2", "a1", "a2"]))
        .expect("fixed shape")
}

/// `U(2) + U(2) + A1(2)` with basis `e1, f1, e2, f2, a`.
pub fn lattice_m() -> Lattice {
    let u2 = Lattice::standard(RootKind::Hyperbolic, 2).expect("standard");
    let a1 = Lattice::standard(RootKind::A(1), 2).expect("standard");
    Lattice::direct_sum(&[u2.clone(), u2, a1])
        .and_then(|l| l.with_labels(&["e1", "f1", "e2", "f2", "a"]))
        .expect("fixed shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        (0..a.len())
            .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn smith_recomposes() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a);
        let d: Vec<i64> = s.diagonal.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
        let prod = mul(&mul(&s.left, &a), &s.right);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(prod[i][j], expect);
            }
        }
    }

    #[test]
    fn e8_is_unimodular() {
        let e8 = Lattice::standard(RootKind::E(8), 1).unwrap();
        assert_eq!(e8.determinant(), Rational::ONE);
        assert_eq!(e8.signature().unwrap(), (0, 8));
        assert_eq!(e8.discriminant_module().unwrap().module.order(), 1);
    }

    #[test]
    fn dn_discriminants() {
        let d4 = Lattice::standard(RootKind::D(4), 1).unwrap();
        assert_eq!(d4.determinant(), Rational::from(4));
        let d5 = Lattice::standard(RootKind::D(5), 1).unwrap();
        assert_eq!(d5.discriminant_module().unwrap().module.orders(), &[4]);
    }

    #[test]
    fn hyperbolic_signature() {
        let u = Lattice::standard(RootKind::Hyperbolic, 1).unwrap();
        assert_eq!(u.signature().unwrap(), (1, 1));
    }
}
