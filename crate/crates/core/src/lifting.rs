//! Eta powers, multiplier compatibility of `eta^m theta`, and the leading
//! Fourier coefficient of the additive lift.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{Cyclotomic, QSeries, Rational};
use crate::fqm::{ElementType, FiniteQuadraticModule, FqmElement};
use crate::lattice::{DiscriminantForm, LatticeVector};
use crate::weil::{self, GroupRingVector, WeilRepresentation};
use crate::{Error, Result};

/// Coefficients of `prod_{n >= 1} (1 - q^n)^m` up to `q^{terms-1}`, from the
/// log-derivative recurrence `n a_n = -m sum_{k=1}^{n} sigma(k) a_{n-k}`.
pub fn eta_product_coefficients(m: i64, terms: usize) -> Vec<BigInt> {
    let sigma: Vec<BigInt> = (0..terms as u64)
        .map(|k| if k == 0 { 0 } else { (1..=k).filter(|d| k % d == 0).sum::<u64>() })
        .map(BigInt::from)
        .collect();
    let mut a: Vec<BigInt> = Vec::with_capacity(terms);
    for n in 0..terms {
        if n == 0 {
            a.push(BigInt::from(1));
            continue;
        }
        let mut acc = BigInt::zero();
        for k in 1..=n {
            acc += &sigma[k] * &a[n - k];
        }
        let num = -acc * m;
        let (quot, rem) = num.div_rem(&BigInt::from(n));
        debug_assert!(rem.is_zero());
        a.push(quot);
    }
    a
}

/// `prod (1 - q^n)^m` by repeated multiplication, for `m >= 0`; an oracle for
/// [`eta_product_coefficients`].
pub fn eta_product_by_multiplication(m: i64, terms: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); terms];
    if terms == 0 {
        return p;
    }
    p[0] = BigInt::from(1);
    for n in 1..terms {
        for _ in 0..m {
            for k in (n..terms).rev() {
                let sub = p[k - n].clone();
                p[k] -= sub;
            }
        }
    }
    p
}

/// `eta(tau)^m = q^{m/24} prod (1 - q^n)^m`, truncated after `terms` integer steps.
#[derive(Clone, Debug, Serialize)]
pub struct EtaPower {
    pub exponent: i64,
    #[serde(skip)]
    pub product: Vec<BigInt>,
    pub series: QSeries,
}

impl EtaPower {
    /// Coefficient of `q^e`; zero off the lattice `m/24 + Z`, `None` past the truncation.
    pub fn coeff(&self, e: &Rational) -> Option<BigInt> {
        let k = e - &Rational::new(self.exponent, 24);
        if !k.is_integer() || k.is_negative() {
            return Some(BigInt::zero());
        }
        let k = k.to_i64()? as usize;
        self.product.get(k).cloned()
    }
}

/// The leading exponent `m/24` must have denominator dividing 4, i.e. `6 | m`.
pub fn eta_power(m: i64, terms: usize) -> Result<EtaPower> {
    let lead = Rational::new(m, 24);
    let product = eta_product_coefficients(m, terms);
    let series = QSeries::from_terms(
        product
            .iter()
            .enumerate()
            .map(|(k, c)| (&lead + &Rational::from(k as i64), Cyclotomic::from_rational(Rational::from_bigint(c.clone())))),
        &lead + &Rational::from(terms as i64),
    )?;
    Ok(EtaPower {
        exponent: m,
        product,
        series,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierReport {
    pub eta_exponent: i64,
    pub t_eigenvalue: Option<Cyclotomic>,
    pub s_eigenvalue: Option<Cyclotomic>,
    /// `eta(tau + 1)^m = t_multiplier eta(tau)^m`.
    pub t_multiplier: Cyclotomic,
    /// `eta(-1/tau)^m = s_multiplier tau^{m/2} eta(tau)^m`.
    pub s_multiplier: Cyclotomic,
    pub compatible: bool,
    pub vector_weight: Rational,
    pub lift_weight: Rational,
}

/// `eta^m theta` has type `rep` exactly when the eta multipliers equal the
/// eigenvalues of `theta` under `rho(T)` and `rho(S)`. The lift to a lattice of
/// signature `(2, n)` then has weight `m/2 + n/2 - 1`.
pub fn multiplier_compatibility(rep: &WeilRepresentation, theta: &GroupRingVector, m: i64, n: usize) -> MultiplierReport {
    let module = &rep.module;
    let t_eigenvalue = weil::eigenvalue(module, &rep.t, theta);
    let s_eigenvalue = weil::eigenvalue(module, &rep.s, theta);
    let t_multiplier = Cyclotomic::zeta(m);
    let s_multiplier = Cyclotomic::zeta(-3 * m);
    let compatible = t_eigenvalue.as_ref() == Some(&t_multiplier) && s_eigenvalue.as_ref() == Some(&s_multiplier);
    let vector_weight = Rational::new(m, 2);
    let lift_weight = &vector_weight + &Rational::new(n as i64 - 2, 2);
    MultiplierReport {
        eta_exponent: m,
        t_eigenvalue,
        s_eigenvalue,
        t_multiplier,
        s_multiplier,
        compatible,
        vector_weight,
        lift_weight,
    }
}

pub fn theta_support(theta: &GroupRingVector) -> BTreeSet<FqmElement> {
    theta.support().cloned().collect()
}

/// The plane spanned by the classes of `f1/2` and `e2/2`.
pub fn fixture_plane(disc: &DiscriminantForm) -> Result<[FqmElement; 3]> {
    let module = &disc.module;
    let x = disc.class_of_half(&[0, 1, 0, 0, 0, 0])?;
    let y = disc.class_of_half(&[0, 0, 1, 0, 0, 0])?;
    let mut plane = [x.clone(), y.clone(), module.add(&x, &y)];
    plane.sort();
    if !module.isotropic_planes().contains(&plane) {
        return Err(Error::Module("fixture plane is not totally isotropic".into()));
    }
    Ok(plane)
}

/// Input of the leading-coefficient computation for the Fourier expansion
/// of the lift at the cusp `z`.
#[derive(Clone, Debug)]
pub struct LiftCheckInput {
    pub theta: GroupRingVector,
    pub eta_exponent: i64,
    pub z: LatticeVector,
    pub z_prime: LatticeVector,
    pub lambda: LatticeVector,
}

impl LiftCheckInput {
    /// `z = e1`, `z' = f1/2`, `lambda = e2/2 + f2 + a1/2`.
    pub fn fixture(theta: GroupRingVector, eta_exponent: i64) -> Self {
        let half = |v: &[i64]| LatticeVector(v.iter().map(|&x| Rational::new(x, 2)).collect());
        LiftCheckInput {
            theta,
            eta_exponent,
            z: LatticeVector::from_ints(&[1, 0, 0, 0, 0, 0]),
            z_prime: half(&[0, 1, 0, 0, 0, 0]),
            lambda: half(&[0, 0, 1, 2, 1, 0]),
        }
    }
}

/// `sum_{j < N_z} c_{x_j}(x_j^2/2) e(<x_j, z'>)` with `x_j = lambda + j z / N_z`,
/// where `c_a(n)` is the coefficient of `q^n e_a` in `eta^m theta` and
/// `N_z` generates `<z, N>`.
pub fn lift_leading_coefficient(disc: &DiscriminantForm, input: &LiftCheckInput) -> Result<Cyclotomic> {
    let lattice = &disc.lattice;
    let z = &input.z;
    if !z.is_integral() || !lattice.norm(z).is_zero() {
        return Err(Error::InvalidInput("z must be an isotropic lattice vector".into()));
    }
    let z_int: Vec<BigInt> = z.0.iter().map(Rational::numer).collect();
    let content = z_int.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if content != BigInt::from(1) {
        return Err(Error::InvalidInput("z is not primitive".into()));
    }
    if !lattice.inner(z, &input.z_prime).is_one() {
        return Err(Error::InvalidInput("<z, z'> must be 1".into()));
    }
    let lambda = &input.lambda;
    if !lattice.inner(lambda, z).is_zero() || !lattice.inner(lambda, &input.z_prime).is_zero() {
        return Err(Error::InvalidInput("lambda must be orthogonal to z and z'".into()));
    }
    if !lattice.in_dual(lambda) {
        return Err(Error::InvalidInput("lambda is not in the dual lattice".into()));
    }
    let norm = lattice.norm(lambda);
    if !norm.is_positive() {
        return Err(Error::InvalidInput(format!("lambda^2 = {norm} is not positive")));
    }
    let level = (0..lattice.rank())
        .map(|i| {
            let mut e = vec![0i64; lattice.rank()];
            e[i] = 1;
            lattice.inner(z, &LatticeVector::from_ints(&e)).numer()
        })
        .fold(BigInt::zero(), |g, x| g.gcd(&x))
        .abs();
    let level = level
        .to_i64()
        .ok_or_else(|| Error::InvalidInput("level of z out of range".into()))?;
    let terms = (norm.to_f64() / 2.0).ceil() as usize + 2;
    let eta = eta_power(input.eta_exponent, terms)?;
    let mut total = Cyclotomic::zero();
    for j in 0..level {
        let x = lambda.add(&z.scale(&Rational::new(j, level)));
        let class = disc.class_of(&x)?;
        let c = input.theta.coeff(&class);
        if c.is_zero() {
            continue;
        }
        let n = &lattice.norm(&x) * &Rational::new(1, 2);
        let eta_c = eta.coeff(&n).unwrap_or_default();
        let phase = Cyclotomic::exp_2pi_i(&lattice.inner(&x, &input.z_prime))?;
        total += &(&(&c * &phase) * &Cyclotomic::from_rational(Rational::from_bigint(eta_c)));
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct Theta0Report {
    pub s_eigenvalue: Option<Cyclotomic>,
    pub t_eigenvalue: Option<Cyclotomic>,
    pub kappa_reflection_sign: Option<i64>,
    pub support_types: Vec<String>,
    pub kappa_antisymmetric: bool,
}

impl Theta0Report {
    pub fn passed(&self) -> bool {
        let i = Cyclotomic::i();
        self.s_eigenvalue.as_ref() == Some(&i)
            && self.t_eigenvalue.as_ref() == Some(&i)
            && self.kappa_reflection_sign == Some(-1)
            && self.kappa_antisymmetric
            && self.support_types.iter().all(|t| t == "3/2" || t == "1/2")
    }
}

/// Eigenvalues of the generator of `W_0`, the effect of the reflection in
/// `kappa`, and the shape of its support.
pub fn theta0_checks(rep: &WeilRepresentation, kappa: &FqmElement, theta0: &GroupRingVector) -> Result<Theta0Report> {
    let module: &FiniteQuadraticModule = &rep.module;
    let support_types: BTreeSet<String> = theta0
        .support()
        .map(|x| module.element_type(x, kappa).label())
        .collect();
    let kappa_antisymmetric = theta0
        .terms()
        .all(|(x, c)| theta0.coeff(&module.add(x, kappa)) == -c.clone());
    Ok(Theta0Report {
        s_eigenvalue: weil::eigenvalue(module, &rep.s, theta0),
        t_eigenvalue: weil::eigenvalue(module, &rep.t, theta0),
        kappa_reflection_sign: weil::reflection_sign(module, kappa, theta0)?,
        support_types: support_types.into_iter().collect(),
        kappa_antisymmetric,
    })
}

/// Types of the elements in a support set.
pub fn support_types(module: &FiniteQuadraticModule, kappa: &FqmElement, support: &BTreeSet<FqmElement>) -> BTreeSet<ElementType> {
    support.iter().map(|x| module.element_type(x, kappa)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_matches_naive_product() {
        for m in [0, 1, 6, 18, 24] {
            assert_eq!(eta_product_coefficients(m, 30), eta_product_by_multiplication(m, 30), "m = {m}");
        }
    }

    #[test]
    fn eta_power_needs_quarter_exponent() {
        assert!(eta_power(18, 5).is_ok());
        assert!(eta_power(1, 5).is_err());
    }
}
