//! The cyclotomic field `Q(zeta_24)`, stored in the power basis
//! `1, z, ..., z^7` modulo `Phi_24(z) = z^8 - z^4 + 1`.

use std::fmt;
use std::hash::Hash;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::rational::Rational;
use crate::error::{Error, Result};

pub const CONDUCTOR: u64 = 24;
pub const DEGREE: usize = 8;

/// Units of `Z/24`, i.e. the exponents indexing the Galois group.
const GALOIS: [u64; 8] = [1, 5, 7, 11, 13, 17, 19, 23];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    c: [Rational; DEGREE],
}

/// Integer power-basis coordinates of `z^e` for `e` in `0..24`.
fn power_table() -> &'static [[i64; DEGREE]; 24] {
    static TABLE: OnceLock<[[i64; DEGREE]; 24]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[0i64; DEGREE]; 24];
        let mut cur = [0i64; DEGREE];
        cur[0] = 1;
        for row in table.iter_mut() {
            *row = cur;
            // multiply by z, then use z^8 = z^4 - 1
            let top = cur[DEGREE - 1];
            for k in (1..DEGREE).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = -top;
            cur[4] += top;
        }
        table
    })
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            c: Default::default(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::ONE)
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut out = Self::zero();
        out.c[0] = r;
        out
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    pub fn from_coeffs(c: [Rational; DEGREE]) -> Self {
        Cyclotomic { c }
    }

    pub fn coeffs(&self) -> &[Rational; DEGREE] {
        &self.c
    }

    /// `zeta_24^k` for any integer `k`.
    pub fn zeta(k: i64) -> Self {
        let e = k.rem_euclid(24) as usize;
        let mut out = Self::zero();
        for (slot, &v) in out.c.iter_mut().zip(power_table()[e].iter()) {
            *slot = Rational::from(v);
        }
        out
    }

    /// `exp(2 pi i j / n)`, provided `n` divides 24.
    pub fn root_of_unity(n: u64, j: i64) -> Result<Self> {
        if n == 0 || CONDUCTOR % n != 0 {
            return Err(Error::ConductorTooLarge(n));
        }
        Ok(Self::zeta(j * (CONDUCTOR / n) as i64))
    }

    /// `exp(2 pi i r)` for a rational `r` whose denominator divides 24.
    pub fn exp_2pi_i(r: &Rational) -> Result<Self> {
        let scaled = r * &Rational::from(CONDUCTOR as i64);
        match scaled.to_i64() {
            Some(k) => Ok(Self::zeta(k)),
            None => Err(Error::ConductorTooLarge(r.denom().to_u64().unwrap_or(0))),
        }
    }

    pub fn i() -> Self {
        Self::zeta(6)
    }

    /// `a + b i`.
    pub fn gaussian(a: Rational, b: Rational) -> Self {
        let mut out = Self::zero();
        out.c[0] = a;
        out.c[6] = b;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Rational::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1..].iter().all(Rational::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Real and imaginary parts when the value lies in `Q(i)`.
    pub fn as_gaussian(&self) -> Option<(&Rational, &Rational)> {
        let others = [1, 2, 3, 4, 5, 7];
        if others.iter().all(|&k| self.c[k].is_zero()) {
            Some((&self.c[0], &self.c[6]))
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            c: std::array::from_fn(|k| &self.c[k] * r),
        }
    }

    /// The automorphism `z -> z^k` for `k` coprime to 24.
    pub fn galois(&self, k: u64) -> Self {
        assert!(num_integer::gcd(k, CONDUCTOR) == 1, "{k} is not a unit mod 24");
        let table = power_table();
        let mut out: [Rational; DEGREE] = Default::default();
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let row = &table[(j as u64 * k % CONDUCTOR) as usize];
            for (slot, &v) in out.iter_mut().zip(row.iter()) {
                if v != 0 {
                    *slot += &(cj * &Rational::from(v));
                }
            }
        }
        Cyclotomic { c: out }
    }

    pub fn conj(&self) -> Self {
        self.galois(23)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> Rational {
        let mut acc = Self::one();
        for &k in &GALOIS {
            acc = &acc * &self.galois(k);
        }
        acc.as_rational().cloned().expect("norm is rational")
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut partial = Self::one();
        for &k in &GALOIS[1..] {
            partial = &partial * &self.galois(k);
        }
        let n = (&partial * self).as_rational().cloned().expect("norm is rational");
        Some(partial.scale(&n.recip()?))
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut result = Self::one();
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &b;
            }
            b = &b * &b;
            n >>= 1;
        }
        result
    }

    /// Value under the embedding `z -> exp(2 pi i / 24)`.
    pub fn to_complex(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU / CONDUCTOR as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for cj in &self.c {
            acc += p * cj.to_f64();
            p *= z;
        }
        acc
    }

    /// `self += a * b` without cloning the operands.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        let prod = a * b;
        for (slot, v) in self.c.iter_mut().zip(prod.c.iter()) {
            if !v.is_zero() {
                *slot += v;
            }
        }
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for Cyclotomic {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic {
            c: std::array::from_fn(|k| &self.c[k] + &rhs.c[k]),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic {
            c: std::array::from_fn(|k| &self.c[k] - &rhs.c[k]),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let mut acc: [Rational; 2 * DEGREE - 1] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    acc[i + j] += &(a * b);
                }
            }
        }
        for k in (DEGREE..2 * DEGREE - 1).rev() {
            if acc[k].is_zero() {
                continue;
            }
            let top = std::mem::take(&mut acc[k]);
            acc[k - 4] += &top;
            acc[k - 8] -= &top;
        }
        Cyclotomic {
            c: std::array::from_fn(|k| std::mem::take(&mut acc[k])),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            c: std::array::from_fn(|k| -&self.c[k]),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Cyclotomic> for &'a Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<'a> AddAssign<&'a Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        for (slot, v) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !v.is_zero() {
                *slot += v;
            }
        }
    }
}

impl AddAssign for Cyclotomic {
    fn add_assign(&mut self, rhs: Cyclotomic) {
        *self += &rhs;
    }
}

impl<'a> SubAssign<&'a Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        for (slot, v) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !v.is_zero() {
                *slot -= v;
            }
        }
    }
}

impl Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

fn signed_term(out: &mut String, coeff: &Rational, unit: &str) {
    let neg = coeff.is_negative();
    let mag = coeff.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if unit.is_empty() {
        out.push_str(&mag.to_string());
    } else if mag.is_one() {
        out.push_str(unit);
    } else {
        out.push_str(&format!("{mag}{unit}"));
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        if let Some((re, im)) = self.as_gaussian() {
            if !re.is_zero() {
                signed_term(&mut out, re, "");
            }
            if !im.is_zero() {
                signed_term(&mut out, im, "i");
            }
        } else {
            for (k, ck) in self.c.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                let unit = match k {
                    0 => String::new(),
                    1 => "z".to_string(),
                    _ => format!("z^{k}"),
                };
                signed_term(&mut out, ck, &unit);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;

    #[test]
    fn basic_identities() {
        assert_eq!(Cyclotomic::zeta(24), Cyclotomic::one());
        assert_eq!(Cyclotomic::zeta(12), Cyclotomic::from_int(-1));
        assert_eq!(&Cyclotomic::i() * &Cyclotomic::i(), Cyclotomic::from_int(-1));
        assert_eq!(&Cyclotomic::zeta(5) * &Cyclotomic::zeta(7), Cyclotomic::zeta(12));
    }

    #[test]
    fn inverse_and_conj() {
        let x = Cyclotomic::from_coeffs(std::array::from_fn(|k| q(k as i64 - 3, 2)));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let n = &x * &x.conj();
        assert_eq!(n.conj(), n);
    }

    #[test]
    fn display_gaussian() {
        let x = Cyclotomic::gaussian(q(-1, 2), q(3, 1));
        assert_eq!(x.to_string(), "-1/2 + 3i");
        assert_eq!(Cyclotomic::i().scale(&q(-1, 8)).to_string(), "-1/8i");
    }

    #[test]
    fn rejects_large_conductor() {
        assert!(Cyclotomic::root_of_unity(5, 1).is_err());
        assert_eq!(Cyclotomic::root_of_unity(4, 1).unwrap(), Cyclotomic::i());
    }
}
