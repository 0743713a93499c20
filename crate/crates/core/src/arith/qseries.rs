//! Truncated q-expansions with exponents in `(1/4)Z` and cyclotomic
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::cyclotomic::Cyclotomic;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `sum c_e q^e` known exactly for all exponents strictly below
/// `truncation`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<Rational, Cyclotomic>,
    truncation: Rational,
}

fn check_exponent(e: &Rational) -> Result<()> {
    if (e * &Rational::from(4)).is_integer() {
        Ok(())
    } else {
        Err(Error::BadExponent(e.to_string()))
    }
}

impl QSeries {
    pub fn zero(truncation: Rational) -> Result<Self> {
        check_exponent(&truncation)?;
        Ok(QSeries {
            terms: BTreeMap::new(),
            truncation,
        })
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (Rational, Cyclotomic)>,
        truncation: Rational,
    ) -> Result<Self> {
        let mut s = Self::zero(truncation)?;
        for (e, c) in terms {
            s.add_term(e, c)?;
        }
        Ok(s)
    }

    /// Adds `c q^e`; terms at or beyond the truncation are dropped.
    pub fn add_term(&mut self, e: Rational, c: Cyclotomic) -> Result<()> {
        check_exponent(&e)?;
        if e >= self.truncation || c.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
        Ok(())
    }

    pub fn truncation(&self) -> &Rational {
        &self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^e`, or `None` when `e` lies beyond the truncation.
    pub fn coeff(&self, e: &Rational) -> Option<Cyclotomic> {
        if *e >= self.truncation {
            return None;
        }
        Some(self.terms.get(e).cloned().unwrap_or_default())
    }

    /// Smallest exponent with a nonzero coefficient, or the truncation for
    /// an apparently zero series.
    pub fn valuation(&self) -> Rational {
        self.terms
            .keys()
            .next()
            .cloned()
            .unwrap_or_else(|| self.truncation.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let truncation = self.truncation.clone().min(other.truncation.clone());
        let mut out = QSeries {
            terms: BTreeMap::new(),
            truncation,
        };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), c.clone()).expect("exponents already checked");
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Cyclotomic::from_int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Cyclotomic) -> Self {
        let mut out = QSeries {
            terms: BTreeMap::new(),
            truncation: self.truncation.clone(),
        };
        if !s.is_zero() {
            for (e, c) in &self.terms {
                out.terms.insert(e.clone(), c * s);
            }
        }
        out
    }

    /// Multiply by `q^shift`.
    pub fn shift(&self, shift: &Rational) -> Result<Self> {
        check_exponent(shift)?;
        Ok(QSeries {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
            truncation: &self.truncation + shift,
        })
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let truncation = (&self.truncation + &other.valuation())
            .min(&other.truncation + &self.valuation());
        let mut out = QSeries {
            terms: BTreeMap::new(),
            truncation,
        };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if e >= out.truncation {
                    break;
                }
                out.add_term(e, c1 * c2).expect("exponents already checked");
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::from_terms([(Rational::ZERO, Cyclotomic::one())], self.truncation.clone())?;
        for _ in 0..n {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// Keep only exponents strictly below `t` (which must not exceed the
    /// current truncation).
    pub fn truncate(&self, t: &Rational) -> Result<Self> {
        check_exponent(t)?;
        let t = t.clone().min(self.truncation.clone());
        Ok(QSeries {
            terms: self.terms.iter().filter(|(e, _)| **e < t).map(|(e, c)| (e.clone(), c.clone())).collect(),
            truncation: t,
        })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let coeff = c.to_string();
            let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
            parts.push(if e.is_zero() {
                coeff
            } else if e.is_one() {
                format!("{coeff}q")
            } else {
                format!("{coeff}q^{e}")
            });
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        write!(f, "{} + O(q^{})", parts.join(" + "), self.truncation)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize)]
struct SeriesJson {
    truncation: Rational,
    terms: Vec<(Rational, Cyclotomic)>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            truncation: self.truncation.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;

    fn poly(coeffs: &[i64], trunc: i64) -> QSeries {
        QSeries::from_terms(
            coeffs.iter().enumerate().map(|(k, &c)| (q(k as i64, 1), Cyclotomic::from_int(c))),
            q(trunc, 1),
        )
        .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = poly(&[1, -1], 10);
        let b = poly(&[1, 1], 10);
        assert_eq!(a.mul(&b), poly(&[1, 0, -1], 10));
    }

    #[test]
    fn truncation_propagates() {
        let a = poly(&[0, 1], 5).shift(&q(1, 4)).unwrap();
        let b = poly(&[1, 2], 3);
        let p = a.mul(&b);
        // a starts at q^{5/4}; b known below q^3
        assert_eq!(*p.truncation(), q(17, 4));
    }

    #[test]
    fn rejects_eighth_powers() {
        assert!(QSeries::from_terms([(q(1, 8), Cyclotomic::one())], q(1, 1)).is_err());
    }
}
