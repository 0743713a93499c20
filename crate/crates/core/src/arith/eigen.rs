//! Eigenvalue statistics of finite-order cyclotomic matrices.

use serde::Serialize;

use super::cyclotomic::Cyclotomic;
use super::matrix::{CMatrix, Matrix};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Multiplicity of the eigenvalue `exp(2 pi i phase)`, `phase` in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eigenphase {
    pub phase: Rational,
    pub multiplicity: u64,
}

/// Smallest `n <= 24` with `a^n = 1`.
pub fn multiplicative_order(a: &CMatrix) -> Result<u64> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let mut p = a.clone();
    for n in 1..=24u64 {
        if p.is_identity() {
            return Ok(n);
        }
        p = p.mul(a);
    }
    Err(Error::InvalidInput("matrix has no finite order dividing a number up to 24".into()))
}

/// Eigenvalue multiplicities of a finite-order matrix, read off from the
/// traces of its powers by a discrete Fourier transform.
pub fn eigenphase_multiplicities(a: &CMatrix) -> Result<Vec<Eigenphase>> {
    let n = multiplicative_order(a)?;
    if 24 % n != 0 {
        return Err(Error::ConductorTooLarge(n));
    }
    let mut traces = Vec::with_capacity(n as usize);
    let mut p = Matrix::identity(a.rows());
    for _ in 0..n {
        traces.push(p.trace());
        p = p.mul(a);
    }
    let mut out = Vec::new();
    for j in 0..n as i64 {
        let mut acc = Cyclotomic::zero();
        for (t, tr) in traces.iter().enumerate() {
            acc.add_product(&Cyclotomic::root_of_unity(n, -j * t as i64)?, tr);
        }
        let m = acc.scale(&Rational::new(1, n as i64));
        let m = m
            .as_rational()
            .and_then(Rational::to_i64)
            .filter(|&m| m >= 0)
            .ok_or_else(|| Error::Numerical(format!("eigenphase multiplicity {m} is not a natural number")))?;
        if m > 0 {
            out.push(Eigenphase {
                phase: Rational::new(j, n as i64),
                multiplicity: m as u64,
            });
        }
    }
    Ok(out)
}

/// Sum of the eigenphases counted with multiplicity.
pub fn alpha(a: &CMatrix) -> Result<Rational> {
    Ok(eigenphase_multiplicities(a)?
        .iter()
        .map(|e| &e.phase * &Rational::from(e.multiplicity as i64))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_phases() {
        let a = Matrix::diagonal(vec![
            Cyclotomic::one(),
            Cyclotomic::i(),
            Cyclotomic::i(),
            Cyclotomic::from_int(-1),
        ]);
        let e = eigenphase_multiplicities(&a).unwrap();
        assert_eq!(
            e,
            vec![
                Eigenphase { phase: Rational::ZERO, multiplicity: 1 },
                Eigenphase { phase: Rational::new(1, 4), multiplicity: 2 },
                Eigenphase { phase: Rational::new(1, 2), multiplicity: 1 },
            ]
        );
        assert_eq!(alpha(&a).unwrap(), Rational::ONE);
    }

    #[test]
    fn infinite_order_rejected() {
        let a = Matrix::diagonal(vec![Cyclotomic::from_int(2)]);
        assert!(eigenphase_multiplicities(&a).is_err());
    }
}
