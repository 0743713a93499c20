//! Published reference data that the computations are checked against.
//! Nothing here is used as input to a computation; every table is compared
//! with an independently computed value.

use crate::arith::{Cyclotomic, Rational};
use crate::fqm::ElementType;

/// Type order used by every 6-row table: `00, 0, 1, 10, 3/2, 1/2`.
pub fn n_type_order() -> Vec<ElementType> {
    vec![
        ElementType::Zero,
        ElementType::Isotropic,
        ElementType::Unit,
        ElementType::Radical,
        ElementType::Other(Rational::new(3, 2)),
        ElementType::Other(Rational::new(1, 2)),
    ]
}

/// Type order for `A_M / +-1`: `00, 0, 1, 10, 3/4, 7/4`.
pub fn m_type_order() -> Vec<ElementType> {
    vec![
        ElementType::Zero,
        ElementType::Isotropic,
        ElementType::Unit,
        ElementType::Radical,
        ElementType::Other(Rational::new(3, 4)),
        ElementType::Other(Rational::new(7, 4)),
    ]
}

pub const N_TYPE_COUNTS: [u64; 6] = [1, 15, 15, 1, 20, 12];
pub const M_ORBIT_COUNTS: [u64; 6] = [1, 15, 15, 1, 6, 10];

/// `PAIRING_COUNTS[u][v] = (m0, m1)`: for `u` of type `u`, the number of `v`
/// of type `v` with `b(u, v) = 0` and `= 1/2`.
pub const PAIRING_COUNTS: [[(u64, u64); 6]; 6] = [
    [(1, 0), (15, 0), (15, 0), (1, 0), (20, 0), (12, 0)],
    [(1, 0), (7, 8), (7, 8), (1, 0), (12, 8), (4, 8)],
    [(1, 0), (7, 8), (7, 8), (1, 0), (8, 12), (8, 4)],
    [(1, 0), (15, 0), (15, 0), (1, 0), (0, 20), (0, 12)],
    [(1, 0), (9, 6), (6, 9), (0, 1), (10, 10), (6, 6)],
    [(1, 0), (5, 10), (10, 5), (0, 1), (10, 10), (6, 6)],
];

/// Conjugacy class names of `SL(2, Z/4)` in table order.
pub const CLASS_NAMES: [&str; 10] = ["E", "-E", "S", "-S", "T", "-T", "T^2", "-T^2", "ST", "(ST)^2"];

/// Character values with `i` encoded as `(re, im)` integer pairs.
const CHARACTERS: [[(i64, i64); 10]; 10] = [
    [(1, 0), (1, 0), (1, 0), (1, 0), (1, 0), (1, 0), (1, 0), (1, 0), (1, 0), (1, 0)],
    [(1, 0), (1, 0), (-1, 0), (-1, 0), (-1, 0), (-1, 0), (1, 0), (1, 0), (1, 0), (1, 0)],
    [(1, 0), (-1, 0), (0, 1), (0, -1), (0, 1), (0, -1), (-1, 0), (1, 0), (-1, 0), (1, 0)],
    [(1, 0), (-1, 0), (0, -1), (0, 1), (0, -1), (0, 1), (-1, 0), (1, 0), (-1, 0), (1, 0)],
    [(2, 0), (2, 0), (0, 0), (0, 0), (0, 0), (0, 0), (2, 0), (2, 0), (-1, 0), (-1, 0)],
    [(2, 0), (-2, 0), (0, 0), (0, 0), (0, 0), (0, 0), (-2, 0), (2, 0), (1, 0), (-1, 0)],
    [(3, 0), (3, 0), (1, 0), (1, 0), (-1, 0), (-1, 0), (-1, 0), (-1, 0), (0, 0), (0, 0)],
    [(3, 0), (3, 0), (-1, 0), (-1, 0), (1, 0), (1, 0), (-1, 0), (-1, 0), (0, 0), (0, 0)],
    [(3, 0), (-3, 0), (0, -1), (0, 1), (0, 1), (0, -1), (1, 0), (-1, 0), (0, 0), (0, 0)],
    [(3, 0), (-3, 0), (0, 1), (0, -1), (0, -1), (0, 1), (1, 0), (-1, 0), (0, 0), (0, 0)],
];

/// Rows `chi_1 .. chi_10`, columns in [`CLASS_NAMES`] order.
pub fn character_values() -> Vec<Vec<Cyclotomic>> {
    CHARACTERS
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(re, im)| Cyclotomic::gaussian(Rational::from(re), Rational::from(im)))
                .collect()
        })
        .collect()
}

pub const CLASS_TRACES: [(i64, i64); 10] =
    [(64, 0), (-64, 0), (0, 0), (0, 0), (0, -8), (0, 8), (0, 0), (0, 0), (-1, 0), (1, 0)];

/// Multiplicities of `chi_1 .. chi_10` in the Weil character.
pub const WEIL_MULTIPLICITIES: [i64; 10] = [0, 0, 1, 5, 0, 5, 0, 0, 6, 10];

/// Diagonal of the collapsed dual `T`, as Gaussian integers.
pub const COLLAPSED_T: [(i64, i64); 6] = [(1, 0), (1, 0), (-1, 0), (-1, 0), (0, 1), (0, -1)];

/// The collapsed dual `S` is `(-i/8)` times this matrix.
pub const COLLAPSED_S: [[i64; 6]; 6] = [
    [1, 1, 1, 1, 1, 1],
    [15, -1, -1, 15, 3, -5],
    [15, -1, -1, 15, -3, 5],
    [1, 1, 1, 1, -1, -1],
    [20, 4, -4, -20, 0, 0],
    [12, -4, 4, -12, 0, 0],
];

/// The Eisenstein labels `(a1, a2)` for `E_1 .. E_6`.
pub const EISENSTEIN_LABELS: [(i64, i64); 6] = [(0, 1), (1, 0), (1, 1), (1, 2), (1, 3), (2, 1)];

/// Reference leading terms of `E_1 .. E_6` in units of `i (2 pi)^3 / 2^7`:
/// `(numerator of q-exponent over 4, re, im)` with rational parts given as
/// `(num, den)`.
pub const EISENSTEIN_LEADING: [&[(i64, (i64, i64), (i64, i64))]; 6] = [
    &[(0, (0, 1), (-1, 2)), (4, (0, 1), (2, 1))],
    &[(1, (1, 1), (0, 1)), (2, (4, 1), (0, 1)), (3, (8, 1), (0, 1)), (4, (16, 1), (0, 1))],
    &[(1, (0, 1), (1, 1)), (2, (-4, 1), (0, 1)), (3, (0, 1), (-8, 1)), (4, (16, 1), (0, 1))],
    &[(1, (-1, 1), (0, 1)), (2, (4, 1), (0, 1)), (3, (-8, 1), (0, 1)), (4, (16, 1), (0, 1))],
    &[(1, (0, 1), (-1, 1)), (2, (-4, 1), (0, 1)), (3, (0, 1), (8, 1)), (4, (16, 1), (0, 1))],
    &[(2, (0, 1), (2, 1)), (4, (0, 1), (0, 1))],
];

/// Reference leading terms of the normalized `f_00 .. f_1/2`: (exponent, coefficient).
pub const F_LEADING: [&[((i64, i64), (i64, i64))]; 6] = [
    &[((0, 1), (-1, 2)), ((1, 1), (10, 1))],
    &[((1, 1), (120, 1))],
    &[((1, 2), (30, 1))],
    &[((1, 2), (4, 1))],
    &[((1, 4), (10, 1))],
    &[((3, 4), (48, 1))],
];

/// Borcherds-product weights for the divisors attached to the types
/// `10, 3/2, 1, 1/2`.
pub const PRODUCT_WEIGHTS: [(&str, i64); 4] = [("10", 4), ("3/2", 10), ("1", 30), ("1/2", 48)];

/// Action of `T` on `E_1 .. E_6`: `E_j -> sign * E_target`.
pub const EISENSTEIN_T_RULE: [(usize, i64); 6] = [(0, 1), (2, 1), (3, 1), (4, 1), (1, 1), (5, -1)];

/// Action of `S` (up to `tau^3`) on `E_1 .. E_6`.
pub const EISENSTEIN_S_RULE: [(usize, i64); 6] = [(1, 1), (0, -1), (4, 1), (5, -1), (2, -1), (3, 1)];

/// Support of the reference `theta_V` as half-vectors in the basis
/// `e1, f1, e2, f2, a1, a2`.
pub const THETA_SUPPORT_FAMILIES: [[i64; 6]; 6] = [
    [0, 1, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 1],
    [0, 0, 1, 0, 1, 0],
    [0, 0, 1, 0, 0, 1],
    [0, 1, 1, 0, 1, 0],
    [0, 1, 1, 0, 0, 1],
];
