//! Exact arithmetic: rationals, `Q(zeta_24)`, q-series and dense matrices.

pub mod cyclotomic;
pub mod eigen;
pub mod matrix;
pub mod qseries;
pub mod rational;

pub use cyclotomic::Cyclotomic;
pub use eigen::{alpha, eigenphase_multiplicities, Eigenphase};
pub use matrix::{CMatrix, Field, Matrix, QMatrix};
pub use qseries::QSeries;
pub use rational::{q, Rational};
