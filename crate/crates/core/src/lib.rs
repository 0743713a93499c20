//! Exact verification of the modular-form and geometric claims around the
//! six-lines K3 lattice `U(2)^2 + A1^2`, its Weil representation, the
//! Borcherds-product weights it supports and the Igusa quartic.
//!
//! Everything algebraic is exact: rationals, the cyclotomic field `Q(zeta_24)`
//! and dense matrices over both. Floating point is confined to the Eisenstein
//! cross-check and the rational-normal-curve fitter in [`geometry`].

pub mod arith;
pub mod context;
pub mod error;
pub mod fixtures;
pub mod fqm;
pub mod geometry;
pub mod lattice;
pub mod lifting;
pub mod obstruction;
pub mod report;
pub mod restriction;
pub mod weil;

pub use error::{Error, Result};
