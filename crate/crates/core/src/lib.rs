//! Shape-invariant potentials in supersymmetric quantum mechanics: ladder
//! algebras, solvable families and Klein-Gordon bound-state spectra.

// `!(x > 0.0)` is used on purpose so NaN is rejected alongside bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod families;
pub mod numerics;
pub mod spectrum;
pub mod susy;

pub use error::{Error, Result};
