//! Schur analysis over the Grassmann algebra.
//!
//! The crate is organised bottom-up: [`algebra`] provides supernumbers,
//! [`matrix`] supermatrices and their factorizations, [`series`] star-product
//! power series and Wiener–Grassmann Laurent series, [`realization`] state-space
//! realizations, [`toeplitz`] the one-step Toeplitz extension, and [`schur`]
//! the interpolation toolchain built on top of them. [`oracle`] holds
//! brute-force references for testing.

pub mod algebra;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod realization;
pub mod sample;
pub mod schur;
pub mod serial;
pub mod series;
pub mod toeplitz;

pub use algebra::{AlgebraContext, Ctx, MultiIndex, Supernumber, C64};
pub use error::{Error, Result};
pub use matrix::SuperMatrix;
