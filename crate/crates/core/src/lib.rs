//! Exact symbolic exterior calculus for skew-symmetric differential forms.
//!
//! The engine works over multivariate rational functions with arbitrary
//! precision rational coefficients, so closure, exactness, duality and the
//! degenerate-transformation analyses are decided exactly rather than
//! numerically. The [`dsl`] module supplies a small text format for
//! declaring variable lists, forms, maps, metrics and torsion coefficients;
//! the `exform` binary in the companion crate drives everything from the
//! command line.

pub mod algebra;
pub mod closure;
pub mod dsl;
pub mod error;
pub mod evolutionary;
pub mod physics;
pub mod forms;
pub mod metric;

pub use error::{Error, Result};
