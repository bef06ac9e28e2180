//! Hypersonic flow past a two-dimensional wedge: oblique-shock solutions of the
//! compressible Euler equations, their `gamma -> 1` limit, and the measure
//! solution that carries the limiting mass on the wedge surface.

// `!(x > 0.0)` is used throughout so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod euler;
pub mod hypersonic_limit;
pub mod measure;
pub mod numeric;
pub mod plot;
pub mod quadrature;
pub mod shock_polar;
pub mod weak_form;

pub use error::{Error, Result};
