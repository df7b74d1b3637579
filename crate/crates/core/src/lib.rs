//! Narrow-stencil summation-by-parts operators with a free sixth-order
//! closure parameter, their Moore–Penrose inverse, SAT boundary treatment
//! and the solvers used to study the parameter.

// `!(x > 0.0)` style guards are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod export;
pub mod numkernel;
pub mod operators;
pub mod pseudoinverse;
pub mod reference;
pub mod sat;
pub mod solvers;

pub use error::{Error, Result};
