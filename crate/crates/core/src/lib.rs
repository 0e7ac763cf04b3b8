//! Numerics built on Cauchy sequences in graded spaces.
//!
//! - [`ilb`]: truncated graded sequence spaces, plots and smoothness probes
//! - [`cauchy`]: Cauchy certification, limit estimates, the limit-map counterexample
//! - [`ift`]: estimate-free implicit function solver by fixed-point iteration
//! - [`frobenius`]: `D₁J = f(x, J)` by Picard iteration on path space
//! - [`fem`]: P1 finite elements for the Dirichlet problem with nested refinement
//! - [`scheme`]: numerical schemes as maps into Cauchy sequences
//! - [`experiment`]: strict config parsing, experiment runner and CSV output

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cauchy;
pub mod error;
pub mod experiment;
pub mod fem;
pub mod frobenius;
pub mod ift;
pub mod ilb;
pub mod scheme;

pub use error::{Error, Result};
pub use ilb::{NormScale, Plot, ScaledVector};
