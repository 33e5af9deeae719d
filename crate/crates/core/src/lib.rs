//! Numerical laboratory for the hyperbolic vanishing mean curvature flow
//! near the catenoid `Q(r) = log(r + sqrt(r^2 - 1))`.

// `!(x > 0.0)` is deliberate: NaN must fail the test. Stencil loops read
// best with explicit indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod jet;
pub mod solver;
pub mod stencil;
pub mod symbol;

pub use error::{Error, Result};
