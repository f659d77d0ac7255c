// `!(x > 1.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cauchyinv;
pub mod error;
pub mod knots;
pub mod lab;
pub mod logc;
pub mod matrix;
pub mod spectral;

pub use error::{Error, Result};
