//! Detection probabilities of 1D and 2D Gaussian wave packets at an absorbing
//! screen, compared with the scattering-theory flux.

// `!(x > 0.0)` guards reject NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod detection;
pub mod error;
pub mod numerics;
pub mod pde_oracle;
pub mod scattering_2d;
pub mod validate;

pub use error::{Error, Result};
