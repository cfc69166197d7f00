//! Special functions and quadrature shared by the rest of the crate.

pub mod faddeeva;
pub mod marching;
pub mod quadrature;

pub use faddeeva::{erfc_complex, erfc_real, exp_erfc_scaled, faddeeva_upper};
pub use marching::{integrate_pulses, Pulse};
pub use quadrature::{integrate_interval, integrate_semi_infinite, mapped_tail, Integral, QuadratureSpec};

/// Complex scalar used for `beta`, amplitudes and erfc arguments.
pub type ComplexValue = num_complex::Complex64;
