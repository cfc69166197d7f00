use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (partial result {partial:e}, achieved error {achieved:e})"
    )]
    NonConvergence {
        partial: f64,
        achieved: f64,
        subdivisions: usize,
    },

    #[error("result of e^a * erfc(z) exceeds the representable range")]
    Overflow,

    #[error("unphysical ABC parameter beta = {0}: detection requires Im beta > 0")]
    Unphysical(Complex64),

    #[error("reflection coefficient is singular at k = {k} for beta = {beta}")]
    Singular { k: f64, beta: Complex64 },

    #[error("{what} is outside its admissible domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("grid spacing h = {h:e} does not resolve the packet (need h <= {max_h:e})")]
    UnderResolved { h: f64, max_h: f64 },

    #[error("norm grew by {growth:e} at step {step}; the evolution is unstable")]
    Unstable { step: usize, growth: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
