//! Exact time-dependent 1D wave functions for a Gaussian packet in front of an
//! absorbing (Robin) screen at `x = L`.
//!
//! Units are dimensionless throughout: lengths in packet widths, momenta in
//! inverse widths, `m = ħ = 1`, so the free equation reads `2i ∂_t ψ = -∂_x² ψ`.
//!
//! The closed forms are valid for every real `x`; only `x <= L` is physical
//! and restricting to it is left to callers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::faddeeva::exp_erfc_with_shift;

/// `π^{-1/4}`
pub const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

fn i() -> Complex64 {
    Complex64::i()
}

/// Whether a boundary parameter is meant as a detector or as a limit probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `Im β > 0`: norm loss is detection.
    Physical,
    /// Anything finite, e.g. `Im β = 0` for unitarity checks.
    LimitStudy,
}

/// The complex constant `β` of the boundary condition `∂_n ψ = β ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbcParameter {
    beta: Complex64,
    regime: Regime,
}

impl AbcParameter {
    pub fn physical(beta: Complex64) -> Result<Self> {
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::invalid("beta", "must be finite"));
        }
        if beta.im <= 0.0 {
            return Err(Error::Unphysical(beta));
        }
        Ok(Self {
            beta,
            regime: Regime::Physical,
        })
    }

    /// Purely imaginary `β = iκ`, `κ > 0`.
    pub fn imaginary(kappa: f64) -> Result<Self> {
        Self::physical(Complex64::new(0.0, kappa))
    }

    pub fn limit_study(beta: Complex64) -> Result<Self> {
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::invalid("beta", "must be finite"));
        }
        Ok(Self {
            beta,
            regime: Regime::LimitStudy,
        })
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn is_physical(&self) -> bool {
        self.regime == Regime::Physical
    }

    /// `β` itself, provided `Im β > 0`.
    pub fn require_detecting(&self) -> Result<Complex64> {
        if self.beta.im > 0.0 {
            Ok(self.beta)
        } else {
            Err(Error::Unphysical(self.beta))
        }
    }
}

/// Initial 1D state: a unit-width Gaussian or the normalized sum of two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Packet1D {
    Gaussian { k0: f64 },
    Superposition { k0: f64, k1: f64 },
}

impl Packet1D {
    pub fn gaussian(k0: f64) -> Self {
        Packet1D::Gaussian { k0 }
    }

    pub fn superposition(k0: f64, k1: f64) -> Self {
        Packet1D::Superposition { k0, k1 }
    }

    /// `N = 1 + exp(-(k0 - k1)^2 / 4)`; 1 for a single Gaussian.
    pub fn norm_n(&self) -> f64 {
        match *self {
            Packet1D::Gaussian { .. } => 1.0,
            Packet1D::Superposition { k0, k1 } => 1.0 + (-(k0 - k1).powi(2) / 4.0).exp(),
        }
    }

    pub fn central_momenta(&self) -> Vec<f64> {
        match *self {
            Packet1D::Gaussian { k0 } => vec![k0],
            Packet1D::Superposition { k0, k1 } => vec![k0, k1],
        }
    }

    /// Twelve widths past the largest positive central momentum.
    pub fn momentum_cutoff(&self) -> f64 {
        self.central_momenta()
            .into_iter()
            .fold(0.0f64, f64::max)
            + 12.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.central_momenta().iter().all(|k| k.is_finite()) {
            Ok(())
        } else {
            Err(Error::invalid("packet", "central momenta must be finite"))
        }
    }

    fn weight(&self) -> f64 {
        match self {
            Packet1D::Gaussian { .. } => 1.0,
            Packet1D::Superposition { .. } => 1.0 / (2.0 * self.norm_n()).sqrt(),
        }
    }

    /// Position-space initial condition on the whole line.
    pub fn initial(&self, x: f64) -> Complex64 {
        let w = self.weight();
        self.central_momenta()
            .into_iter()
            .map(|k| Complex64::from_polar(gaussian_g(x), k * x))
            .sum::<Complex64>()
            * w
    }

    /// Time-evolved wave function with the screen at `l`.
    pub fn evolve(&self, x: f64, t: f64, beta: Complex64, l: f64) -> Complex64 {
        match *self {
            Packet1D::Gaussian { k0 } => psi_tg(x, t, k0, beta, l),
            Packet1D::Superposition { k0, k1 } => psi_t_superposition(x, t, k0, k1, beta, l),
        }
    }
}

/// `G(x) = π^{-1/4} e^{-x²/2}`
pub fn gaussian_g(x: f64) -> f64 {
    PI_POW_NEG_QUARTER * (-0.5 * x * x).exp()
}

/// Reflection amplitude `ρ_β(k) = (k + iβ) / (k - iβ)`.
pub fn rho_beta(k: f64, beta: Complex64) -> Result<Complex64> {
    let den = k - i() * beta;
    if den.norm_sqr() == 0.0 {
        return Err(Error::Singular { k, beta });
    }
    Ok((k + i() * beta) / den)
}

/// `|ρ_β(k)|² = 1 - 4k Im β / ((Re β)² + (k + Im β)²)`.
///
/// Equals 1 at the removable point `k = β = 0`.
pub fn rho_beta_abs2(k: f64, beta: Complex64) -> f64 {
    let den = beta.re * beta.re + (k + beta.im) * (k + beta.im);
    if den == 0.0 {
        return 1.0;
    }
    1.0 - 4.0 * k * beta.im / den
}

/// Free Gaussian `φ_t^G(x; k0) = e^{-k0²/2} (1+it)^{-1/2} G((x - i k0) / √(1+it))`,
/// principal square root. The exponents are merged so large `k0` neither
/// underflows nor overflows.
pub fn phi_tg(x: f64, t: f64, k0: f64) -> Complex64 {
    let s = Complex64::new(1.0, t);
    let shifted = Complex64::new(x, -k0);
    let exponent = -0.5 * k0 * k0 - shifted * shifted / (2.0 * s);
    PI_POW_NEG_QUARTER * exponent.exp() / s.sqrt()
}

/// The three pieces of [`psi_tg`]: incident wave, mirror image, boundary term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiTerms {
    pub incident: Complex64,
    pub mirror: Complex64,
    pub boundary: Complex64,
}

impl PsiTerms {
    pub fn total(&self) -> Complex64 {
        self.incident + self.mirror + self.boundary
    }
}

/// Term-by-term evaluation of [`psi_tg`].
pub fn psi_tg_terms(x: f64, t: f64, k0: f64, beta: Complex64, l: f64) -> PsiTerms {
    let incident = phi_tg(x, t, k0);
    let u = 2.0 * l - x;
    let mirror = phi_tg(u, t, k0);
    if beta == Complex64::new(0.0, 0.0) {
        return PsiTerms {
            incident,
            mirror,
            boundary: Complex64::new(0.0, 0.0),
        };
    }
    let s = Complex64::new(1.0, t);
    let sqrt_s = s.sqrt();
    let shifted_u = Complex64::new(u, -k0);
    let z = (shifted_u - beta * s) * FRAC_1_SQRT_2 / sqrt_s;
    let k0_minus = k0 - i() * beta;
    let a = -0.5 * k0_minus * k0_minus + 0.5 * i() * t * beta * beta - beta * u;
    // a - z² collapses to the free-packet exponent, independent of β.
    let a_minus_z2 = -0.5 * k0 * k0 - shifted_u * shifted_u / (2.0 * s);
    let prefactor = (2.0 * PI.sqrt()).sqrt();
    let boundary = prefactor * beta * exp_erfc_with_shift(a, a_minus_z2, z);
    PsiTerms {
        incident,
        mirror,
        boundary,
    }
}

/// Exact solution `ψ_t^G(x; k0, β, L)` for the initial Gaussian `e^{ik0x} G(x)`
/// and the screen condition `∂_x ψ = β ψ` at `x = L`.
///
/// Finite whenever the true value is representable; for physical inputs
/// (`x <= L`, `t >= 0`) that is always the case.
pub fn psi_tg(x: f64, t: f64, k0: f64, beta: Complex64, l: f64) -> Complex64 {
    psi_tg_terms(x, t, k0, beta, l).total()
}

/// Evolution of the normalized two-Gaussian superposition.
pub fn psi_t_superposition(x: f64, t: f64, k0: f64, k1: f64, beta: Complex64, l: f64) -> Complex64 {
    let n = Packet1D::superposition(k0, k1).norm_n();
    (psi_tg(x, t, k0, beta, l) + psi_tg(x, t, k1, beta, l)) / (2.0 * n).sqrt()
}

/// Momentum-space initial wave function `ψ̃₀(k)`.
pub fn momentum_wavefunction(p: &Packet1D, k: f64) -> Complex64 {
    let w = p.weight();
    let v: f64 = p.central_momenta().into_iter().map(|c| gaussian_g(k - c)).sum();
    Complex64::new(w * v, 0.0)
}

/// Upper bound on `|ψ_0^G(x) - e^{ik0x} G(x)|` for `x <= L`, the price of the
/// Gaussian not being supported on `(-∞, L]`. Needs `Re β < L`.
pub fn initial_condition_bound(k0: f64, beta: Complex64, l: f64) -> Result<f64> {
    let gap = l - beta.re;
    if !(gap > 0.0) {
        return Err(Error::Domain {
            what: "initial_condition_bound",
            detail: format!("requires Re beta < L (Re beta = {}, L = {l})", beta.re),
        });
    }
    let ratio = (k0 + beta.im) / gap;
    Ok(gaussian_g(l) * (1.0 + 2.0 * beta.norm() / gap * (1.0 + ratio * ratio).sqrt()))
}
