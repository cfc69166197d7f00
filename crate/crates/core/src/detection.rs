//! 1D detection probabilities: scattering-theory flux, ABC absorption (in time
//! and in momentum space) and the contrasts between them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{momentum_wavefunction, rho_beta, rho_beta_abs2, AbcParameter, Packet1D};
use crate::error::{Error, Result};
use crate::numerics::marching::{integrate_pulses, Pulse};
use crate::numerics::quadrature::{integrate_semi_infinite, Integral, QuadratureSpec};

/// A probability estimate. `value` is `raw` pulled back into `[0, 1]` when the
/// excursion is within quadrature noise; larger excursions are left visible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probability {
    pub value: f64,
    pub raw: f64,
    pub error: f64,
}

impl Probability {
    fn from_integral(raw: f64, error: f64, spec: &QuadratureSpec) -> Self {
        let tol = 10.0 * error.max(spec.abs_tol);
        let value = if (-tol..0.0).contains(&raw) {
            0.0
        } else if raw > 1.0 && raw <= 1.0 + tol {
            1.0
        } else {
            raw
        };
        Self { value, raw, error }
    }
}

/// `P_ST`, `P_ABC` and their difference for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub p_st: f64,
    pub p_abc: f64,
    /// `p_st - p_abc`
    pub contrast: f64,
    pub quadrature_error: f64,
    pub raw_p_st: f64,
    pub raw_p_abc: f64,
}

/// Momentum cutoff: the packet's own cutoff (on both sides), never below `spec.k_max`.
fn k_cutoff(p: &Packet1D, spec: &QuadratureSpec) -> f64 {
    let widest = p
        .central_momenta()
        .into_iter()
        .fold(0.0f64, |m, k| m.max(k.abs()));
    spec.k_max.max(widest + 12.0)
}

/// Cuts around `|k_c|` for every central momentum; they serve integrands that
/// peak at `k_c` as well as their mirror images.
fn k_breakpoints(p: &Packet1D) -> Vec<f64> {
    let mut pts = Vec::new();
    for k in p.central_momenta() {
        for off in [-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0] {
            let b = k.abs() + off;
            if b > 0.0 {
                pts.push(b);
            }
        }
    }
    pts
}

/// `P_ST = ∫_0^∞ |ψ̃_0(k)|² dk`, computed from the full spectrum (cross terms
/// included for superpositions).
pub fn p_st_1d(p: &Packet1D, spec: &QuadratureSpec) -> Result<Probability> {
    p.validate()?;
    spec.validate()?;
    let i = integrate_semi_infinite(
        |k| momentum_wavefunction(p, k).norm_sqr(),
        k_cutoff(p, spec),
        &k_breakpoints(p),
        spec,
    )?;
    Ok(Probability::from_integral(i.value, i.error_bound(), spec))
}

/// The left-moving mass `∫_{-∞}^0 |ψ̃_0(k)|² dk = 1 - P_ST`, integrated with a
/// purely relative tolerance so that even `~1e-176` is resolved.
pub fn st_deficit_1d(p: &Packet1D, spec: &QuadratureSpec) -> Result<Integral> {
    p.validate()?;
    spec.validate()?;
    let rel_spec = QuadratureSpec {
        abs_tol: 0.0,
        rel_tol: spec.rel_tol.max(1e-12),
        ..*spec
    };
    let mut pts = k_breakpoints(p);
    pts.extend([0.01, 0.03, 0.1, 0.3, 1.0, 3.0]);
    integrate_semi_infinite(
        |k| momentum_wavefunction(p, -k).norm_sqr(),
        k_cutoff(p, spec),
        &pts,
        &rel_spec,
    )
}

fn arrival_pulses(p: &Packet1D, l: f64) -> Vec<Pulse> {
    p.central_momenta()
        .into_iter()
        .map(|k| {
            if k > 0.0 {
                let center = l / k;
                Pulse {
                    center,
                    width: (1.0 + center * center).sqrt() / k.max(0.5),
                }
            } else {
                Pulse {
                    center: 0.0,
                    width: 1.0,
                }
            }
        })
        .collect()
}

/// `P_ABC = Im β ∫_0^∞ |ψ_t(L)|² dt` from the closed-form solution.
pub fn p_abc_time_integral(
    p: &Packet1D,
    beta: &AbcParameter,
    l: f64,
    spec: &QuadratureSpec,
) -> Result<Probability> {
    let b = beta.require_detecting()?;
    p.validate()?;
    spec.validate()?;
    check_l(l)?;
    let g = |t: f64| b.im * p.evolve(l, t, b, l).norm_sqr();
    let i = integrate_pulses(g, &arrival_pulses(p, l), spec)?;
    Ok(Probability::from_integral(i.value, i.error_bound(), spec))
}

fn check_l(l: f64) -> Result<()> {
    if l.is_finite() && l > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("L", "screen distance must be finite and > 0"))
    }
}

/// `P_ABC = 1 - ∫_0^∞ |ψ̃_0(-k) + ρ_β(k) ψ̃_0(k) e^{2ikL}|² dk`, the momentum-space
/// form of the absorbed probability. Restricted to `Re β <= 0`.
pub fn p_abc_dollard(p: &Packet1D, beta: &AbcParameter, l: f64, spec: &QuadratureSpec) -> Result<Probability> {
    p_abc_dollard_with(p, beta, l, spec, rho_beta)
}

/// [`p_abc_dollard`] with the reflection amplitude supplied by the caller; the
/// validation suite uses it to check that a corrupted `ρ` is caught.
pub(crate) fn p_abc_dollard_with<R>(
    p: &Packet1D,
    beta: &AbcParameter,
    l: f64,
    spec: &QuadratureSpec,
    rho: R,
) -> Result<Probability>
where
    R: Fn(f64, Complex64) -> Result<Complex64>,
{
    let b = beta.require_detecting()?;
    if b.re > 0.0 {
        return Err(Error::Domain {
            what: "p_abc_dollard",
            detail: format!("needs Re beta <= 0, got {}; use p_abc_time_integral", b.re),
        });
    }
    p.validate()?;
    spec.validate()?;
    check_l(l)?;
    // ρ is regular on k >= 0 here; probe once so a singular input surfaces as an error.
    rho(0.0, b)?;
    let f = |k: f64| {
        let r = rho(k, b).unwrap_or(Complex64::new(f64::NAN, 0.0));
        let phase = Complex64::from_polar(1.0, 2.0 * k * l);
        (momentum_wavefunction(p, -k) + r * momentum_wavefunction(p, k) * phase).norm_sqr()
    };
    let i = integrate_semi_infinite(f, k_cutoff(p, spec), &k_breakpoints(p), spec)?;
    Ok(Probability::from_integral(1.0 - i.value, i.error_bound(), spec))
}

/// `𝒞_L = P_ST - P_ABC(L)`.
pub fn contrast_l(p: &Packet1D, beta: &AbcParameter, l: f64, spec: &QuadratureSpec) -> Result<ContrastReport> {
    let st = p_st_1d(p, spec)?;
    let abc = p_abc_time_integral(p, beta, l, spec)?;
    Ok(ContrastReport {
        p_st: st.value,
        p_abc: abc.value,
        contrast: st.value - abc.value,
        quadrature_error: st.error + abc.error,
        raw_p_st: st.raw,
        raw_p_abc: abc.raw,
    })
}

/// Far-field contrast `𝒞_∞ = ∫_0^∞ |ρ_β(k)|² |ψ̃_0(k)|² dk`.
///
/// Defined for any finite `β` with `k ≠ iβ` on the half line, so limit-study
/// parameters are accepted.
pub fn contrast_infinity(p: &Packet1D, beta: &AbcParameter, spec: &QuadratureSpec) -> Result<Probability> {
    let b = beta.beta();
    if b.re == 0.0 && b.im < 0.0 {
        return Err(Error::Singular { k: -b.im, beta: b });
    }
    p.validate()?;
    spec.validate()?;
    let mut pts = k_breakpoints(p);
    if b.im > 0.0 {
        pts.push(b.im);
    }
    let i = integrate_semi_infinite(
        |k| rho_beta_abs2(k, b) * momentum_wavefunction(p, k).norm_sqr(),
        k_cutoff(p, spec),
        &pts,
        spec,
    )?;
    Ok(Probability::from_integral(i.value, i.error_bound(), spec))
}

/// Laplace-method estimate `(|ρ_β(k0)|² + |ρ_β(k1)|²) / (2N)` of `𝒞_∞` for the
/// two-Gaussian superposition.
pub fn contrast_laplace_approx(k0: f64, k1: f64, beta: Complex64) -> f64 {
    let n = Packet1D::superposition(k0, k1).norm_n();
    (rho_beta_abs2(k0, beta) + rho_beta_abs2(k1, beta)) / (2.0 * n)
}

/// The closed-form "global minimum" `(1 - 4 k0 k1 / (k0 - k1)²) / (2N)` of the
/// Laplace estimate, reported as is. It goes negative for nearby momenta,
/// where the exact contrast still floors at 0.
pub fn contrast_laplace_minimum(k0: f64, k1: f64) -> f64 {
    let n = Packet1D::superposition(k0, k1).norm_n();
    (1.0 - 4.0 * k0 * k1 / (k0 - k1).powi(2)) / (2.0 * n)
}
