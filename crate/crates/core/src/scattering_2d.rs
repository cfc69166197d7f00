//! Angular detection densities of a 2D Gaussian packet: scattering theory,
//! the exact far-field ABC density for a flat inclined screen, and finite-L
//! line integrals for the inclined and L-shaped screens.
//!
//! The angle `θ` is measured from the `+x` axis as seen from the packet's
//! initial center (the origin).

use std::cell::RefCell;
use std::f64::consts::{FRAC_1_PI, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{phi_tg, psi_tg};
use crate::error::{Error, Result};
use crate::numerics::marching::{integrate_pulses, Pulse};
use crate::numerics::quadrature::{integrate_interval, integrate_semi_infinite, QuadratureSpec};

/// Angular distance to the screen plane below which samples count as grazing.
pub const GRAZING_MARGIN: f64 = 1e-3;

/// Default number of samples on an angular grid.
pub const DEFAULT_ANGULAR_SAMPLES: usize = 721;

/// `ψ_0(r) = G(x) G(y) e^{i k0·r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Packet2D {
    pub k0x: f64,
    pub k0y: f64,
}

impl Packet2D {
    pub fn new(k0x: f64, k0y: f64) -> Result<Self> {
        let p = Self { k0x, k0y };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k0x.is_finite() && self.k0y.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid("k0", "momentum components must be finite"))
        }
    }

    pub fn k0(&self) -> f64 {
        self.k0x.hypot(self.k0y)
    }

    pub fn theta0(&self) -> f64 {
        self.k0y.atan2(self.k0x)
    }
}

/// Screen shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScreenGeometry {
    /// The line `n(α)·r = L` with `n(α) = (sin α, -cos α)`.
    Inclined { alpha: f64, l: f64 },
    /// The set `max(x, y) = L`.
    LShaped { l: f64 },
}

impl ScreenGeometry {
    pub fn l(&self) -> f64 {
        match *self {
            ScreenGeometry::Inclined { l, .. } | ScreenGeometry::LShaped { l } => l,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.l();
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::invalid("L", "screen distance must be finite and > 0"));
        }
        if let ScreenGeometry::Inclined { alpha, .. } = *self {
            if !alpha.is_finite() {
                return Err(Error::invalid("alpha", "must be finite"));
            }
        }
        Ok(())
    }

    /// Open interval of directions that hit the screen.
    pub fn theta_interval(&self) -> (f64, f64) {
        match *self {
            ScreenGeometry::Inclined { alpha, .. } => (alpha - PI, alpha),
            ScreenGeometry::LShaped { .. } => (-FRAC_PI_2, PI),
        }
    }

    /// Whether `θ` hits the screen at least [`GRAZING_MARGIN`] away from grazing.
    pub fn admits(&self, theta: f64) -> bool {
        if !theta.is_finite() {
            return false;
        }
        match *self {
            ScreenGeometry::Inclined { alpha, .. } => {
                let d = (alpha - theta).rem_euclid(2.0 * PI);
                (GRAZING_MARGIN..=PI - GRAZING_MARGIN).contains(&d)
            }
            ScreenGeometry::LShaped { .. } => {
                (-FRAC_PI_2 + GRAZING_MARGIN..=PI - GRAZING_MARGIN).contains(&theta)
            }
        }
    }

    /// Point `R_θ` where the ray at angle `θ` meets the screen.
    pub fn hit_point(&self, theta: f64) -> [f64; 2] {
        let (s, c) = theta.sin_cos();
        let r = match *self {
            ScreenGeometry::Inclined { alpha, l } => l / (alpha - theta).sin(),
            ScreenGeometry::LShaped { l } => l / c.max(s),
        };
        [r * c, r * s]
    }

    /// `dℓ/dθ` along the screen.
    ///
    /// For the L-shaped screen this is `|R_θ|² / L` (on the vertical edge
    /// `y = L tan θ`, so `dy/dθ = L sec² θ`).
    pub fn line_element(&self, theta: f64) -> f64 {
        match *self {
            ScreenGeometry::Inclined { alpha, l } => l / (alpha - theta).sin().powi(2),
            ScreenGeometry::LShaped { l } => {
                let [x, y] = self.hit_point(theta);
                (x * x + y * y) / l
            }
        }
    }

    fn check(&self, theta: f64) -> Result<()> {
        self.validate()?;
        if self.admits(theta) {
            Ok(())
        } else {
            let (lo, hi) = self.theta_interval();
            Err(Error::Domain {
                what: "theta",
                detail: format!(
                    "{theta} is outside ({lo}, {hi}) or within {GRAZING_MARGIN} rad of grazing"
                ),
            })
        }
    }
}

/// Which density a sample holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    St,
    AbcFarfield,
    AbcFiniteL,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularDensitySample {
    pub theta: f64,
    pub dp_dtheta: f64,
    pub method: DensityMethod,
}

fn radial_setup(p: &Packet2D, theta: f64, spec: &QuadratureSpec) -> (f64, f64, f64, Vec<f64>) {
    let k0 = p.k0();
    let c = (theta - p.theta0()).cos();
    let kc = k0 * c;
    // Exponent -(k² - 2k k0 c + k0²) = -(k - kc)² - k0²(1 - c²).
    let offset = k0 * k0 * (1.0 - c * c).max(0.0);
    let cutoff = spec.k_max.max(kc.max(0.0) + 12.0);
    let pts = [-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0]
        .iter()
        .map(|d| kc + d)
        .filter(|&k| k > 0.0)
        .collect();
    (kc, offset, cutoff, pts)
}

/// Scattering-theory angular density
/// `dP_ST/dθ = π^{-1} ∫_0^∞ k exp(-(k² - 2k k0 cos(θ - θ0) + k0²)) dk`.
/// The same for every screen orientation, hence no `α` argument.
pub fn dp_st_dtheta(p: &Packet2D, theta: f64, spec: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    spec.validate()?;
    let (kc, offset, cutoff, pts) = radial_setup(p, theta, spec);
    let i = integrate_semi_infinite(
        |k| FRAC_1_PI * k * (-(k - kc) * (k - kc) - offset).exp(),
        cutoff,
        &pts,
        spec,
    )?;
    Ok(i.value)
}

/// Exact far-field ABC density for a flat screen inclined at `α`,
/// `4 Im β̄ π^{-1} ∫_0^∞ k² exp(...) / |k - iβ̄|² dk` with `β̄ = β csc(α - θ)`.
pub fn dp_abc_dtheta_farfield(
    p: &Packet2D,
    theta: f64,
    beta: Complex64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    p.validate()?;
    spec.validate()?;
    if beta.im <= 0.0 {
        return Err(Error::Unphysical(beta));
    }
    let s = (alpha - theta).sin();
    if !(s > 0.0) {
        return Err(Error::Domain {
            what: "theta",
            detail: format!("{theta} is outside ({}, {alpha})", alpha - PI),
        });
    }
    let bbar = beta / s;
    let (kc, offset, cutoff, mut pts) = radial_setup(p, theta, spec);
    pts.push(bbar.im);
    let i = integrate_semi_infinite(
        |k| {
            let den = (k - Complex64::i() * bbar).norm_sqr();
            4.0 * bbar.im * FRAC_1_PI * k * k * (-(k - kc) * (k - kc) - offset).exp() / den
        },
        cutoff,
        &pts,
        spec,
    )?;
    Ok(i.value)
}

/// Time-dependent solution for the inclined screen:
/// `ψ_t^G(r∥; k∥, β, L) φ_t^G(r⊥; k⊥)`.
pub fn psi_t_2d_inclined(r: [f64; 2], t: f64, p: &Packet2D, beta: Complex64, alpha: f64, l: f64) -> Complex64 {
    let (par, perp) = inclined_frame(alpha);
    let r_par = dot(par, r);
    let r_perp = dot(perp, r);
    let k = [p.k0x, p.k0y];
    psi_tg(r_par, t, dot(par, k), beta, l) * phi_tg(r_perp, t, dot(perp, k))
}

/// Time-dependent solution for the L-shaped screen:
/// `ψ_t^G(x; k0x, β, L) ψ_t^G(y; k0y, β, L)`.
pub fn psi_t_2d_lshaped(r: [f64; 2], t: f64, p: &Packet2D, beta: Complex64, l: f64) -> Complex64 {
    psi_tg(r[0], t, p.k0x, beta, l) * psi_tg(r[1], t, p.k0y, beta, l)
}

fn inclined_frame(alpha: f64) -> ([f64; 2], [f64; 2]) {
    let (s, c) = alpha.sin_cos();
    ([s, -c], [c, s])
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Times at which a 1D factor with momentum `k` is large at `pos`.
fn factor_pulses(pos: f64, k: f64, out: &mut Vec<Pulse>) {
    if k.abs() >= 1.0 {
        let center = pos / k;
        if center > 0.0 {
            out.push(Pulse {
                center,
                width: (1.0 + center * center).sqrt() / k.abs(),
            });
        }
    } else {
        // Slow packets reach `pos` mainly by spreading.
        out.push(Pulse {
            center: SQRT_2 * pos.abs(),
            width: pos.abs().max(1.0),
        });
    }
}

/// Finite-L density `(dℓ/dθ) Im β ∫_0^∞ |ψ_t(R_θ)|² dt`.
pub fn dp_abc_dtheta_finite_l(
    p: &Packet2D,
    theta: f64,
    beta: Complex64,
    geom: &ScreenGeometry,
    spec: &QuadratureSpec,
) -> Result<f64> {
    p.validate()?;
    spec.validate()?;
    if beta.im <= 0.0 {
        return Err(Error::Unphysical(beta));
    }
    geom.check(theta)?;
    let r = geom.hit_point(theta);
    let dl = geom.line_element(theta);
    let mut pulses = Vec::new();
    let i = match *geom {
        ScreenGeometry::Inclined { alpha, l } => {
            let (par, perp) = inclined_frame(alpha);
            let k = [p.k0x, p.k0y];
            factor_pulses(l, dot(par, k), &mut pulses);
            factor_pulses(dot(perp, r), dot(perp, k), &mut pulses);
            integrate_pulses(
                |t| beta.im * psi_t_2d_inclined(r, t, p, beta, alpha, l).norm_sqr(),
                &pulses,
                spec,
            )?
        }
        ScreenGeometry::LShaped { l } => {
            for (pos, k) in [(r[0], p.k0x), (r[1], p.k0y)] {
                factor_pulses(pos, k, &mut pulses);
                factor_pulses(2.0 * l - pos, k, &mut pulses);
            }
            integrate_pulses(
                |t| beta.im * psi_t_2d_lshaped(r, t, p, beta, l).norm_sqr(),
                &pulses,
                spec,
            )?
        }
    };
    Ok(dl * i.value)
}

/// Detection probabilities on the two edges of the L-shaped screen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionTotals {
    /// Edge `x = L`, `θ ∈ (-π/2, π/4)`.
    pub vertical: f64,
    /// Edge `y = L`, `θ ∈ [π/4, π)`; the corner belongs here.
    pub horizontal: f64,
    pub error: f64,
}

/// Integrates the finite-L density over each edge of the L-shaped screen.
///
/// The outer θ integral runs to a looser tolerance (`1e-7` absolute at the
/// tightest) than the inner time integrals it is built from.
pub fn section_totals_lshaped(p: &Packet2D, beta: Complex64, l: f64, spec: &QuadratureSpec) -> Result<SectionTotals> {
    if beta.im <= 0.0 {
        return Err(Error::Unphysical(beta));
    }
    let geom = ScreenGeometry::LShaped { l };
    geom.validate()?;
    let outer = QuadratureSpec {
        abs_tol: (spec.abs_tol * 1e3).max(1e-7),
        rel_tol: spec.rel_tol.max(1e-7),
        ..*spec
    };
    let failure = RefCell::new(None);
    let density = |theta: f64| match dp_abc_dtheta_finite_l(p, theta, beta, &geom, spec) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let section = |lo: f64, hi: f64| -> Result<(f64, f64)> {
        let mut pts: Vec<f64> = (1..16).map(|j| lo + (hi - lo) * j as f64 / 16.0).collect();
        pts.push(p.theta0());
        pts.push(PI - p.theta0());
        let i = integrate_interval(density, lo, hi, &pts, &outer)?;
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        Ok((i.value, i.abs_error))
    };
    let (vertical, ev) = section(-FRAC_PI_2 + GRAZING_MARGIN, FRAC_PI_4)?;
    let (horizontal, eh) = section(FRAC_PI_4, PI - GRAZING_MARGIN)?;
    Ok(SectionTotals {
        vertical,
        horizontal,
        error: ev + eh,
    })
}

/// `n` uniformly spaced angles spanning the closed screen interval. End
/// points and grazing samples are kept so callers can report them.
pub fn angular_grid(geom: &ScreenGeometry, n: usize) -> Vec<f64> {
    let (lo, hi) = geom.theta_interval();
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect(),
    }
}

/// Indices of interior local maxima at least `1e-3` of the global maximum.
/// Non-finite samples (excluded directions) break runs and are never peaks.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let top = values
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() || top <= 0.0 {
        return Vec::new();
    }
    let floor = 1e-3 * top;
    (1..values.len().saturating_sub(1))
        .filter(|&i| {
            let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
            a.is_finite() && b.is_finite() && c.is_finite() && b > a && b >= c && b >= floor
        })
        .collect()
}
