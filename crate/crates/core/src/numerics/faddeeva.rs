//! Complementary error function of complex argument.
//!
//! Everything is routed through the Faddeeva function `w(z) = e^{-z^2} erfc(-iz)`,
//! evaluated only in the closed upper half plane where it is bounded:
//!
//! * `|z| < 0.5`: Maclaurin series of `erf`.
//! * `|z| < 8`: Weideman's rational expansion with 40 terms, accurate to a few
//!   ulps times 10 over the whole disc.
//! * `|z| >= 8`: the Laplace continued fraction, evaluated bottom-up.
//!
//! Lower-half-plane values come from the reflection `erfc(-z) = 2 - erfc(z)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const WEIDEMAN_TERMS: usize = 40;
const CF_RADIUS: f64 = 8.0;
const CF_DEPTH: usize = 40;
const SERIES_RADIUS: f64 = 0.5;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

struct Weideman {
    scale: f64,
    coeffs: [f64; WEIDEMAN_TERMS],
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_TERMS;
        let m = 2 * n;
        let samples = 2 * m;
        let scale = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // f(theta) = e^{-t^2} (L^2 + t^2), t = L tan(theta / 2), sampled on a
        // periodic grid; theta = pi maps to t = inf where f vanishes.
        let f: Vec<f64> = (0..samples)
            .map(|j| {
                if j == m {
                    return 0.0;
                }
                let theta = j as f64 * PI / m as f64;
                let t = scale * (0.5 * theta).tan();
                (-t * t).exp() * (scale * scale + t * t)
            })
            .collect();
        let mut coeffs = [0.0; WEIDEMAN_TERMS];
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let order = (idx + 1) as f64;
            let sum: f64 = f
                .iter()
                .enumerate()
                .map(|(j, fj)| fj * (order * j as f64 * PI / m as f64).cos())
                .sum();
            *c = sum / samples as f64;
        }
        Weideman { scale, coeffs }
    })
}

fn w_weideman(z: Complex64) -> Complex64 {
    let table = weideman();
    let iz = Complex64::i() * z;
    let denom = table.scale - iz;
    let big_z = (table.scale + iz) / denom;
    let p = table
        .coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * big_z + c);
    2.0 * p / (denom * denom) + FRAC_1_SQRT_PI / denom
}

/// `erf(z)` by its Maclaurin series; only used for `|z| < SERIES_RADIUS`.
fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..40 {
        term *= -z2 / n as f64;
        let next = term / (2 * n + 1) as f64;
        sum += next;
        if next.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    2.0 * FRAC_1_SQRT_PI * sum
}

fn w_continued_fraction(z: Complex64) -> Complex64 {
    let mut tail = Complex64::new(0.0, 0.0);
    for k in (1..=CF_DEPTH).rev() {
        tail = (0.5 * k as f64) / (z - tail);
    }
    Complex64::new(0.0, FRAC_1_SQRT_PI) / (z - tail)
}

/// Faddeeva function `w(z)` for `Im z >= 0`.
///
/// Callers must stay in the closed upper half plane; use [`erfc_complex`] or
/// [`exp_erfc_scaled`] for general arguments.
pub fn faddeeva_upper(z: Complex64) -> Complex64 {
    debug_assert!(z.im >= 0.0 || z.im.is_nan());
    let r = z.norm();
    if r >= CF_RADIUS {
        w_continued_fraction(z)
    } else if r < SERIES_RADIUS {
        let iz = Complex64::new(-z.im, z.re);
        (-z * z).exp() * (1.0 - erf_series(-iz))
    } else {
        w_weideman(z)
    }
}

/// Scaled complementary error function `e^{z^2} erfc(z)` for `Re z >= 0`.
pub fn erfcx_right(z: Complex64) -> Complex64 {
    faddeeva_upper(Complex64::new(-z.im, z.re))
}

/// `erfc(z)` for complex `z`.
pub fn erfc_complex(z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        (-z * z).exp() * erfcx_right(z)
    } else {
        Complex64::new(2.0, 0.0) - (-z * z).exp() * erfcx_right(-z)
    }
}

/// Real complementary error function.
pub fn erfc_real(x: f64) -> f64 {
    erfc_complex(Complex64::new(x, 0.0)).re
}

/// `e^a erfc(z)`, combining the exponents so that the result is finite whenever
/// the product is, even when `e^a` on its own overflows.
pub fn exp_erfc_scaled(a: Complex64, z: Complex64) -> Result<Complex64> {
    let value = exp_erfc_with_shift(a, a - z * z, z);
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow)
    }
}

/// Same as [`exp_erfc_scaled`] but with `a - z^2` supplied by the caller, who can
/// often form it without cancellation. No overflow check.
pub(crate) fn exp_erfc_with_shift(a: Complex64, shifted: Complex64, z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        shifted.exp() * erfcx_right(z)
    } else {
        2.0 * a.exp() - shifted.exp() * erfcx_right(-z)
    }
}
