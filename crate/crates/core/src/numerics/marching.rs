//! Panel marching for `∫_0^∞ g(t) dt` where `g` is a sum of arrival pulses
//! followed by an algebraic decay.

use crate::error::Result;
use crate::numerics::quadrature::{integrate_interval, mapped_tail, Integral, QuadratureSpec};

/// A time at which the integrand is expected to peak, with its rough width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub center: f64,
    pub width: f64,
}

const QUIET_PANELS: usize = 5;
const GROWTH_BEFORE_GUARD: f64 = 1.15;
const GROWTH_AFTER_GUARD: f64 = 1.5;

/// Integrates a nonnegative, eventually decaying `g` over `[0, ∞)`.
///
/// Panels grow geometrically from the narrowest pulse width and are cut at
/// every pulse center and at a few widths on either side. Once past the last
/// pulse, marching stops after five consecutive panels each contribute less
/// than `abs_tol / 10`; whatever lies beyond is picked up by a mapped tail.
/// Reaching `spec.t_max` (or the pulses' own horizon, if later) also hands over
/// to the tail.
pub fn integrate_pulses<G: Fn(f64) -> f64>(g: G, pulses: &[Pulse], spec: &QuadratureSpec) -> Result<Integral> {
    let live: Vec<Pulse> = pulses
        .iter()
        .copied()
        .filter(|p| p.center.is_finite() && p.center >= 0.0 && p.width > 0.0)
        .collect();
    let min_width = live
        .iter()
        .map(|p| p.width)
        .fold(f64::INFINITY, f64::min)
        .min(0.5);
    let guard = live
        .iter()
        .map(|p| p.center + 10.0 * p.width)
        .fold(8.0f64, f64::max);
    let horizon = spec.t_max.max(4.0 * guard);

    let mut cuts = vec![0.0];
    let mut t = 0.0;
    let mut w = 0.25 * min_width;
    while t < guard {
        t += w;
        cuts.push(t);
        w *= GROWTH_BEFORE_GUARD;
    }
    for p in &live {
        for j in -4i32..=4 {
            let c = p.center + 1.5 * j as f64 * p.width;
            if c > 0.0 && c < t {
                cuts.push(c);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));

    let panel_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / 20.0,
        ..*spec
    };
    let mut total = Integral::default();
    for pair in cuts.windows(2) {
        total.accumulate(integrate_interval(&g, pair[0], pair[1], &[], &panel_spec)?);
    }

    let quiet_level = spec.abs_tol / 10.0;
    let mut quiet = 0;
    let mut end = t;
    while quiet < QUIET_PANELS && end < horizon {
        let next = (end + w).min(horizon);
        let panel = integrate_interval(&g, end, next, &[], &panel_spec)?;
        if panel.value.abs() < quiet_level {
            quiet += 1;
        } else {
            quiet = 0;
        }
        total.accumulate(panel);
        end = next;
        w *= GROWTH_AFTER_GUARD;
    }

    let tail = mapped_tail(&g, end, &panel_spec)?;
    total.accumulate(tail);
    Ok(total)
}
