//! Globally adaptive Gauss-Kronrod (7/15) quadrature with an optional mapped
//! tail for semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and truncation radii for the semi-infinite integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Momentum-integral truncation. Packet-aware callers never integrate less
    /// than twelve packet widths past the largest central momentum, whatever
    /// this value says.
    pub k_max: f64,
    /// Time beyond which time integrals switch to the mapped tail.
    pub t_max: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            k_max: 32.0,
            t_max: 100.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        k_max: f64,
        t_max: f64,
        max_subdivisions: usize,
    ) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            k_max,
            t_max,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Defaults tuned to a packet with central momentum `k0` and a screen at `l`.
    pub fn for_packet(k0: f64, l: f64) -> Self {
        Self {
            k_max: k0.max(0.0) + 12.0,
            t_max: 10.0 * l / k0.abs().max(0.5) + 100.0,
            ..Self::default()
        }
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.abs_tol, self.rel_tol, self.k_max, self.t_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("quadrature", "all fields must be finite"));
        }
        if self.abs_tol < 0.0 || self.rel_tol < 0.0 {
            return Err(Error::invalid("abs_tol/rel_tol", "tolerances must be >= 0"));
        }
        if self.abs_tol + self.rel_tol <= 0.0 {
            return Err(Error::invalid(
                "abs_tol/rel_tol",
                "at least one tolerance must be positive",
            ));
        }
        if self.k_max <= 0.0 {
            return Err(Error::invalid("k_max", "must be > 0"));
        }
        if self.t_max <= 0.0 {
            return Err(Error::invalid("t_max", "must be > 0"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", "must be > 0"));
        }
        Ok(())
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of a quadrature together with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Integral {
    pub value: f64,
    /// Estimated quadrature error on the integrated range.
    pub abs_error: f64,
    /// Magnitude of the neglected range beyond the truncation point.
    pub tail: f64,
    pub evaluations: usize,
}

impl Integral {
    pub fn error_bound(&self) -> f64 {
        self.abs_error + self.tail
    }

    pub(crate) fn accumulate(&mut self, other: Integral) {
        self.value += other.value;
        self.abs_error += other.abs_error;
        self.tail += other.tail;
        self.evaluations += other.evaluations;
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = kronrod * half;
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

/// Adaptive integral of `f` over `[a, b]`, with the range first split at every
/// breakpoint strictly inside it.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("interval", "endpoints must be finite"));
    }
    if a == b {
        return Ok(Integral::default());
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > lo && *p < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);
    let mut evaluations = 0;
    for w in edges.windows(2) {
        heap.push(kronrod15(&f, w[0], w[1]));
        evaluations += 15;
    }

    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                partial: value,
                achieved: f64::INFINITY,
                subdivisions: heap.len(),
            });
        }
        if error <= spec.target(value) || error <= 50.0 * f64::EPSILON * value.abs() {
            return Ok(Integral {
                value: sign * value,
                abs_error: error,
                tail: 0.0,
                evaluations,
            });
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                partial: sign * value,
                achieved: error,
                subdivisions: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at machine resolution; accept its estimate.
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
        evaluations += 30;
    }
}

/// `∫_0^cutoff f`, reporting the magnitude of `∫_cutoff^∞ f` as the tail.
///
/// The tail is estimated by mapping `[cutoff, ∞)` onto `(0, 1]` and is added to
/// the error budget, never to the value.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    cutoff: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if !(cutoff > 0.0) {
        return Err(Error::invalid("cutoff", "must be > 0"));
    }
    let mut body = integrate_interval(&f, 0.0, cutoff, breakpoints, spec)?;
    let tail = mapped_tail(&f, cutoff, spec)?;
    body.tail = tail.value.abs() + tail.abs_error;
    body.evaluations += tail.evaluations;
    Ok(body)
}

/// `∫_start^∞ f` through the substitution `t = start / u`.
pub fn mapped_tail<F: Fn(f64) -> f64>(f: F, start: f64, spec: &QuadratureSpec) -> Result<Integral> {
    if !(start > 0.0) {
        return Err(Error::invalid("start", "mapped tail needs a positive start"));
    }
    let g = |u: f64| {
        let t = start / u;
        let v = f(t) * start / (u * u);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate_interval(g, 0.0, 1.0, &[], spec)
}
