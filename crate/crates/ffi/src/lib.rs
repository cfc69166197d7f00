//! C ABI over `abc-contrast`.
//!
//! Every fallible function returns an [`AbcStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! read with [`abc_last_error`]. Packets and quadrature settings are opaque
//! handles created and freed through this API. A null quadrature handle means
//! the library defaults.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use abc_contrast::closed_form::{self, AbcParameter, Packet1D};
use abc_contrast::detection;
use abc_contrast::numerics::{self, ComplexValue, QuadratureSpec};
use abc_contrast::scattering_2d::{self, Packet2D, ScreenGeometry};
use abc_contrast::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbcStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    /// Detection needs `Im beta > 0`.
    Unphysical = 3,
    Singular = 4,
    Domain = 5,
    NonConvergence = 6,
    Overflow = 7,
    UnderResolved = 8,
    Unstable = 9,
    /// A Rust panic was caught at the boundary.
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcComplex {
    pub re: f64,
    pub im: f64,
}

/// A probability; `value` is `raw` clamped into `[0, 1]` when the excursion
/// is within quadrature noise.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcProbability {
    pub value: f64,
    pub raw: f64,
    pub error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcContrastReport {
    pub p_st: f64,
    pub p_abc: f64,
    pub contrast: f64,
    pub quadrature_error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcSectionTotals {
    pub vertical: f64,
    pub horizontal: f64,
    pub error: f64,
}

/// Opaque 1D packet.
pub struct AbcPacket1D(Packet1D);

/// Opaque 2D Gaussian packet.
pub struct AbcPacket2D(Packet2D);

/// Opaque quadrature settings.
pub struct AbcQuadrature(QuadratureSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> AbcStatus {
    match e {
        Error::NonConvergence { .. } => AbcStatus::NonConvergence,
        Error::Overflow => AbcStatus::Overflow,
        Error::Unphysical(_) => AbcStatus::Unphysical,
        Error::Singular { .. } => AbcStatus::Singular,
        Error::Domain { .. } => AbcStatus::Domain,
        Error::UnderResolved { .. } => AbcStatus::UnderResolved,
        Error::Unstable { .. } => AbcStatus::Unstable,
        Error::InvalidParameter { .. } => AbcStatus::InvalidArgument,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, stores its value in `out` and converts failures and panics into
/// status codes.
fn guard<T, F>(out: *mut T, f: F) -> AbcStatus
where
    F: FnOnce() -> Result<T, Fail>,
{
    if out.is_null() {
        set_last_error("output pointer is null");
        return AbcStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: `out` is non-null and the caller promises it is valid for writes.
            unsafe { out.write(v) };
            AbcStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_last_error(&format!("{what} is null"));
            AbcStatus::NullPointer
        }
        Err(_) => {
            set_last_error("internal panic");
            AbcStatus::Internal
        }
    }
}

/// # Safety
/// `p` is null or a handle from this library that has not been freed.
unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

/// # Safety
/// As for [`deref`]; null maps to the default settings.
unsafe fn spec_or_default(q: *const AbcQuadrature) -> QuadratureSpec {
    q.as_ref().map_or_else(QuadratureSpec::default, |q| q.0)
}

fn complex(z: AbcComplex) -> ComplexValue {
    ComplexValue::new(z.re, z.im)
}

fn out_complex(z: ComplexValue) -> AbcComplex {
    AbcComplex { re: z.re, im: z.im }
}

fn probability(p: detection::Probability) -> AbcProbability {
    AbcProbability {
        value: p.value,
        raw: p.raw,
        error: p.error,
    }
}

fn leak<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failure on the calling thread, or an empty string.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn abc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn abc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Quadrature settings with the given tolerances and default cutoffs.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn abc_quadrature_new(abs_tol: f64, rel_tol: f64, out: *mut *mut AbcQuadrature) -> AbcStatus {
    guard(out, || {
        let spec = QuadratureSpec::default().with_tolerances(abs_tol, rel_tol);
        spec.validate()?;
        Ok(leak(AbcQuadrature(spec)))
    })
}

/// # Safety
/// `q` is null or a handle from [`abc_quadrature_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn abc_quadrature_free(q: *mut AbcQuadrature) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// `e^{i k0 x} G(x)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn abc_packet1d_gaussian(k0: f64, out: *mut *mut AbcPacket1D) -> AbcStatus {
    guard(out, || {
        let p = Packet1D::gaussian(k0);
        p.validate()?;
        Ok(leak(AbcPacket1D(p)))
    })
}

/// Normalized superposition of Gaussians with momenta `k0` and `k1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn abc_packet1d_superposition(k0: f64, k1: f64, out: *mut *mut AbcPacket1D) -> AbcStatus {
    guard(out, || {
        let p = Packet1D::superposition(k0, k1);
        p.validate()?;
        Ok(leak(AbcPacket1D(p)))
    })
}

/// # Safety
/// `p` is null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn abc_packet1d_free(p: *mut AbcPacket1D) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn abc_packet2d_new(k0x: f64, k0y: f64, out: *mut *mut AbcPacket2D) -> AbcStatus {
    guard(out, || Ok(leak(AbcPacket2D(Packet2D::new(k0x, k0y)?))))
}

/// # Safety
/// `p` is null or a handle from [`abc_packet2d_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn abc_packet2d_free(p: *mut AbcPacket2D) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Complementary error function of a real argument.
#[no_mangle]
pub extern "C" fn abc_erfc(x: f64) -> f64 {
    numerics::erfc_real(x)
}

/// Complementary error function of a complex argument.
#[no_mangle]
pub extern "C" fn abc_erfc_complex(z: AbcComplex) -> AbcComplex {
    out_complex(numerics::erfc_complex(complex(z)))
}

/// Reflection amplitude `(k + i beta) / (k - i beta)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn abc_rho_beta(k: f64, beta: AbcComplex, out: *mut AbcComplex) -> AbcStatus {
    guard(out, || Ok(out_complex(closed_form::rho_beta(k, complex(beta))?)))
}

/// Closed-form Gaussian solution `psi_t(x)` for the Robin screen at `l`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn abc_psi_tg(
    x: f64,
    t: f64,
    k0: f64,
    beta: AbcComplex,
    l: f64,
    out: *mut AbcComplex,
) -> AbcStatus {
    guard(out, || {
        if !(x.is_finite() && t.is_finite() && t >= 0.0 && k0.is_finite() && l.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "x/t/k0/l",
                reason: "must be finite with t >= 0".into(),
            }
            .into());
        }
        Ok(out_complex(closed_form::psi_tg(x, t, k0, complex(beta), l)))
    })
}

/// Scattering-theory probability of crossing the screen.
///
/// # Safety
/// `packet` must be a live handle; `quad` a live handle or null; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn abc_p_st(
    packet: *const AbcPacket1D,
    quad: *const AbcQuadrature,
    out: *mut AbcProbability,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        Ok(probability(detection::p_st_1d(&p.0, &spec_or_default(quad))?))
    })
}

/// Absorbed probability from the time integral of the boundary flux.
///
/// # Safety
/// As for [`abc_p_st`].
#[no_mangle]
pub unsafe extern "C" fn abc_p_abc_time(
    packet: *const AbcPacket1D,
    beta: AbcComplex,
    l: f64,
    quad: *const AbcQuadrature,
    out: *mut AbcProbability,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        let b = AbcParameter::physical(complex(beta))?;
        Ok(probability(detection::p_abc_time_integral(&p.0, &b, l, &spec_or_default(quad))?))
    })
}

/// Absorbed probability from its momentum-space form (`Re beta <= 0`).
///
/// # Safety
/// As for [`abc_p_st`].
#[no_mangle]
pub unsafe extern "C" fn abc_p_abc_momentum(
    packet: *const AbcPacket1D,
    beta: AbcComplex,
    l: f64,
    quad: *const AbcQuadrature,
    out: *mut AbcProbability,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        let b = AbcParameter::physical(complex(beta))?;
        Ok(probability(detection::p_abc_dollard(&p.0, &b, l, &spec_or_default(quad))?))
    })
}

/// `P_ST - P_ABC(l)`.
///
/// # Safety
/// As for [`abc_p_st`].
#[no_mangle]
pub unsafe extern "C" fn abc_contrast_l(
    packet: *const AbcPacket1D,
    beta: AbcComplex,
    l: f64,
    quad: *const AbcQuadrature,
    out: *mut AbcContrastReport,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        let b = AbcParameter::physical(complex(beta))?;
        let r = detection::contrast_l(&p.0, &b, l, &spec_or_default(quad))?;
        Ok(AbcContrastReport {
            p_st: r.p_st,
            p_abc: r.p_abc,
            contrast: r.contrast,
            quadrature_error: r.quadrature_error,
        })
    })
}

/// Far-field contrast.
///
/// # Safety
/// As for [`abc_p_st`].
#[no_mangle]
pub unsafe extern "C" fn abc_contrast_infinity(
    packet: *const AbcPacket1D,
    beta: AbcComplex,
    quad: *const AbcQuadrature,
    out: *mut AbcProbability,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        let b = AbcParameter::physical(complex(beta))?;
        Ok(probability(detection::contrast_infinity(&p.0, &b, &spec_or_default(quad))?))
    })
}

/// Laplace-method estimate of the far-field contrast of a superposition.
#[no_mangle]
pub extern "C" fn abc_contrast_laplace(k0: f64, k1: f64, beta: AbcComplex) -> f64 {
    detection::contrast_laplace_approx(k0, k1, complex(beta))
}

/// Scattering-theory angular density.
///
/// # Safety
/// `packet` must be a live handle; `quad` a live handle or null; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn abc_dp_st_dtheta(
    packet: *const AbcPacket2D,
    theta: f64,
    quad: *const AbcQuadrature,
    out: *mut f64,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        Ok(scattering_2d::dp_st_dtheta(&p.0, theta, &spec_or_default(quad))?)
    })
}

/// Exact far-field ABC angular density for a flat screen inclined at `alpha`.
///
/// # Safety
/// As for [`abc_dp_st_dtheta`].
#[no_mangle]
pub unsafe extern "C" fn abc_dp_abc_farfield(
    packet: *const AbcPacket2D,
    theta: f64,
    beta: AbcComplex,
    alpha: f64,
    quad: *const AbcQuadrature,
    out: *mut f64,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        Ok(scattering_2d::dp_abc_dtheta_farfield(
            &p.0,
            theta,
            complex(beta),
            alpha,
            &spec_or_default(quad),
        )?)
    })
}

/// Finite-distance ABC angular density on the inclined screen.
///
/// # Safety
/// As for [`abc_dp_st_dtheta`].
#[no_mangle]
pub unsafe extern "C" fn abc_dp_abc_inclined(
    packet: *const AbcPacket2D,
    theta: f64,
    beta: AbcComplex,
    alpha: f64,
    l: f64,
    quad: *const AbcQuadrature,
    out: *mut f64,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        let geom = ScreenGeometry::Inclined { alpha, l };
        geom.validate()?;
        Ok(scattering_2d::dp_abc_dtheta_finite_l(
            &p.0,
            theta,
            complex(beta),
            &geom,
            &spec_or_default(quad),
        )?)
    })
}

/// Finite-distance ABC angular density on the L-shaped screen.
///
/// # Safety
/// As for [`abc_dp_st_dtheta`].
#[no_mangle]
pub unsafe extern "C" fn abc_dp_abc_lshaped(
    packet: *const AbcPacket2D,
    theta: f64,
    beta: AbcComplex,
    l: f64,
    quad: *const AbcQuadrature,
    out: *mut f64,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        let geom = ScreenGeometry::LShaped { l };
        geom.validate()?;
        Ok(scattering_2d::dp_abc_dtheta_finite_l(
            &p.0,
            theta,
            complex(beta),
            &geom,
            &spec_or_default(quad),
        )?)
    })
}

/// Detection probabilities on the vertical and horizontal edges of the
/// L-shaped screen.
///
/// # Safety
/// As for [`abc_dp_st_dtheta`].
#[no_mangle]
pub unsafe extern "C" fn abc_section_totals_lshaped(
    packet: *const AbcPacket2D,
    beta: AbcComplex,
    l: f64,
    quad: *const AbcQuadrature,
    out: *mut AbcSectionTotals,
) -> AbcStatus {
    guard(out, || {
        let p = deref(packet, "packet")?;
        let s = scattering_2d::section_totals_lshaped(&p.0, complex(beta), l, &spec_or_default(quad))?;
        Ok(AbcSectionTotals {
            vertical: s.vertical,
            horizontal: s.horizontal,
            error: s.error,
        })
    })
}
