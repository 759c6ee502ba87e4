//! C ABI over `cheegerlab`.
//!
//! Every fallible call returns a [`ClStatus`]; on failure the message is kept per thread and
//! read back with [`cl_last_error_message`]. Handles are opaque and released with their
//! `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cheegerlab::error::{Error, ErrorKind};
use cheegerlab::geometry::{Domain, Point};
use cheegerlab::oracle::{oracle_h1, StencilKind};
use cheegerlab::pcheeger::{solve_h, VolumeSet};
use cheegerlab::profile::{IsoProfile, ProfileOptions};

/// Result codes; the nonzero values match the CLI exit codes where they overlap.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NeckDetected = 3,
    Numerical = 4,
    Panic = 5,
}

/// Opaque validated domain.
pub struct ClDomain(Domain);

/// Opaque isoperimetric profile of a domain.
pub struct ClProfile(IsoProfile);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ClStatus, msg: impl Into<String>) -> ClStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> ClStatus {
    let status = match e.kind() {
        ErrorKind::Input => ClStatus::InvalidInput,
        ErrorKind::Neck => ClStatus::NeckDetected,
        ErrorKind::Numerical => ClStatus::Numerical,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning errors and panics into status codes.
fn guard<F>(f: F) -> ClStatus
where
    F: FnOnce() -> Result<ClStatus, Error>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => from_error(e),
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ClStatus::Panic, format!("panic: {msg}"))
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(ClStatus::NullPointer, "null pointer argument");
        }
    };
}

/// Copy of the last error message on this thread, or null. Free with [`cl_string_free`].
#[no_mangle]
pub extern "C" fn cl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Polygon from `n` interleaved `x, y` pairs.
///
/// # Safety
/// `xy` must point to `2n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_domain_from_vertices(xy: *const f64, n: usize, out: *mut *mut ClDomain) -> ClStatus {
    non_null!(xy, out);
    let coords: Vec<[f64; 2]> = std::slice::from_raw_parts(xy, 2 * n).chunks_exact(2).map(|c| [c[0], c[1]]).collect();
    guard(|| {
        let d = Domain::from_vertices(&coords)?;
        *out = Box::into_raw(Box::new(ClDomain(d)));
        Ok(ClStatus::Ok)
    })
}

/// Domain from the JSON accepted by the CLI.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_domain_from_json(json: *const c_char, out: *mut *mut ClDomain) -> ClStatus {
    non_null!(json, out);
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        return fail(ClStatus::InvalidInput, "input is not UTF-8");
    };
    guard(|| {
        let d = Domain::from_json(text)?;
        *out = Box::into_raw(Box::new(ClDomain(d)));
        Ok(ClStatus::Ok)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_domain_disk(cx: f64, cy: f64, radius: f64, out: *mut *mut ClDomain) -> ClStatus {
    non_null!(out);
    guard(|| {
        let d = Domain::disk(Point::new(cx, cy), radius)?;
        *out = Box::into_raw(Box::new(ClDomain(d)));
        Ok(ClStatus::Ok)
    })
}

/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_domain_free(d: *mut ClDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Area, perimeter and inradius.
///
/// # Safety
/// `d` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_domain_measure(
    d: *const ClDomain,
    area: *mut f64,
    perimeter: *mut f64,
    inradius: *mut f64,
) -> ClStatus {
    non_null!(d, area, perimeter, inradius);
    let d = &(*d).0;
    *area = d.area();
    *perimeter = d.perimeter();
    *inradius = d.inradius().radius;
    ClStatus::Ok
}

/// Builds the profile with default options; fails with `NeckDetected` on domains with a neck.
///
/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_profile_build(d: *const ClDomain, out: *mut *mut ClProfile) -> ClStatus {
    non_null!(d, out);
    let domain = (*d).0.clone();
    guard(|| {
        let p = IsoProfile::build(domain, ProfileOptions::default())?;
        *out = Box::into_raw(Box::new(ClProfile(p)));
        Ok(ClStatus::Ok)
    })
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cl_profile_free(p: *mut ClProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Cheeger constant `H(1)` with the volumes `m ≤ M` of the smallest and largest Cheeger sets.
///
/// # Safety
/// `p` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_profile_h1(
    p: *const ClProfile,
    h1: *mut f64,
    m_vol: *mut f64,
    big_m_vol: *mut f64,
) -> ClStatus {
    non_null!(p, h1, m_vol, big_m_vol);
    let prof = &(*p).0;
    let (m, big_m) = prof.mm_volumes();
    *h1 = prof.h1();
    *m_vol = m;
    *big_m_vol = big_m;
    ClStatus::Ok
}

/// `F(κ)` for `κ ≥ 1/R`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_profile_f(p: *const ClProfile, kappa: f64, out: *mut f64) -> ClStatus {
    non_null!(p, out);
    guard(|| {
        *out = (*p).0.f_value(kappa).map_err(Error::from)?;
        Ok(ClStatus::Ok)
    })
}

/// Isoperimetric profile `I(V)` and its derivative `𝔎(V)` for `πR² ≤ V < |Ω|`.
///
/// # Safety
/// `p` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_profile_i(
    p: *const ClProfile,
    volume: f64,
    perimeter: *mut f64,
    kappa: *mut f64,
) -> ClStatus {
    non_null!(p, perimeter, kappa);
    let prof = &(*p).0;
    guard(|| {
        *perimeter = prof.i_of_v(volume).map_err(Error::from)?;
        *kappa = prof.kappa_of_v(volume).map_err(Error::from)?;
        Ok(ClStatus::Ok)
    })
}

/// Solves `H(p)`. Up to `capacity` minimizer volumes go to `volumes` and their number to
/// `count`; when every volume of an interval is optimal (`p = ½`), `interval` is set and the
/// endpoints are written instead.
///
/// # Safety
/// `p` must be a live handle, `volumes` must hold `capacity` doubles (it may be null when
/// `capacity` is 0) and the other outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_solve_h(
    p: *const ClProfile,
    exponent: f64,
    hp: *mut f64,
    volumes: *mut f64,
    capacity: usize,
    count: *mut usize,
    interval: *mut bool,
) -> ClStatus {
    non_null!(p, hp, count, interval);
    if capacity > 0 && volumes.is_null() {
        return fail(ClStatus::NullPointer, "null volume buffer");
    }
    let prof = &(*p).0;
    guard(|| {
        let r = solve_h(prof, exponent)?;
        let vals = match &r.volumes {
            VolumeSet::Interval { lo, hi } => vec![*lo, *hi],
            VolumeSet::Points { values } => values.clone(),
        };
        for (k, v) in vals.iter().take(capacity).enumerate() {
            *volumes.add(k) = *v;
        }
        *hp = r.hp;
        *count = vals.len();
        *interval = r.volumes.is_interval();
        Ok(ClStatus::Ok)
    })
}

/// Discrete Cheeger constant on a grid of spacing `h` with a 4, 8 or 16 neighbour stencil.
///
/// # Safety
/// `d` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_oracle_h1(d: *const ClDomain, h: f64, stencil: u32, out: *mut f64) -> ClStatus {
    non_null!(d, out);
    let Some(kind) = StencilKind::from_neighbours(stencil as usize) else {
        return fail(ClStatus::InvalidInput, format!("stencil must be 4, 8 or 16, got {stencil}"));
    };
    let domain = &(*d).0;
    guard(|| {
        let (v, _) = oracle_h1(domain, h, kind)?;
        *out = v;
        Ok(ClStatus::Ok)
    })
}

/// Profile summary as JSON, or null on failure. Free with [`cl_string_free`].
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_profile_summary_json(p: *const ClProfile) -> *mut c_char {
    if p.is_null() {
        set_error("null pointer argument".into());
        return ptr::null_mut();
    }
    match serde_json::to_string(&(*p).0.summary()) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}
