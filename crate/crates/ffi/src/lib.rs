//! C ABI for the `circletons` crate.
//!
//! Curves are returned behind an opaque [`CircletonsCurve`] handle that the
//! caller releases with [`circletons_curve_free`]. Every fallible function
//! returns a [`CircletonsStatus`]; on failure a message is available from
//! [`circletons_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use circletons::circleton::{binomial, circleton_curvature_checked, resonance_points};
use circletons::{make_circleton, CircletonSpec, CurveSamples, Error};

/// Status codes returned by all fallible functions.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircletonsStatus {
    Ok = 0,
    /// An argument violates a documented precondition.
    InvalidArgument = 1,
    /// A required pointer was null.
    NullPointer = 2,
    /// The computation failed numerically.
    Numerical = 3,
    /// The output buffer is shorter than required.
    BufferTooSmall = 4,
    /// Internal error; the library state is unaffected.
    Panic = 5,
}

/// Opaque curve handle.
pub struct CircletonsCurve {
    curve: CurveSamples,
}

/// Scalar summary of a generated curve.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CircletonsSummary {
    pub samples: usize,
    pub period: f64,
    pub closure_error: f64,
    pub bending_energy: f64,
    pub peak_count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_for(e: &Error) -> CircletonsStatus {
    set_error(e.to_string());
    match e {
        Error::InvalidSpec(_) | Error::InvalidArgument(_) | Error::NonFinite(_) => {
            CircletonsStatus::InvalidArgument
        }
        _ => CircletonsStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> CircletonsStatus) -> CircletonsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == CircletonsStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => {
            set_error("internal panic");
            CircletonsStatus::Panic
        }
    }
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn circletons_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn circletons_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// Builds the circleton with wrapping number `omega` dressed at the
/// resonance indices `ks[0..ks_len]` (strictly increasing, each in
/// 1..omega), sampled at `samples` points of one period. On success `*out`
/// receives a handle to free with `circletons_curve_free`.
///
/// # Safety
/// `ks` must point to `ks_len` readable values (or may be null when
/// `ks_len` is 0); `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn circletons_generate(
    omega: u32,
    ks: *const u32,
    ks_len: usize,
    samples: usize,
    out: *mut *mut CircletonsCurve,
) -> CircletonsStatus {
    guard(|| {
        if out.is_null() || (ks.is_null() && ks_len > 0) {
            set_error("null pointer argument");
            return CircletonsStatus::NullPointer;
        }
        // SAFETY: `out` is non-null and valid per the contract.
        unsafe { *out = ptr::null_mut() };
        let ks = if ks_len == 0 {
            Vec::new()
        } else {
            // SAFETY: non-null with `ks_len` readable values per the contract.
            unsafe { std::slice::from_raw_parts(ks, ks_len) }.to_vec()
        };
        let spec = match CircletonSpec::new(omega, ks) {
            Ok(s) => s,
            Err(e) => return status_for(&e),
        };
        match make_circleton(&spec, samples) {
            Ok(curve) => {
                let handle = Box::into_raw(Box::new(CircletonsCurve { curve }));
                // SAFETY: as above.
                unsafe { *out = handle };
                CircletonsStatus::Ok
            }
            Err(e) => status_for(&e),
        }
    })
}

/// Releases a curve handle. Null is ignored.
///
/// # Safety
/// `curve` must be null or a handle from `circletons_generate` that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn circletons_curve_free(curve: *mut CircletonsCurve) {
    if !curve.is_null() {
        // SAFETY: the handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(curve) });
    }
}

/// Number of samples of the curve, or 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn circletons_curve_len(curve: *const CircletonsCurve) -> usize {
    // SAFETY: null or live per the contract.
    unsafe { curve.as_ref() }.map_or(0, |c| c.curve.len())
}

/// Copies the points as interleaved x, y, z into `xyz`, which must hold at
/// least 3 * len doubles (`capacity` counts doubles).
///
/// # Safety
/// `curve` must be a live handle and `xyz` writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn circletons_curve_points(
    curve: *const CircletonsCurve,
    xyz: *mut f64,
    capacity: usize,
) -> CircletonsStatus {
    guard(|| {
        // SAFETY: null or live per the contract.
        let Some(c) = (unsafe { curve.as_ref() }) else {
            set_error("null curve handle");
            return CircletonsStatus::NullPointer;
        };
        if xyz.is_null() {
            set_error("null output buffer");
            return CircletonsStatus::NullPointer;
        }
        let need = 3 * c.curve.len();
        if capacity < need {
            set_error(format!("buffer holds {capacity} doubles, need {need}"));
            return CircletonsStatus::BufferTooSmall;
        }
        // SAFETY: writable for `capacity >= need` doubles.
        let buf = unsafe { std::slice::from_raw_parts_mut(xyz, need) };
        for (chunk, p) in buf.chunks_exact_mut(3).zip(&c.curve.points) {
            chunk.copy_from_slice(&[p.x, p.y, p.z]);
        }
        CircletonsStatus::Ok
    })
}

/// Copies the signed curvature samples into `kappa` (`capacity` doubles).
///
/// # Safety
/// `curve` must be a live handle and `kappa` writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn circletons_curve_curvature(
    curve: *const CircletonsCurve,
    kappa: *mut f64,
    capacity: usize,
) -> CircletonsStatus {
    guard(|| {
        // SAFETY: null or live per the contract.
        let Some(c) = (unsafe { curve.as_ref() }) else {
            set_error("null curve handle");
            return CircletonsStatus::NullPointer;
        };
        if kappa.is_null() {
            set_error("null output buffer");
            return CircletonsStatus::NullPointer;
        }
        let need = c.curve.len();
        if capacity < need {
            set_error(format!("buffer holds {capacity} doubles, need {need}"));
            return CircletonsStatus::BufferTooSmall;
        }
        // SAFETY: writable for `capacity >= need` doubles.
        unsafe { std::slice::from_raw_parts_mut(kappa, need) }.copy_from_slice(&c.curve.kappa);
        CircletonsStatus::Ok
    })
}

/// Fills `*out` with the sample count, period, closure error, bending energy
/// and curvature peak count.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn circletons_curve_summary(
    curve: *const CircletonsCurve,
    out: *mut CircletonsSummary,
) -> CircletonsStatus {
    guard(|| {
        // SAFETY: null or live per the contract.
        let (Some(c), false) = (unsafe { curve.as_ref() }, out.is_null()) else {
            set_error("null pointer argument");
            return CircletonsStatus::NullPointer;
        };
        let m = &c.curve.meta;
        let summary = CircletonsSummary {
            samples: c.curve.len(),
            period: m.period.unwrap_or(f64::NAN),
            closure_error: m.closure_error.unwrap_or(f64::NAN),
            bending_energy: m.bending_energy.unwrap_or(f64::NAN),
            peak_count: m.peak_count.unwrap_or(0),
        };
        // SAFETY: non-null and valid per the contract.
        unsafe { *out = summary };
        CircletonsStatus::Ok
    })
}

/// Imaginary part of the resonance point alpha = i sqrt(1 - k^2 / omega^2).
///
/// # Safety
/// `alpha_im` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn circletons_resonance_point(k: u32, omega: u32, alpha_im: *mut f64) -> CircletonsStatus {
    guard(|| {
        if alpha_im.is_null() {
            set_error("null output pointer");
            return CircletonsStatus::NullPointer;
        }
        let points = match resonance_points(omega) {
            Ok(p) => p,
            Err(e) => return status_for(&e),
        };
        match points.iter().find(|p| p.k == k) {
            Some(p) => {
                // SAFETY: non-null per the contract.
                unsafe { *alpha_im = p.alpha.im };
                CircletonsStatus::Ok
            }
            None => {
                set_error(format!("k = {k} is not a resonance index for omega = {omega}"));
                CircletonsStatus::InvalidArgument
            }
        }
    })
}

/// Closed-form signed curvature of the (k, omega)-circleton at time t.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn circletons_curvature(k: u32, omega: u32, t: f64, out: *mut f64) -> CircletonsStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return CircletonsStatus::NullPointer;
        }
        match circleton_curvature_checked(k, omega, t) {
            Ok(v) => {
                // SAFETY: non-null per the contract.
                unsafe { *out = v };
                CircletonsStatus::Ok
            }
            Err(e) => status_for(&e),
        }
    })
}

/// Number of multi-circletons with `size` simple factors on the
/// `omega`-wrapped circle, C(omega - 1, size).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn circletons_enumerate_count(omega: u32, size: u32, out: *mut u64) -> CircletonsStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return CircletonsStatus::NullPointer;
        }
        if omega < 1 || size > omega - 1 {
            set_error(format!("size {size} out of range for omega = {omega}"));
            return CircletonsStatus::InvalidArgument;
        }
        // SAFETY: non-null per the contract.
        unsafe { *out = binomial(omega as u64 - 1, size as u64) };
        CircletonsStatus::Ok
    })
}
