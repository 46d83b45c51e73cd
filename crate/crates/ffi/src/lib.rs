//! C ABI for the swemb library.
//!
//! Conventions:
//! - measures and groups are opaque heap handles created/destroyed by the
//!   paired `_new` / `_free` calls;
//! - every fallible call returns a [`SwembStatus`] and writes results
//!   through out-pointers, which are touched only on `SWEMB_STATUS_OK`;
//! - [`swemb_last_error_message`] returns a thread-local, NUL-terminated
//!   description of the most recent failure in the calling thread;
//! - the generated header lives at `include/swemb.h` and is refreshed by
//!   the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use swemb::orbit::{AffineIsometry, FiniteIsometryGroup};
use swemb::special::Dimension;
use swemb::{sw1_exact_2d, sw1_monte_carlo, w1, EmpiricalMeasure, Error};

/// Result codes for every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwembStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Malformed input: bad sizes, non-finite values, invalid configuration.
    InvalidArgument = 2,
    /// Inputs are individually valid but incompatible with each other.
    Mismatch = 3,
    /// A numeric routine failed (e.g. a kernel was not embeddable).
    NumericError = 4,
    /// Unexpected internal failure.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_for(err: &Error) -> SwembStatus {
    match err {
        Error::SizeMismatch { .. } | Error::DimensionMismatch { .. } => SwembStatus::Mismatch,
        Error::NotNegativeSemidefinite { .. } => SwembStatus::NumericError,
        _ => SwembStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> SwembStatus {
    set_last_error(&err.to_string());
    status_for(err)
}

fn guard<F: FnOnce() -> SwembStatus>(body: F) -> SwembStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            SwembStatus::Internal
        }
    }
}

/// Message describing the most recent failure in this thread. The pointer
/// stays valid until the next failing call from the same thread.
#[no_mangle]
pub extern "C" fn swemb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Opaque empirical measure: k uniformly weighted points in R^n.
pub struct SwembMeasure(EmpiricalMeasure);

/// Opaque finite group of affine isometries of R^n.
pub struct SwembGroup(FiniteIsometryGroup);

/// Creates a measure from `k` points of dimension `n`, stored row-major in
/// `points` (`k * n` doubles).
///
/// # Safety
/// `points` must be readable for `k * n` doubles and `out` must be a valid
/// destination for one pointer. A non-NULL result handle must be released
/// with [`swemb_measure_free`].
#[no_mangle]
pub unsafe extern "C" fn swemb_measure_new(
    points: *const f64,
    k: usize,
    n: usize,
    out: *mut *mut SwembMeasure,
) -> SwembStatus {
    guard(|| {
        if points.is_null() || out.is_null() {
            set_last_error("points and out must not be NULL");
            return SwembStatus::NullPointer;
        }
        let flat = unsafe { std::slice::from_raw_parts(points, k.saturating_mul(n)) };
        let rows: Vec<Vec<f64>> = flat.chunks_exact(n.max(1)).map(|c| c.to_vec()).collect();
        if rows.len() != k {
            set_last_error("k * n does not describe the provided buffer");
            return SwembStatus::InvalidArgument;
        }
        match EmpiricalMeasure::new(rows) {
            Ok(measure) => {
                unsafe { *out = Box::into_raw(Box::new(SwembMeasure(measure))) };
                SwembStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a measure handle; NULL is ignored.
///
/// # Safety
/// `measure` must be NULL or a handle from [`swemb_measure_new`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn swemb_measure_free(measure: *mut SwembMeasure) {
    if !measure.is_null() {
        drop(unsafe { Box::from_raw(measure) });
    }
}

/// Number of support points, or 0 for NULL.
///
/// # Safety
/// `measure` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn swemb_measure_size(measure: *const SwembMeasure) -> usize {
    if measure.is_null() {
        return 0;
    }
    unsafe { &*measure }.0.size()
}

/// Ambient dimension, or 0 for NULL.
///
/// # Safety
/// `measure` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn swemb_measure_dim(measure: *const SwembMeasure) -> usize {
    if measure.is_null() {
        return 0;
    }
    unsafe { &*measure }.0.dim()
}

unsafe fn measure_pair<'a>(
    alpha: *const SwembMeasure,
    beta: *const SwembMeasure,
) -> Option<(&'a EmpiricalMeasure, &'a EmpiricalMeasure)> {
    if alpha.is_null() || beta.is_null() {
        return None;
    }
    Some(unsafe { (&(*alpha).0, &(*beta).0) })
}

/// Exact 1-Wasserstein distance between two equal-size measures.
///
/// # Safety
/// Handles must be live; `out_distance` must point to one double.
#[no_mangle]
pub unsafe extern "C" fn swemb_w1(
    alpha: *const SwembMeasure,
    beta: *const SwembMeasure,
    out_distance: *mut f64,
) -> SwembStatus {
    guard(|| {
        let Some((a, b)) = (unsafe { measure_pair(alpha, beta) }) else {
            set_last_error("measure handles must not be NULL");
            return SwembStatus::NullPointer;
        };
        if out_distance.is_null() {
            set_last_error("out_distance must not be NULL");
            return SwembStatus::NullPointer;
        }
        match w1(a, b) {
            Ok((dist, _)) => {
                unsafe { *out_distance = dist };
                SwembStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Exact 1-Wasserstein distance plus one optimal matching, written as k
/// indices into beta.
///
/// # Safety
/// `out_permutation` must be writable for `swemb_measure_size(alpha)`
/// entries; other arguments as in [`swemb_w1`].
#[no_mangle]
pub unsafe extern "C" fn swemb_w1_matching(
    alpha: *const SwembMeasure,
    beta: *const SwembMeasure,
    out_permutation: *mut usize,
    out_distance: *mut f64,
) -> SwembStatus {
    guard(|| {
        let Some((a, b)) = (unsafe { measure_pair(alpha, beta) }) else {
            set_last_error("measure handles must not be NULL");
            return SwembStatus::NullPointer;
        };
        if out_permutation.is_null() || out_distance.is_null() {
            set_last_error("out pointers must not be NULL");
            return SwembStatus::NullPointer;
        }
        match w1(a, b) {
            Ok((dist, matching)) => {
                let slot = unsafe { std::slice::from_raw_parts_mut(out_permutation, a.size()) };
                slot.copy_from_slice(&matching.permutation);
                unsafe { *out_distance = dist };
                SwembStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Seeded Monte-Carlo estimate of the unnormalized sliced 1-Wasserstein
/// distance; identical inputs give identical results on any thread count.
///
/// # Safety
/// Handles must be live; out-pointers must each point to one double
/// (`out_std_error` may be NULL when the error bar is not wanted).
#[no_mangle]
pub unsafe extern "C" fn swemb_sw1_monte_carlo(
    alpha: *const SwembMeasure,
    beta: *const SwembMeasure,
    num_samples: u64,
    seed: u64,
    out_value: *mut f64,
    out_std_error: *mut f64,
) -> SwembStatus {
    guard(|| {
        let Some((a, b)) = (unsafe { measure_pair(alpha, beta) }) else {
            set_last_error("measure handles must not be NULL");
            return SwembStatus::NullPointer;
        };
        if out_value.is_null() {
            set_last_error("out_value must not be NULL");
            return SwembStatus::NullPointer;
        }
        match sw1_monte_carlo(a, b, num_samples, seed) {
            Ok(est) => {
                unsafe { *out_value = est.value };
                if !out_std_error.is_null() {
                    unsafe { *out_std_error = est.std_error };
                }
                SwembStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Exact sliced 1-Wasserstein distance in the plane (n = 2).
///
/// # Safety
/// Handles must be live; `out_value` must point to one double.
#[no_mangle]
pub unsafe extern "C" fn swemb_sw1_exact_2d(
    alpha: *const SwembMeasure,
    beta: *const SwembMeasure,
    out_value: *mut f64,
) -> SwembStatus {
    guard(|| {
        let Some((a, b)) = (unsafe { measure_pair(alpha, beta) }) else {
            set_last_error("measure handles must not be NULL");
            return SwembStatus::NullPointer;
        };
        if out_value.is_null() {
            set_last_error("out_value must not be NULL");
            return SwembStatus::NullPointer;
        }
        match sw1_exact_2d(a, b) {
            Ok(est) => {
                unsafe { *out_value = est.value };
                SwembStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

fn write_dimension_constant(
    n: usize,
    out: *mut f64,
    compute: impl Fn(Dimension) -> Result<f64, Error>,
) -> SwembStatus {
    if out.is_null() {
        set_last_error("out must not be NULL");
        return SwembStatus::NullPointer;
    }
    match Dimension::new(n).and_then(&compute) {
        Ok(value) => {
            unsafe { *out = value };
            SwembStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// kappa(n): the integral of |x_1| over the unit sphere in R^n.
///
/// # Safety
/// `out` must point to one double.
#[no_mangle]
pub unsafe extern "C" fn swemb_kappa(n: usize, out: *mut f64) -> SwembStatus {
    guard(|| write_dimension_constant(n, out, |d| Ok(swemb::kappa(d))))
}

/// Surface area of the unit (n-1)-sphere.
///
/// # Safety
/// `out` must point to one double.
#[no_mangle]
pub unsafe extern "C" fn swemb_sphere_area(n: usize, out: *mut f64) -> SwembStatus {
    guard(|| write_dimension_constant(n, out, |d| Ok(swemb::sphere_area(d))))
}

/// Expected |x_1| under the uniform sphere distribution (n >= 3).
///
/// # Safety
/// `out` must point to one double.
#[no_mangle]
pub unsafe extern "C" fn swemb_cap_expectation(n: usize, out: *mut f64) -> SwembStatus {
    guard(|| write_dimension_constant(n, out, swemb::cap_expectation))
}

/// Builds a finite isometry group from `count` elements acting on R^n.
/// Rotations are passed row-major, `count * n * n` doubles; translations
/// are `count * n` doubles. The element list must contain the identity and
/// be closed under composition and inverse.
///
/// # Safety
/// The buffers must be readable for the stated lengths; `out` must be a
/// valid destination for one pointer. A non-NULL result handle must be
/// released with [`swemb_group_free`].
#[no_mangle]
pub unsafe extern "C" fn swemb_group_new(
    rotations: *const f64,
    translations: *const f64,
    count: usize,
    n: usize,
    out: *mut *mut SwembGroup,
) -> SwembStatus {
    guard(|| {
        if rotations.is_null() || translations.is_null() || out.is_null() {
            set_last_error("rotations, translations and out must not be NULL");
            return SwembStatus::NullPointer;
        }
        if count == 0 || n == 0 {
            set_last_error("count and n must be positive");
            return SwembStatus::InvalidArgument;
        }
        let rot = unsafe { std::slice::from_raw_parts(rotations, count * n * n) };
        let tra = unsafe { std::slice::from_raw_parts(translations, count * n) };
        let mut elements = Vec::with_capacity(count);
        for e in 0..count {
            let matrix: Vec<Vec<f64>> = (0..n)
                .map(|i| rot[e * n * n + i * n..e * n * n + (i + 1) * n].to_vec())
                .collect();
            let translation = tra[e * n..(e + 1) * n].to_vec();
            match AffineIsometry::new(matrix, translation) {
                Ok(iso) => elements.push(iso),
                Err(err) => return fail(&err),
            }
        }
        match FiniteIsometryGroup::new(elements) {
            Ok(group) => {
                unsafe { *out = Box::into_raw(Box::new(SwembGroup(group))) };
                SwembStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a group handle; NULL is ignored.
///
/// # Safety
/// `group` must be NULL or a handle from [`swemb_group_new`] that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn swemb_group_free(group: *mut SwembGroup) {
    if !group.is_null() {
        drop(unsafe { Box::from_raw(group) });
    }
}

/// Group order, or 0 for NULL.
///
/// # Safety
/// `group` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn swemb_group_order(group: *const SwembGroup) -> usize {
    if group.is_null() {
        return 0;
    }
    unsafe { &*group }.0.order()
}

/// Quotient distance min over g of |x - g y| for two points of R^n.
///
/// # Safety
/// `group` must be live; `x` and `y` must be readable for n doubles where n
/// is the group's dimension; `out_distance` must point to one double.
#[no_mangle]
pub unsafe extern "C" fn swemb_quotient_distance(
    group: *const SwembGroup,
    x: *const f64,
    y: *const f64,
    out_distance: *mut f64,
) -> SwembStatus {
    guard(|| {
        if group.is_null() || x.is_null() || y.is_null() || out_distance.is_null() {
            set_last_error("group, x, y and out_distance must not be NULL");
            return SwembStatus::NullPointer;
        }
        let g = unsafe { &(*group).0 };
        let n = g.dim();
        let px = unsafe { std::slice::from_raw_parts(x, n) };
        let py = unsafe { std::slice::from_raw_parts(y, n) };
        match g.quotient_distance(px, py) {
            Ok(dist) => {
                unsafe { *out_distance = dist };
                SwembStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
