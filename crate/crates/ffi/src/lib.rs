//! C ABI over the zonotope mixed-volume and deficit engine.
//!
//! Conventions:
//! - Bodies and test functions are opaque handles created by `llbm_*_new`
//!   constructors and released by the matching `llbm_*_free`.
//! - Constructors return null on failure; every other fallible call returns
//!   an [`LlbmStatus`] and writes results through out-pointers only on
//!   [`LlbmStatus::Ok`].
//! - After any failure, `llbm_last_error_message` returns a human-readable
//!   description.  The string is thread-local and stays valid until the next
//!   failing call on the same thread.
//! - Vectors are passed as `f64` arrays with an explicit dimension;
//!   generator lists are row-major `count x dim` arrays.
//!
//! The build script renders this interface to `include/llbm.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use llbm_core::deficit::deficit;
use llbm_core::engine::{mixed_volume, zonotope_volume, MixedVolumeQuery};
use llbm_core::{LlbmError, TestFunction, Vector, Zonotope};

/// Result of a C-ABI call.  `Ok` is zero; everything else is an error and
/// leaves the out-parameters untouched.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlbmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was structurally invalid (bad counts, non-finite data).
    InvalidArgument = 2,
    /// Vector or body dimensions disagree.
    DimensionMismatch = 3,
    /// The body is not full-dimensional where the operation needs it to be.
    DegenerateBody = 4,
    /// The segment is not a structural summand of the body.
    NotASummand = 5,
    /// The operation is not available for these inputs.
    Unsupported = 6,
    /// An internal cross-check or computation failed.
    Internal = 7,
}

/// The deficit quadratic form, split into its three terms:
/// `deficit = term_sq - term_bilinear - term_ratio`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LlbmDeficit {
    /// `V(K[n-1], f)^2 / vol(K)`.
    pub term_sq: f64,
    /// `(n-1)/n * V(K[n-2], f, f)`.
    pub term_bilinear: f64,
    /// `1/n * V(K[n-1], f^2 / h_K)`.
    pub term_ratio: f64,
    /// The difference; nonnegative for even test functions.
    pub deficit: f64,
}

/// Opaque handle to an origin-symmetric zonotope.
pub struct LlbmZonotope(Zonotope);

/// Opaque handle to a test function (a difference of support functions).
pub struct LlbmTestFunction(TestFunction);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    let c = CString::new(sanitized).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn fail(e: LlbmError) -> LlbmStatus {
    set_error(&e.to_string());
    match e {
        LlbmError::DimensionMismatch { .. } => LlbmStatus::DimensionMismatch,
        LlbmError::InvalidInput(_) | LlbmError::Io(_) | LlbmError::Json(_) => {
            LlbmStatus::InvalidArgument
        }
        LlbmError::DegenerateBody(_) => LlbmStatus::DegenerateBody,
        LlbmError::NotASummand(_) => LlbmStatus::NotASummand,
        LlbmError::Unsupported(_) => LlbmStatus::Unsupported,
        LlbmError::OracleUnreliable { .. }
        | LlbmError::SelfCheck(_)
        | LlbmError::Quadrature(_) => LlbmStatus::Internal,
    }
}

fn null_arg(name: &str) -> LlbmStatus {
    set_error(&format!("{name} must not be null"));
    LlbmStatus::NullPointer
}

/// Runs a computation, converting panics into `Internal` instead of
/// unwinding across the C boundary.
fn guarded<T>(f: impl FnOnce() -> Result<T, LlbmError>) -> Result<T, LlbmStatus> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(e)) => Err(fail(e)),
        Err(_) => {
            set_error("internal panic");
            Err(LlbmStatus::Internal)
        }
    }
}

/// Reads a caller-provided vector.
///
/// # Safety
/// `data` must point to `dim` readable `f64`s.
unsafe fn read_vector(data: *const f64, dim: usize) -> Result<Vector, LlbmError> {
    let slice = std::slice::from_raw_parts(data, dim);
    Vector::new(slice.to_vec())
}

/// Message describing the most recent failure on this thread, or an empty
/// string when nothing failed yet.  Valid until the next failing call on
/// the same thread; do not free it.
#[no_mangle]
pub extern "C" fn llbm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds the zonotope with the given generators (a row-major
/// `count x dim` array).  `count` may be zero for the origin.  Returns null
/// on failure; see `llbm_last_error_message`.  Free the handle with
/// `llbm_zonotope_free`.
#[no_mangle]
pub extern "C" fn llbm_zonotope_new(
    dim: usize,
    generators: *const f64,
    count: usize,
) -> *mut LlbmZonotope {
    if generators.is_null() && count > 0 {
        null_arg("generators");
        return std::ptr::null_mut();
    }
    let rows: Vec<Vec<f64>> = (0..count)
        .map(|i| unsafe { std::slice::from_raw_parts(generators.add(i * dim), dim) }.to_vec())
        .collect();
    let built = guarded(|| {
        let gens = rows
            .into_iter()
            .map(Vector::new)
            .collect::<Result<Vec<_>, _>>()?;
        Zonotope::new(dim, gens)
    });
    match built {
        Ok(z) => Box::into_raw(Box::new(LlbmZonotope(z))),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Releases a zonotope handle.  Null is a no-op.
#[no_mangle]
pub extern "C" fn llbm_zonotope_free(z: *mut LlbmZonotope) {
    if !z.is_null() {
        drop(unsafe { Box::from_raw(z) });
    }
}

/// Writes the ambient dimension of the body to `out`.
#[no_mangle]
pub extern "C" fn llbm_zonotope_dim(z: *const LlbmZonotope, out: *mut usize) -> LlbmStatus {
    if z.is_null() {
        return null_arg("z");
    }
    if out.is_null() {
        return null_arg("out");
    }
    unsafe { *out = (*z).0.dim() };
    LlbmStatus::Ok
}

/// Writes the support function of the body at `direction` (a `dim`-vector)
/// to `out`.
#[no_mangle]
pub extern "C" fn llbm_zonotope_support(
    z: *const LlbmZonotope,
    direction: *const f64,
    dim: usize,
    out: *mut f64,
) -> LlbmStatus {
    if z.is_null() {
        return null_arg("z");
    }
    if direction.is_null() {
        return null_arg("direction");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let body = unsafe { &(*z).0 };
    match guarded(|| {
        let u = unsafe { read_vector(direction, dim) }?;
        if u.dim() != body.dim() {
            return Err(LlbmError::DimensionMismatch { expected: body.dim(), got: u.dim() });
        }
        Ok(body.support(&u))
    }) {
        Ok(v) => {
            unsafe { *out = v };
            LlbmStatus::Ok
        }
        Err(status) => status,
    }
}

/// Writes the volume of the body to `out`.
#[no_mangle]
pub extern "C" fn llbm_zonotope_volume(z: *const LlbmZonotope, out: *mut f64) -> LlbmStatus {
    if z.is_null() {
        return null_arg("z");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let body = unsafe { &(*z).0 };
    match guarded(|| Ok(zonotope_volume(body))) {
        Ok(v) => {
            unsafe { *out = v };
            LlbmStatus::Ok
        }
        Err(status) => status,
    }
}

/// Writes the mixed volume of `groups` bodies with multiplicities to `out`.
/// `bodies` and `multiplicities` are parallel arrays of length `groups`;
/// the multiplicities must sum to the common dimension.
#[no_mangle]
pub extern "C" fn llbm_mixed_volume(
    bodies: *const *const LlbmZonotope,
    multiplicities: *const usize,
    groups: usize,
    out: *mut f64,
) -> LlbmStatus {
    if bodies.is_null() {
        return null_arg("bodies");
    }
    if multiplicities.is_null() {
        return null_arg("multiplicities");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let handles = unsafe { std::slice::from_raw_parts(bodies, groups) };
    let counts = unsafe { std::slice::from_raw_parts(multiplicities, groups) };
    if handles.iter().any(|h| h.is_null()) {
        return null_arg("bodies[i]");
    }
    match guarded(|| {
        if groups == 0 {
            return Err(LlbmError::InvalidInput("the body list is empty".into()));
        }
        let dim = unsafe { &(*handles[0]).0 }.dim();
        let grouped = handles
            .iter()
            .zip(counts)
            .map(|(&h, &k)| (unsafe { &(*h).0 }.clone(), k))
            .collect();
        Ok(mixed_volume(&MixedVolumeQuery::from_groups(dim, grouped)?))
    }) {
        Ok(v) => {
            unsafe { *out = v };
            LlbmStatus::Ok
        }
        Err(status) => status,
    }
}

/// Builds the test function `h_P - h_M` from two bodies of equal dimension.
/// Returns null on failure.  Free with `llbm_function_free`.
#[no_mangle]
pub extern "C" fn llbm_function_support_diff(
    plus: *const LlbmZonotope,
    minus: *const LlbmZonotope,
) -> *mut LlbmTestFunction {
    if plus.is_null() {
        null_arg("plus");
        return std::ptr::null_mut();
    }
    if minus.is_null() {
        null_arg("minus");
        return std::ptr::null_mut();
    }
    let (p, m) = unsafe { ((*plus).0.clone(), (*minus).0.clone()) };
    match guarded(|| TestFunction::support_diff(p, m)) {
        Ok(f) => Box::into_raw(Box::new(LlbmTestFunction(f))),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Releases a test-function handle.  Null is a no-op.
#[no_mangle]
pub extern "C" fn llbm_function_free(f: *mut LlbmTestFunction) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Writes the value of the test function at `direction` to `out`.
#[no_mangle]
pub extern "C" fn llbm_function_eval(
    f: *const LlbmTestFunction,
    direction: *const f64,
    dim: usize,
    out: *mut f64,
) -> LlbmStatus {
    if f.is_null() {
        return null_arg("f");
    }
    if direction.is_null() {
        return null_arg("direction");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let func = unsafe { &(*f).0 };
    match guarded(|| {
        let u = unsafe { read_vector(direction, dim) }?;
        if u.dim() != func.dim() {
            return Err(LlbmError::DimensionMismatch { expected: func.dim(), got: u.dim() });
        }
        Ok(func.eval(&u))
    }) {
        Ok(v) => {
            unsafe { *out = v };
            LlbmStatus::Ok
        }
        Err(status) => status,
    }
}

/// Evaluates the deficit quadratic form of a full-dimensional zonotope at
/// an even test function and writes all four numbers to `out`.
#[no_mangle]
pub extern "C" fn llbm_deficit(
    z: *const LlbmZonotope,
    f: *const LlbmTestFunction,
    out: *mut LlbmDeficit,
) -> LlbmStatus {
    if z.is_null() {
        return null_arg("z");
    }
    if f.is_null() {
        return null_arg("f");
    }
    if out.is_null() {
        return null_arg("out");
    }
    let body = unsafe { &(*z).0 };
    let func = unsafe { &(*f).0 };
    match guarded(|| deficit(body, func)) {
        Ok(r) => {
            unsafe {
                *out = LlbmDeficit {
                    term_sq: r.term_sq,
                    term_bilinear: r.term_bilinear,
                    term_ratio: r.term_ratio,
                    deficit: r.deficit,
                };
            }
            LlbmStatus::Ok
        }
        Err(status) => status,
    }
}
