//! C ABI surface for the preimage laboratory.
//!
//! Every entry point returns a status code and writes results through out
//! pointers; heap-allocated results travel as opaque handles or as
//! NUL-terminated UTF-8 JSON strings that the caller releases with the
//! matching `plab_*_free` function. Panics never cross the boundary: they
//! are caught and reported as `PLAB_INTERNAL_ERROR`, with the message
//! retrievable through [`plab_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use preimage_lab::dynamics::{corollary_count, dm_search, iterated_preimages, kappa, PreimageTree};
use preimage_lab::descent::{cd_search, DValue};
use preimage_lab::elliptic::{curve_e, ec_mul, q0, x_minus_t};
use preimage_lab::exact_arith::ExactRational;
use preimage_lab::report::{run_checks, ReportConfig};
use preimage_lab::Error;

/// Success.
pub const PLAB_OK: c_int = 0;
/// A pointer was null, a string was not UTF-8, or a literal did not parse.
pub const PLAB_INVALID_ARGUMENT: c_int = 1;
/// The input lay outside the mathematical domain of the operation.
pub const PLAB_DOMAIN_ERROR: c_int = 2;
/// A fourth-power-free classification invariant failed.
pub const PLAB_CLASSIFICATION_ERROR: c_int = 3;
/// An internal invariant failed; details via [`plab_last_error`].
pub const PLAB_INTERNAL_ERROR: c_int = 4;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let cstring = CString::new(msg.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_of(err: &Error) -> c_int {
    match err {
        Error::Domain(_) | Error::UnsupportedInput(_) => PLAB_DOMAIN_ERROR,
        Error::ClassificationViolation(_) => PLAB_CLASSIFICATION_ERROR,
    }
}

/// Runs `f` with panics converted to `PLAB_INTERNAL_ERROR`.
fn guarded<F: FnOnce() -> c_int>(f: F) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic with non-string payload".to_string());
            set_last_error(msg);
            PLAB_INTERNAL_ERROR
        }
    }
}

/// # Safety
/// `ptr` must be null or a pointer to a NUL-terminated string.
unsafe fn parse_rational_arg(ptr: *const c_char) -> Result<ExactRational, c_int> {
    if ptr.is_null() {
        set_last_error("rational argument is null".to_string());
        return Err(PLAB_INVALID_ARGUMENT);
    }
    let text = match CStr::from_ptr(ptr).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_last_error("rational argument is not UTF-8".to_string());
            return Err(PLAB_INVALID_ARGUMENT);
        }
    };
    text.parse::<ExactRational>().map_err(|e| {
        set_last_error(e.to_string());
        PLAB_INVALID_ARGUMENT
    })
}

fn write_out<T>(out: *mut T, value: T) -> c_int {
    if out.is_null() {
        set_last_error("out pointer is null".to_string());
        return PLAB_INVALID_ARGUMENT;
    }
    unsafe { out.write(value) };
    PLAB_OK
}

fn write_string(out: *mut *mut c_char, text: String) -> c_int {
    let cstring = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_last_error("result contained an interior NUL".to_string());
            return PLAB_INTERNAL_ERROR;
        }
    };
    write_out(out, cstring.into_raw())
}

fn write_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> c_int {
    match serde_json::to_string(value) {
        Ok(json) => write_string(out, json),
        Err(e) => {
            set_last_error(e.to_string());
            PLAB_INTERNAL_ERROR
        }
    }
}

/// Opaque handle to an iterated-preimage expansion.
pub struct PlabTree {
    inner: PreimageTree,
}

/// Returns the most recent error message on this thread as a fresh string,
/// or null when none is stored. The caller frees it with
/// [`plab_string_free`]; the stored message is cleared.
#[no_mangle]
pub extern "C" fn plab_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow_mut().take() {
        Some(msg) => msg.into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `ptr` must be null or a string obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn plab_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

/// Computes the sharp preimage-count bound for degree `d` maps.
#[no_mangle]
pub extern "C" fn plab_kappa(d: u32, out: *mut u32) -> c_int {
    guarded(|| match kappa(d) {
        Ok(value) => write_out(out, value),
        Err(e) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
    })
}

/// Counts the rational second preimages of 0 under x ↦ x^d + c for d ≥ 3.
///
/// # Safety
/// `c` must be null or a NUL-terminated string; `out` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn plab_corollary_count(d: u32, c: *const c_char, out: *mut u32) -> c_int {
    guarded(|| {
        let c = match parse_rational_arg(c) {
            Ok(v) => v,
            Err(code) => return code,
        };
        match corollary_count(d, &c) {
            Ok(value) => write_out(out, value),
            Err(e) => {
                set_last_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Expands the rational iterated preimages of 0 under x ↦ x^d + c into an
/// opaque tree handle. Requires 2 ≤ d ≤ 64 and 1 ≤ depth_limit ≤ 64.
///
/// # Safety
/// `c` must be null or a NUL-terminated string; `out` a valid out pointer.
#[no_mangle]
pub unsafe extern "C" fn plab_preimages(
    d: u32,
    c: *const c_char,
    depth_limit: u32,
    out: *mut *mut PlabTree,
) -> c_int {
    guarded(|| {
        if !(2..=64).contains(&d) || !(1..=64).contains(&depth_limit) {
            set_last_error(format!(
                "degree must lie in 2..=64 and depth limit in 1..=64; got d = {d}, depth = {depth_limit}"
            ));
            return PLAB_DOMAIN_ERROR;
        }
        let c = match parse_rational_arg(c) {
            Ok(v) => v,
            Err(code) => return code,
        };
        let tree = iterated_preimages(d, &c, &ExactRational::zero(), depth_limit);
        let handle = Box::into_raw(Box::new(PlabTree { inner: tree }));
        write_out(out, handle)
    })
}

/// Releases a tree handle. Null is ignored.
///
/// # Safety
/// `tree` must be null or an unfreed handle from [`plab_preimages`].
#[no_mangle]
pub unsafe extern "C" fn plab_tree_free(tree: *mut PlabTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Writes 1 when the expansion was cut by the depth limit, 0 otherwise.
///
/// # Safety
/// `tree` must be a live handle from [`plab_preimages`].
#[no_mangle]
pub unsafe extern "C" fn plab_tree_truncated(tree: *const PlabTree, out: *mut c_int) -> c_int {
    guarded(|| {
        let Some(tree) = tree.as_ref() else {
            set_last_error("tree handle is null".to_string());
            return PLAB_INVALID_ARGUMENT;
        };
        write_out(out, c_int::from(tree.inner.truncated))
    })
}

/// Writes the number of distinct preimage values found (the root excluded).
///
/// # Safety
/// `tree` must be a live handle from [`plab_preimages`].
#[no_mangle]
pub unsafe extern "C" fn plab_tree_union_len(tree: *const PlabTree, out: *mut usize) -> c_int {
    guarded(|| {
        let Some(tree) = tree.as_ref() else {
            set_last_error("tree handle is null".to_string());
            return PLAB_INVALID_ARGUMENT;
        };
        write_out(out, tree.inner.union.len())
    })
}

/// Writes the `idx`-th union value (sorted ascending) as a rational string.
///
/// # Safety
/// `tree` must be a live handle from [`plab_preimages`]; `out` a valid out
/// pointer. The string is freed with [`plab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn plab_tree_union_value(
    tree: *const PlabTree,
    idx: usize,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let Some(tree) = tree.as_ref() else {
            set_last_error("tree handle is null".to_string());
            return PLAB_INVALID_ARGUMENT;
        };
        match tree.inner.union.get(idx) {
            Some(value) => write_string(out, value.to_string()),
            None => {
                set_last_error(format!(
                    "index {idx} out of range for union of size {}",
                    tree.inner.union.len()
                ));
                PLAB_INVALID_ARGUMENT
            }
        }
    })
}

/// Serializes the whole tree as JSON.
///
/// # Safety
/// `tree` must be a live handle from [`plab_preimages`]; `out` a valid out
/// pointer. The string is freed with [`plab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn plab_tree_to_json(tree: *const PlabTree, out: *mut *mut c_char) -> c_int {
    guarded(|| {
        let Some(tree) = tree.as_ref() else {
            set_last_error("tree handle is null".to_string());
            return PLAB_INVALID_ARGUMENT;
        };
        write_json(out, &tree.inner)
    })
}

/// Searches D²y⁴ = x³ − x + 1 for rational points up to a height bound and
/// writes them as a JSON array of {"x", "y"} records. `twist` must be one of
/// ±1, ±2, ±23, ±46 and the bound at most 10⁶.
///
/// # Safety
/// `out` must be a valid out pointer. The string is freed with
/// [`plab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn plab_cd_points_json(
    twist: i64,
    height_bound: u32,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        let d = match DValue::from_value(twist) {
            Ok(d) => d,
            Err(e) => {
                set_last_error(e.to_string());
                return status_of(&e);
            }
        };
        if !(1..=1_000_000).contains(&height_bound) {
            set_last_error(format!(
                "height bound must lie in 1..=1000000, got {height_bound}"
            ));
            return PLAB_DOMAIN_ERROR;
        }
        let points: Vec<serde_json::Value> = cd_search(d, height_bound)
            .into_iter()
            .map(|(x, y)| serde_json::json!({ "x": x, "y": y }))
            .collect();
        write_json(out, &points)
    })
}

/// Writes the square-class label of u − t at the n-th multiple of the curve
/// generator: "trivial", "minus_theta", or "other". Requires |n| ≤ 128.
///
/// # Safety
/// `out` must be a valid out pointer. The string is freed with
/// [`plab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn plab_xt_class(n: i64, out: *mut *mut c_char) -> c_int {
    guarded(|| {
        if n.abs() > 128 {
            set_last_error(format!("multiple must lie in -128..=128, got {n}"));
            return PLAB_DOMAIN_ERROR;
        }
        let point = ec_mul(&curve_e(), n, &q0());
        match x_minus_t(&point) {
            Ok(class) => write_string(out, class.canonical_tag.as_str().to_string()),
            Err(e) => {
                set_last_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Scans x^n + y^n = z² for primitive solutions with |x|, |y| ≤ bound and
/// writes them as JSON. Requires n ≥ 4 and 2·bound^n < 2¹²⁷.
///
/// # Safety
/// `out` must be a valid out pointer. The string is freed with
/// [`plab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn plab_dm_search_json(n: u32, bound: u32, out: *mut *mut c_char) -> c_int {
    guarded(|| {
        let fits = n >= 4
            && (bound.max(1) as u128)
                .checked_pow(n)
                .and_then(|v| v.checked_mul(2))
                .is_some_and(|v| v <= i128::MAX as u128);
        if !fits {
            set_last_error(format!(
                "exponent must be at least 4 and 2*bound^n must fit in 127 bits; got n = {n}, bound = {bound}"
            ));
            return PLAB_DOMAIN_ERROR;
        }
        write_json(out, &dm_search(n, bound))
    })
}

/// Runs the verification suite and writes the JSON report. Writes 1 to
/// `out_all_pass` when every check passed, 0 otherwise. A zero
/// `cd_height_bound` selects the default search bound.
///
/// # Safety
/// `out_json` must be a valid out pointer and `out_all_pass` null or valid.
/// The string is freed with [`plab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn plab_verify(
    cd_height_bound: u32,
    out_json: *mut *mut c_char,
    out_all_pass: *mut c_int,
) -> c_int {
    guarded(|| {
        let mut cfg = ReportConfig::default();
        if cd_height_bound > 0 {
            if cd_height_bound > 1_000_000 {
                set_last_error(format!(
                    "height bound must lie in 1..=1000000, got {cd_height_bound}"
                ));
                return PLAB_DOMAIN_ERROR;
            }
            cfg.cd_height_bound = cd_height_bound;
        }
        let report = run_checks(&cfg, None);
        if !out_all_pass.is_null() {
            out_all_pass.write(c_int::from(report.all_pass()));
        }
        write_json(out_json, &report)
    })
}
