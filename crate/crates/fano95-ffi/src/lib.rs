//! C ABI over the catalog and verifier.
//!
//! Handles are opaque pointers owned by Rust; every returned string is
//! allocated by Rust and must be released with [`f95_string_free`]. All
//! functions are safe to call from any thread; the last-error message is
//! thread local.

use fano95::catalog::{enumerate_families, Catalog, CatalogError};
use fano95::fm::{fm_feasibility, parse_system, FeasibilityResult};
use fano95::golden::golden_system;
use fano95::ledger::verify_all;
use libc::c_char;
use std::cell::RefCell;
use std::ffi::{CStr, CString};

/// Status codes returned by the fallible entry points.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum F95Status {
    Ok = 0,
    /// Claim verification found a hard mismatch.
    VerifyMismatch = 1,
    /// Bad argument: null pointer, unknown id, out-of-range ordinal,
    /// malformed text, or a bound below the supported minimum.
    InvalidArgument = 2,
    /// The enumeration did not produce the expected 95 families.
    CountMismatch = 3,
    Internal = 4,
}

/// Opaque catalog handle.
pub struct F95Catalog {
    inner: Catalog,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let cleaned: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(cleaned).unwrap());
}

fn into_c_string(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => {
            set_error("string contained an interior NUL");
            std::ptr::null_mut()
        }
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn f95_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the catalog by enumerating weight systems up to `max_weight`
/// (at least 40; 100 is the standard bound). On success writes a handle to
/// `out`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn f95_catalog_new(max_weight: u32, out: *mut *mut F95Catalog) -> F95Status {
    if out.is_null() {
        set_error("out pointer is null");
        return F95Status::InvalidArgument;
    }
    match enumerate_families(max_weight) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(F95Catalog { inner }));
            F95Status::Ok
        }
        Err(e @ CatalogError::BoundTooSmall(_)) => {
            set_error(&e.to_string());
            F95Status::InvalidArgument
        }
        Err(e @ CatalogError::CountMismatch { .. }) => {
            set_error(&e.to_string());
            F95Status::CountMismatch
        }
        Err(e) => {
            set_error(&e.to_string());
            F95Status::Internal
        }
    }
}

/// Releases a catalog handle. A null handle is ignored.
///
/// # Safety
/// `cat` must be a pointer returned by [`f95_catalog_new`] that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn f95_catalog_free(cat: *mut F95Catalog) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Number of families in the catalog, or 0 on a null handle.
///
/// # Safety
/// `cat` must be a live handle from [`f95_catalog_new`] or null.
#[no_mangle]
pub unsafe extern "C" fn f95_catalog_len(cat: *const F95Catalog) -> u32 {
    if cat.is_null() {
        return 0;
    }
    (*cat).inner.len() as u32
}

/// The whole catalog as JSON. Free with [`f95_string_free`].
///
/// # Safety
/// `cat` must be a live handle from [`f95_catalog_new`].
#[no_mangle]
pub unsafe extern "C" fn f95_catalog_json(cat: *const F95Catalog) -> *mut c_char {
    if cat.is_null() {
        set_error("catalog handle is null");
        return std::ptr::null_mut();
    }
    into_c_string((*cat).inner.to_json())
}

/// The whole catalog as CSV. Free with [`f95_string_free`].
///
/// # Safety
/// `cat` must be a live handle from [`f95_catalog_new`].
#[no_mangle]
pub unsafe extern "C" fn f95_catalog_csv(cat: *const F95Catalog) -> *mut c_char {
    if cat.is_null() {
        set_error("catalog handle is null");
        return std::ptr::null_mut();
    }
    into_c_string((*cat).inner.to_csv())
}

/// One family as JSON, by 1-based ordinal. Null on a bad ordinal. Free with
/// [`f95_string_free`].
///
/// # Safety
/// `cat` must be a live handle from [`f95_catalog_new`].
#[no_mangle]
pub unsafe extern "C" fn f95_family_json(cat: *const F95Catalog, gimel: u32) -> *mut c_char {
    if cat.is_null() {
        set_error("catalog handle is null");
        return std::ptr::null_mut();
    }
    match (*cat).inner.family_json(gimel) {
        Ok(row) => into_c_string(row),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Runs every ledger claim and golden system. Returns `Ok` when nothing
/// hard-mismatches, `VerifyMismatch` otherwise. When `out_report` is
/// non-null it receives the JSON report (free with [`f95_string_free`]).
///
/// # Safety
/// `cat` must be a live handle; `out_report` must be null or valid for one
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn f95_ledger_verify(
    cat: *const F95Catalog,
    out_report: *mut *mut c_char,
) -> F95Status {
    if cat.is_null() {
        set_error("catalog handle is null");
        return F95Status::InvalidArgument;
    }
    let report = verify_all(&(*cat).inner);
    if !out_report.is_null() {
        *out_report = into_c_string(report.to_json());
    }
    if report.passed() {
        F95Status::Ok
    } else {
        set_error("ledger verification found a mismatch");
        F95Status::VerifyMismatch
    }
}

fn lp_check(system: fano95::fm::LinearSystem, out_infeasible: *mut i32) -> F95Status {
    let verdict = match fm_feasibility(&system) {
        FeasibilityResult::Infeasible { .. } => 1,
        FeasibilityResult::Feasible { .. } => 0,
    };
    if !out_infeasible.is_null() {
        unsafe { *out_infeasible = verdict };
    }
    F95Status::Ok
}

/// Decides a registered golden system by id (such as `SYS-23`). Writes 1 to
/// `out_infeasible` when the system is infeasible, 0 when satisfiable.
///
/// # Safety
/// `id` must be a valid NUL-terminated string; `out_infeasible` must be null
/// or valid for one `int` write.
#[no_mangle]
pub unsafe extern "C" fn f95_lp_check_id(id: *const c_char, out_infeasible: *mut i32) -> F95Status {
    if id.is_null() {
        set_error("id is null");
        return F95Status::InvalidArgument;
    }
    let Ok(id) = CStr::from_ptr(id).to_str() else {
        set_error("id is not valid UTF-8");
        return F95Status::InvalidArgument;
    };
    match golden_system(id) {
        Ok(sys) => lp_check(sys, out_infeasible),
        Err(e) => {
            set_error(&e.to_string());
            F95Status::InvalidArgument
        }
    }
}

/// Decides an ad-hoc system in the one-constraint-per-line text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out_infeasible` must be
/// null or valid for one `int` write.
#[no_mangle]
pub unsafe extern "C" fn f95_lp_check_text(
    text: *const c_char,
    out_infeasible: *mut i32,
) -> F95Status {
    if text.is_null() {
        set_error("text is null");
        return F95Status::InvalidArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("text is not valid UTF-8");
        return F95Status::InvalidArgument;
    };
    match parse_system(text) {
        Ok(sys) => lp_check(sys, out_infeasible),
        Err(e) => {
            set_error(&e.to_string());
            F95Status::InvalidArgument
        }
    }
}

/// Releases a string produced by this library. A null pointer is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned by one of the `f95_*` string
/// functions, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn f95_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn grab(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        f95_string_free(p);
        s
    }

    #[test]
    fn catalog_lifecycle_and_exports() {
        unsafe {
            let mut cat: *mut F95Catalog = std::ptr::null_mut();
            assert_eq!(f95_catalog_new(100, &mut cat), F95Status::Ok);
            assert_eq!(f95_catalog_len(cat), 95);

            let json = grab(f95_catalog_json(cat));
            assert!(json.contains("\"gimel\": 95"));
            let csv = grab(f95_catalog_csv(cat));
            assert_eq!(csv.lines().count(), 96);

            let fam = grab(f95_family_json(cat, 58));
            assert!(fam.contains("\"weights\""));
            assert!(fam.contains("10"));

            assert!(f95_family_json(cat, 0).is_null());
            let err = CStr::from_ptr(f95_last_error()).to_str().unwrap();
            assert!(err.contains("out of range"));

            f95_catalog_free(cat);
        }
    }

    #[test]
    fn bad_bound_is_an_invalid_argument() {
        unsafe {
            let mut cat: *mut F95Catalog = std::ptr::null_mut();
            assert_eq!(f95_catalog_new(10, &mut cat), F95Status::InvalidArgument);
            assert!(cat.is_null());
        }
    }

    #[test]
    fn ledger_passes_over_the_standard_catalog() {
        unsafe {
            let mut cat: *mut F95Catalog = std::ptr::null_mut();
            assert_eq!(f95_catalog_new(100, &mut cat), F95Status::Ok);
            let mut report: *mut c_char = std::ptr::null_mut();
            assert_eq!(f95_ledger_verify(cat, &mut report), F95Status::Ok);
            let text = grab(report);
            assert!(text.contains("\"overall\""));
            f95_catalog_free(cat);
        }
    }

    #[test]
    fn lp_entry_points() {
        unsafe {
            let id = CString::new("SYS-23").unwrap();
            let mut verdict = -1;
            assert_eq!(f95_lp_check_id(id.as_ptr(), &mut verdict), F95Status::Ok);
            assert_eq!(verdict, 1);

            let id = CString::new("SYS-12").unwrap();
            assert_eq!(f95_lp_check_id(id.as_ptr(), &mut verdict), F95Status::Ok);
            assert_eq!(verdict, 0);

            let id = CString::new("SYS-404").unwrap();
            assert_eq!(
                f95_lp_check_id(id.as_ptr(), &mut verdict),
                F95Status::InvalidArgument
            );

            let text = CString::new("x > 1\nx < 0\n").unwrap();
            assert_eq!(
                f95_lp_check_text(text.as_ptr(), &mut verdict),
                F95Status::Ok
            );
            assert_eq!(verdict, 1);

            let text = CString::new("x !! 1\n").unwrap();
            assert_eq!(
                f95_lp_check_text(text.as_ptr(), &mut verdict),
                F95Status::InvalidArgument
            );
        }
    }

    #[test]
    fn null_handling() {
        unsafe {
            assert_eq!(f95_catalog_len(std::ptr::null()), 0);
            assert!(f95_catalog_json(std::ptr::null()).is_null());
            assert_eq!(
                f95_ledger_verify(std::ptr::null(), std::ptr::null_mut()),
                F95Status::InvalidArgument
            );
            f95_catalog_free(std::ptr::null_mut());
            f95_string_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn generated_header_declares_the_surface() {
        let header =
            std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fano95.h"))
                .expect("header generated at build time");
        for symbol in [
            "f95_catalog_new",
            "f95_catalog_free",
            "f95_catalog_len",
            "f95_family_json",
            "f95_ledger_verify",
            "f95_lp_check_id",
            "f95_lp_check_text",
            "f95_string_free",
            "f95_last_error",
            "F95Status",
            "F95Catalog",
        ] {
            assert!(header.contains(symbol), "header lacks {symbol}");
        }
    }
}
