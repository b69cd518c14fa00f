//! C ABI over the cayley-tower library.
//!
//! Conventions:
//! - every fallible call returns a `CtStatus`; `ct_last_error_message`
//!   describes the most recent failure on the calling thread;
//! - strings returned through out-parameters are NUL-terminated, owned by
//!   the library, and must be released with `ct_string_free`;
//! - `CtGroup` is an opaque handle released with `ct_group_free`;
//! - all functions are panic-safe (a caught panic reports CT_INTERNAL).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cayley_tower::error::Error;
use cayley_tower::groups::FiniteGroup;
use cayley_tower::job;

/// Status codes mirroring the CLI exit contract.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    /// A requested identity check failed.
    CheckFailed = 1,
    /// Malformed descriptor, configuration or argument.
    ConfigError = 2,
    /// Refused input outside the supported domain (e.g. ramified prime).
    Unsupported = 3,
    /// Library bug or caught panic.
    Internal = 4,
    /// A required pointer argument was NULL.
    NullPointer = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn status_of(e: &Error) -> CtStatus {
    match e.exit_code() {
        2 => CtStatus::ConfigError,
        3 => CtStatus::Unsupported,
        _ => CtStatus::CheckFailed,
    }
}

/// Message describing the most recent error on this thread. The pointer is
/// valid until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn ct_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a `ct_*` function and not freed already.
#[no_mangle]
pub unsafe extern "C" fn ct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Opaque group handle.
pub struct CtGroup {
    inner: FiniteGroup,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, CtStatus> {
    if ptr.is_null() {
        set_error("NULL pointer argument");
        return Err(CtStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        CtStatus::ConfigError
    })
}

fn guarded<F: FnOnce() -> CtStatus>(f: F) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            CtStatus::Internal
        }
    }
}

fn return_string(out: *mut *mut c_char, text: String) -> CtStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL");
            return CtStatus::Internal;
        }
    };
    unsafe {
        *out = c.into_raw();
    }
    CtStatus::Ok
}

/// Builds a group from a descriptor such as "cyclic:5", "heisenberg:3",
/// "gl2:4" or "product(cyclic:3,symmetric:3)".
///
/// # Safety
/// `descriptor` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_group_new(
    descriptor: *const c_char,
    out: *mut *mut CtGroup,
) -> CtStatus {
    guarded(|| {
        if out.is_null() {
            set_error("NULL out pointer");
            return CtStatus::NullPointer;
        }
        let descriptor = match read_str(descriptor) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match cayley_tower::groups::build_group(descriptor) {
            Ok(group) => {
                *out = Box::into_raw(Box::new(CtGroup { inner: group }));
                CtStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `group` must come from `ct_group_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ct_group_free(group: *mut CtGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` must be a live handle from `ct_group_new`.
#[no_mangle]
pub unsafe extern "C" fn ct_group_order(group: *const CtGroup) -> usize {
    if group.is_null() {
        return 0;
    }
    (*group).inner.order()
}

/// # Safety
/// `group` must be a live handle from `ct_group_new`.
#[no_mangle]
pub unsafe extern "C" fn ct_group_exponent(group: *const CtGroup) -> u64 {
    if group.is_null() {
        return 0;
    }
    (*group).inner.conjugacy().exponent
}

/// # Safety
/// `group` must be a live handle from `ct_group_new`.
#[no_mangle]
pub unsafe extern "C" fn ct_group_class_count(group: *const CtGroup) -> usize {
    if group.is_null() {
        return 0;
    }
    (*group).inner.conjugacy().class_count()
}

/// Exact character table as JSON.
///
/// # Safety
/// `group` must be NUL-terminated; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_chartab_json(
    group: *const c_char,
    out_json: *mut *mut c_char,
) -> CtStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("NULL out pointer");
            return CtStatus::NullPointer;
        }
        let group = match read_str(group) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match job::run_chartab(group) {
            Ok(report) => {
                return_string(out_json, serde_json_string(&report))
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

fn serde_json_string<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

/// Full tower report as JSON. The configuration uses the same key = value
/// format as the CLI: group, gens, beta, ell, levels, precision, checks.
///
/// # Safety
/// `config_text` must be NUL-terminated; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_tower_report_json(
    config_text: *const c_char,
    out_json: *mut *mut c_char,
) -> CtStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("NULL out pointer");
            return CtStatus::NullPointer;
        }
        let text = match read_str(config_text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let block: Vec<(usize, &str)> =
            text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        let config = match job::parse_config_block(&block) {
            Ok(c) => c,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        let resolved = match job::resolve(&config) {
            Ok(r) => r,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        let report = job::run_tower(&resolved);
        return_string(out_json, serde_json_string(&report))
    })
}

/// Runs the checks selected in the configuration and maps the verify exit
/// contract onto the returned status: Ok, CheckFailed or Unsupported.
///
/// # Safety
/// `config_text` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ct_verify(config_text: *const c_char) -> CtStatus {
    guarded(|| {
        let text = match read_str(config_text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let block: Vec<(usize, &str)> =
            text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        let config = match job::parse_config_block(&block) {
            Ok(c) => c,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        let resolved = match job::resolve(&config) {
            Ok(r) => r,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        let report = job::run_tower(&resolved);
        match job::verify_exit_code(&report) {
            0 => CtStatus::Ok,
            3 => {
                set_error("a selected check was skipped as unsupported");
                CtStatus::Unsupported
            }
            _ => {
                set_error("a selected check failed");
                CtStatus::CheckFailed
            }
        }
    })
}

/// Runs a whole manifest (blank-line-separated key = value blocks) and
/// returns the CSV summary.
///
/// # Safety
/// `manifest_text` must be NUL-terminated; `out_csv` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ct_batch_csv(
    manifest_text: *const c_char,
    out_csv: *mut *mut c_char,
) -> CtStatus {
    guarded(|| {
        if out_csv.is_null() {
            set_error("NULL out pointer");
            return CtStatus::NullPointer;
        }
        let text = match read_str(manifest_text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let jobs = match job::parse_manifest(text) {
            Ok(j) => j,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        return_string(out_csv, job::run_batch(&jobs))
    })
}
