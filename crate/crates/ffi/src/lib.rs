//! C ABI for the affsurf library.
//!
//! Connections are held behind opaque handles. Every fallible call returns
//! an integer status code (see `affsurf.h`); on failure a human-readable
//! message is available from `affsurf_last_error` until the next call on
//! the same thread. Strings returned through out-parameters are owned by
//! the caller and must be released with `affsurf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use num_rational::BigRational;

use affsurf::catalog::{self, Theorem};
use affsurf::classify::classify;
use affsurf::connection::Connection;
use affsurf::connfile::{constant_of, parse_connection, serialize_connection};
use affsurf::expr::parse_expr;
use affsurf::report;
use affsurf::Error;

pub const AFFSURF_OK: c_int = 0;
pub const AFFSURF_ERR_INTERNAL: c_int = 1;
pub const AFFSURF_ERR_PARSE: c_int = 2;
pub const AFFSURF_ERR_TORSION_FREE: c_int = 3;
pub const AFFSURF_ERR_NOT_SYMMETRIC: c_int = 4;
pub const AFFSURF_ERR_NOT_HOMOGENEOUS: c_int = 5;
pub const AFFSURF_ERR_RADICAL: c_int = 6;
pub const AFFSURF_ERR_NULL_ARGUMENT: c_int = 7;

/// Opaque connection handle.
pub struct AffsurfConn {
    inner: Connection,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn fail(err: Error) -> c_int {
    set_error(&err.to_string());
    err.exit_code() as c_int
}

fn null_arg() -> c_int {
    set_error("null pointer argument");
    AFFSURF_ERR_NULL_ARGUMENT
}

unsafe fn read_str<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    CStr::from_ptr(p).to_str().ok()
}

fn emit(out: *mut *mut c_char, s: String) -> c_int {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL byte");
            return AFFSURF_ERR_INTERNAL;
        }
    };
    unsafe { *out = c.into_raw() };
    set_error("");
    AFFSURF_OK
}

/// Parse a connection file held in `src` (NUL-terminated UTF-8) and store
/// a new handle in `*out`.
///
/// # Safety
/// `src` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn affsurf_parse(
    src: *const c_char,
    out: *mut *mut AffsurfConn,
) -> c_int {
    if out.is_null() {
        return null_arg();
    }
    let Some(text) = read_str(src) else {
        return null_arg();
    };
    match parse_connection(text) {
        Ok((conn, _)) => {
            *out = Box::into_raw(Box::new(AffsurfConn { inner: conn }));
            set_error("");
            AFFSURF_OK
        }
        Err(e) => fail(e),
    }
}

/// Release a handle returned by `affsurf_parse`. Accepts NULL.
///
/// # Safety
/// `conn` must be NULL or a pointer from `affsurf_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn affsurf_free(conn: *mut AffsurfConn) {
    if !conn.is_null() {
        drop(Box::from_raw(conn));
    }
}

/// Compute the tensor report as a JSON string.
///
/// # Safety
/// `conn` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn affsurf_tensors_json(
    conn: *const AffsurfConn,
    out: *mut *mut c_char,
) -> c_int {
    if conn.is_null() || out.is_null() {
        return null_arg();
    }
    match report::tensors_json(&(*conn).inner) {
        Ok(v) => emit(out, v.to_string()),
        Err(e) => fail(e),
    }
}

/// Classify the connection and return the result as a JSON string.
///
/// # Safety
/// `conn` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn affsurf_classify_json(
    conn: *const AffsurfConn,
    out: *mut *mut c_char,
) -> c_int {
    if conn.is_null() || out.is_null() {
        return null_arg();
    }
    let c = &(*conn).inner;
    match classify(c) {
        Ok(r) => emit(out, report::classification_json(c, &r).to_string()),
        Err(e) => fail(e),
    }
}

/// Run the verification suite and return its report as a JSON string.
/// Returns `AFFSURF_OK` even when checks fail; inspect the `status` field.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn affsurf_verify_paper_json(out: *mut *mut c_char) -> c_int {
    if out.is_null() {
        return null_arg();
    }
    let rep = catalog::verify_paper();
    emit(out, report::verify_paper_json(&rep).to_string())
}

fn parse_bindings(spec: &str) -> Result<Vec<(String, BigRational)>, Error> {
    let mut out = Vec::new();
    for piece in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let (name, value) = piece.split_once('=').ok_or_else(|| Error::Syntax {
            line: 0,
            col: 0,
            msg: format!("expected name=value, got `{}`", piece),
        })?;
        let e = parse_expr(value.trim())?;
        let q = constant_of(&e).ok_or_else(|| Error::Syntax {
            line: 0,
            col: 0,
            msg: format!("`{}` is not a rational constant", value),
        })?;
        out.push((name.trim().to_string(), q));
    }
    Ok(out)
}

/// Serialize a catalog family as a connection file. `theorem` names the
/// theorem (for example "Thm4"), `family` its number, and `params` is an
/// optional comma-separated list of `name=value` bindings (may be NULL).
///
/// # Safety
/// `theorem` must be a valid NUL-terminated string, `params` NULL or one,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn affsurf_catalog_file(
    theorem: *const c_char,
    family: c_int,
    params: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    if out.is_null() {
        return null_arg();
    }
    let Some(thm_name) = read_str(theorem) else {
        return null_arg();
    };
    let bindings_src = if params.is_null() {
        ""
    } else {
        match read_str(params) {
            Some(s) => s,
            None => return null_arg(),
        }
    };
    let Some(thm) = Theorem::parse(thm_name) else {
        set_error(&format!("unknown theorem `{}`", thm_name));
        return AFFSURF_ERR_PARSE;
    };
    if family < 0 {
        set_error("family number must be nonnegative");
        return AFFSURF_ERR_PARSE;
    }
    let Some(spec) = catalog::find(thm, family as usize) else {
        set_error(&format!("no family {} in {}", family, thm.name()));
        return AFFSURF_ERR_PARSE;
    };
    let bindings = match parse_bindings(bindings_src) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    match catalog::make(spec, &bindings) {
        Ok(conn) => emit(out, serialize_connection(&conn)),
        Err(e) => fail(e),
    }
}

/// Message describing the most recent failure on this thread, or an empty
/// string after a success. The pointer stays valid until the next library
/// call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn affsurf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned through an out-parameter. Accepts NULL.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn affsurf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// Keep the libc dependency exercised so the staticlib links the same
// allocator shims on every platform we target.
#[allow(dead_code)]
fn _link_libc() -> *mut libc::c_void {
    ptr::null_mut()
}
