//! C interface to hopf-cw.
//!
//! Every function returns an `int32_t` status: `HCW_OK` (0) on success, one of
//! the core error codes (10..=20) on a library error, or a negative code for a
//! misuse of the interface. The message of the last failure on the calling
//! thread is available from `hcw_last_error`.
//!
//! Strings handed out by the library are owned by the caller and must be
//! released with `hcw_string_free`. Fixture handles are released with
//! `hcw_fixture_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hopf_cw::cyclic::HomologyMode;
use hopf_cw::io::suite::{compute_chw, deform_spec, homology};
use hopf_cw::io::{read_spec, run_suite, to_canonical_string, FixtureSpec};
use hopf_cw::Error;

pub const HCW_OK: i32 = 0;
pub const HCW_ERR_NULL: i32 = -1;
pub const HCW_ERR_UTF8: i32 = -2;
pub const HCW_ERR_PANIC: i32 = -3;
pub const HCW_ERR_MODE: i32 = -4;

pub const HCW_MODE_CONNES: i32 = 0;
pub const HCW_MODE_BICOMPLEX: i32 = 1;

/// A validated fixture.
pub struct HcwFixture {
    spec: FixtureSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

enum Fail {
    Lib(Error),
    Code(i32, &'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HCW_OK,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            e.code()
        }
        Ok(Err(Fail::Code(code, msg))) => {
            set_error(msg.to_string());
            code
        }
        Err(_) => {
            set_error("internal panic".to_string());
            HCW_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Code(HCW_ERR_NULL, "null argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Code(HCW_ERR_UTF8, "argument is not UTF-8"))
}

unsafe fn fixture_arg<'a>(p: *const HcwFixture) -> Result<&'a HcwFixture, Fail> {
    p.as_ref().ok_or(Fail::Code(HCW_ERR_NULL, "null fixture"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Code(HCW_ERR_NULL, "null output pointer"));
    }
    *out = value;
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let s = CString::new(s).map_err(|_| Fail::Code(HCW_ERR_UTF8, "output contains NUL"))?;
    put(out, s.into_raw())
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn hcw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hcw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a fixture document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hcw_fixture_from_json(json: *const c_char, out: *mut *mut HcwFixture) -> i32 {
    guard(|| {
        let spec = read_spec(str_arg(json)?)?;
        put(out, Box::into_raw(Box::new(HcwFixture { spec })))
    })
}

/// Reads and validates a fixture file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hcw_fixture_load(path: *const c_char, out: *mut *mut HcwFixture) -> i32 {
    guard(|| {
        let text = std::fs::read_to_string(str_arg(path)?).map_err(Error::from)?;
        let spec = read_spec(&text)?;
        put(out, Box::into_raw(Box::new(HcwFixture { spec })))
    })
}

/// # Safety
/// `fx` must be NULL or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hcw_fixture_free(fx: *mut HcwFixture) {
    if !fx.is_null() {
        drop(Box::from_raw(fx));
    }
}

/// Canonical JSON of the fixture.
///
/// # Safety
/// `fx` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hcw_fixture_to_json(fx: *const HcwFixture, out: *mut *mut c_char) -> i32 {
    guard(|| put_string(out, to_canonical_string(&fixture_arg(fx)?.spec)?))
}

/// Runs a named suite. `passed` is set to 1 when no check failed, else 0;
/// `report` receives the JSON report.
///
/// # Safety
/// `fx` must be a live handle, `suite` a NUL-terminated string, and the
/// output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn hcw_verify(
    fx: *const HcwFixture,
    suite: *const c_char,
    passed: *mut i32,
    report: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let r = run_suite(&fixture_arg(fx)?.spec, str_arg(suite)?)?;
        put(passed, r.passed() as i32)?;
        put_string(report, to_canonical_string(&r)?)
    })
}

/// Chern-Weil cycle for a cotrace selector (a basis label or comma-separated
/// coefficients) in degree `degree`, as JSON.
///
/// # Safety
/// `fx` must be a live handle, `cotrace` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hcw_compute_chw(
    fx: *const HcwFixture,
    cotrace: *const c_char,
    degree: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let c = compute_chw(&fixture_arg(fx)?.spec, str_arg(cotrace)?, degree)?;
        put_string(out, to_canonical_string(&c)?)
    })
}

/// Dimension of the cyclic homology of the coinvariants in degree `degree`.
///
/// # Safety
/// `fx` must be a live handle and `dim` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hcw_homology_dim(
    fx: *const HcwFixture,
    degree: usize,
    mode: i32,
    dim: *mut usize,
) -> i32 {
    guard(|| {
        let mode = match mode {
            HCW_MODE_CONNES => HomologyMode::Connes,
            HCW_MODE_BICOMPLEX => HomologyMode::Bicomplex,
            _ => return Err(Fail::Code(HCW_ERR_MODE, "unknown homology mode")),
        };
        let h = homology(&fixture_arg(fx)?.spec, degree, mode)?;
        put(dim, h.dim)
    })
}

/// Deforms the fixture by one of its named cocycles into a new handle.
///
/// # Safety
/// `fx` must be a live handle, `cocycle` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hcw_deform(
    fx: *const HcwFixture,
    cocycle: *const c_char,
    out: *mut *mut HcwFixture,
) -> i32 {
    guard(|| {
        let spec = deform_spec(&fixture_arg(fx)?.spec, str_arg(cocycle)?)?;
        put(out, Box::into_raw(Box::new(HcwFixture { spec })))
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hcw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
