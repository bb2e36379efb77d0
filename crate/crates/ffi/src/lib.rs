//! C interface to twistcalc.
//!
//! Documents are parsed once into an opaque [`TcDocument`] and queried with
//! command names as the CLI spells them (`"check"`, `"surface slit"`, ...).
//! Every function returns a [`TcStatus`]; on failure a message is kept per
//! thread and can be fetched with [`tc_last_error`]. Strings handed out by the
//! library must be released with [`tc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use twistcalc::dsl::{self, Command, Document, Options};
use twistcalc::strata::{stratum_dimension, Signature};
use twistcalc::weierstrass::{chain_is_limit_weierstrass, ChainInput};

/// Result codes. `TC_STATUS_OK` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnknownCommand = 4,
    CommandFailed = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// A parsed document.
pub struct TcDocument {
    doc: Document,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: TcStatus, msg: impl Into<String>) -> TcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> TcStatus) -> TcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(TcStatus::Panic, "internal panic"))
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, TcStatus> {
    if p.is_null() {
        return Err(fail(TcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(TcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn hand_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parses `source`; on success `*out` owns a document to free with [`tc_document_free`].
///
/// # Safety
/// `source` is a NUL-terminated string and `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn tc_document_parse(source: *const c_char, out: *mut *mut TcDocument) -> TcStatus {
    guard(|| {
        if out.is_null() {
            return fail(TcStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let src = match text(source, "source") {
            Ok(s) => s,
            Err(st) => return st,
        };
        match dsl::parse(src) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(TcDocument { doc }));
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `doc` is null or came from [`tc_document_parse`] and has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tc_document_free(doc: *mut TcDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Canonical text of the document.
///
/// # Safety
/// `doc` is a live document and `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn tc_document_print(doc: *const TcDocument, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        if doc.is_null() || out.is_null() {
            return fail(TcStatus::NullPointer, "doc or out is null");
        }
        *out = hand_out((*doc).doc.to_string());
        TcStatus::Ok
    })
}

/// Runs `command` and stores the JSON report in `*out_json`. `decided` may be
/// null; otherwise it receives 1 when the report reaches a verdict and 0 when
/// it stays undecided.
///
/// # Safety
/// `doc` is a live document, `command` a NUL-terminated string, `out_json`
/// writable, and `decided` null or writable.
#[no_mangle]
pub unsafe extern "C" fn tc_run(
    doc: *const TcDocument,
    command: *const c_char,
    refined: bool,
    out_json: *mut *mut c_char,
    decided: *mut i32,
) -> TcStatus {
    guard(|| {
        if doc.is_null() || out_json.is_null() {
            return fail(TcStatus::NullPointer, "doc or out_json is null");
        }
        *out_json = ptr::null_mut();
        let name = match text(command, "command") {
            Ok(s) => s,
            Err(st) => return st,
        };
        let Some(cmd) = Command::from_name(name) else {
            return fail(TcStatus::UnknownCommand, format!("unknown command `{name}`"));
        };
        match dsl::run(&(*doc).doc, cmd, Options { refined }) {
            Ok(report) => {
                if !decided.is_null() {
                    *decided = i32::from(report.decided);
                }
                *out_json = hand_out(report.to_json());
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::CommandFailed, e.to_string()),
        }
    })
}

/// Elliptic chain test. `torsion[i]` is the order `t_{i+2}`, with 0 for
/// infinite order; `len` must be `g - 1`. Writes 1 or 0 to `*out`.
///
/// # Safety
/// `torsion` points to `len` readable values (or is null with `len == 0`) and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tc_chain_is_weierstrass(g: u32, torsion: *const u64, len: usize, out: *mut i32) -> TcStatus {
    guard(|| {
        if out.is_null() || (torsion.is_null() && len > 0) {
            return fail(TcStatus::NullPointer, "torsion or out is null");
        }
        let ts = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(torsion, len)
        };
        let ts = ts.iter().map(|&t| (t != 0).then(|| BigInt::from(t))).collect();
        match ChainInput::new(g as usize, ts) {
            Ok(input) => {
                *out = i32::from(chain_is_limit_weierstrass(&input).is_weierstrass);
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Dimension of the stratum with the given orders, affine or projectivized.
///
/// # Safety
/// `orders` points to `len` readable values and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tc_stratum_dimension(
    orders: *const i64,
    len: usize,
    projectivized: bool,
    out: *mut i64,
) -> TcStatus {
    guard(|| {
        if out.is_null() || (orders.is_null() && len > 0) {
            return fail(TcStatus::NullPointer, "orders or out is null");
        }
        let os = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(orders, len)
        };
        match stratum_dimension(&Signature::from_i64(os), projectivized) {
            Ok(d) => {
                *out = d;
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Message for the last failing call on this thread, or null. Free with [`tc_string_free`].
#[no_mangle]
pub extern "C" fn tc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone().map_or(ptr::null_mut(), CString::into_raw))
}

/// # Safety
/// `s` is null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
