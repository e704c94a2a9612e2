//! C ABI over the structure-document interface of `twoseg`.
//!
//! Every function returns a [`TwosegStatus`]. Outputs go through pointer
//! arguments and are only written on success. Strings handed out must be
//! released with [`twoseg_string_free`], documents with
//! [`twoseg_document_free`]. The message for the last failure on the
//! calling thread is available from [`twoseg_last_error`].

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};

use twoseg::Error;
use twoseg::cli::{
    CheckSelection, Direction, StructureDocument, cmd_check, cmd_derive, cmd_example,
    cmd_search_lift,
};

/// Result codes; 0 and 1 match the CLI exit codes for a check.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwosegStatus {
    Ok = 0,
    /// A check ran and failed, or the input has the wrong structure.
    CheckFailed = 1,
    /// Malformed document, unknown name or out-of-range argument.
    InvalidInput = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// The library panicked; the message says where.
    Internal = 5,
}

/// Derivation directions for [`twoseg_derive`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwosegDirection {
    FrobeniusToParacyclic = 0,
    ParacyclicToFrobenius = 1,
    GammaToCommutative = 2,
    CommutativeToGamma = 3,
}

/// Check flags for [`twoseg_check`]; 0 runs every applicable check.
pub const TWOSEG_CHECK_2SEGAL: u32 = 1;
pub const TWOSEG_CHECK_UNITALITY: u32 = 1 << 1;
pub const TWOSEG_CHECK_SUBDIVISIONS: u32 = 1 << 2;
pub const TWOSEG_CHECK_PARACYCLIC: u32 = 1 << 3;
pub const TWOSEG_CHECK_GAMMA: u32 = 1 << 4;
pub const TWOSEG_CHECK_FROBENIUS: u32 = 1 << 5;
pub const TWOSEG_CHECK_FULL_HEXAGON: u32 = 1 << 6;

/// Opaque handle to a parsed structure document.
pub struct TwosegDocument(StructureDocument);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> TwosegStatus {
    match e {
        Error::NotTwoSegal { .. }
        | Error::NotFrobenius(_)
        | Error::NotCommutative(_)
        | Error::Gluing(_) => TwosegStatus::CheckFailed,
        _ => TwosegStatus::InvalidInput,
    }
}

struct Failure(TwosegStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TwosegStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any failure and converts panics into `Internal`.
fn guard(body: impl FnOnce() -> Result<TwosegStatus, Failure>) -> TwosegStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => {
            if status == TwosegStatus::Ok {
                set_error("");
            }
            status
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            TwosegStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| Failure(TwosegStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_doc<'a>(doc: *const TwosegDocument) -> Result<&'a StructureDocument, Failure> {
    unsafe { doc.as_ref() }
        .map(|d| &d.0)
        .ok_or_else(|| null("document"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let text = CString::new(text).map_err(|e| Failure(TwosegStatus::Internal, e.to_string()))?;
    unsafe { write_out(out, text.into_raw()) }
}

unsafe fn write_doc(out: *mut *mut TwosegDocument, doc: StructureDocument) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    unsafe { out.write(Box::into_raw(Box::new(TwosegDocument(doc)))) };
    Ok(())
}

/// Parses and validates a JSON structure document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_document_parse(
    json: *const c_char,
    out: *mut *mut TwosegDocument,
) -> TwosegStatus {
    guard(|| {
        let text = unsafe { read_str(json, "json") }?;
        let doc = StructureDocument::parse(text)?;
        unsafe { write_doc(out, doc) }?;
        Ok(TwosegStatus::Ok)
    })
}

/// Builds a catalog example; `param` 0 picks the default parameter.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_document_example(
    name: *const c_char,
    param: usize,
    level: usize,
    out: *mut *mut TwosegDocument,
) -> TwosegStatus {
    guard(|| {
        let name = unsafe { read_str(name, "name") }?;
        let doc = cmd_example(name, (param != 0).then_some(param), level)?;
        unsafe { write_doc(out, doc) }?;
        Ok(TwosegStatus::Ok)
    })
}

/// Releases a document; null is ignored.
///
/// # Safety
/// `doc` must come from this library and not be used afterwards.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_document_free(doc: *mut TwosegDocument) {
    if !doc.is_null() {
        drop(unsafe { Box::from_raw(doc) });
    }
}

/// Serializes a document to JSON.
///
/// # Safety
/// `doc` must be a live document and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_document_to_json(
    doc: *const TwosegDocument,
    out: *mut *mut c_char,
) -> TwosegStatus {
    guard(|| {
        let doc = unsafe { read_doc(doc) }?;
        unsafe { write_string(out, doc.to_json()) }?;
        Ok(TwosegStatus::Ok)
    })
}

/// Top simplicial level of a document.
///
/// # Safety
/// `doc` must be a live document and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_document_top_level(
    doc: *const TwosegDocument,
    out: *mut usize,
) -> TwosegStatus {
    guard(|| {
        let doc = unsafe { read_doc(doc) }?;
        unsafe { write_out(out, doc.simplicial()?.top()) }?;
        Ok(TwosegStatus::Ok)
    })
}

/// Runs the checks selected by `flags` and returns `Ok` or `CheckFailed`.
/// If `report` is non-null it receives the report as JSON.
///
/// # Safety
/// `doc` must be a live document; `report` may be null.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_check(
    doc: *const TwosegDocument,
    flags: u32,
    report: *mut *mut c_char,
) -> TwosegStatus {
    guard(|| {
        let doc = unsafe { read_doc(doc) }?;
        let sel = CheckSelection {
            two_segal: flags & TWOSEG_CHECK_2SEGAL != 0,
            unitality: flags & TWOSEG_CHECK_UNITALITY != 0,
            subdivisions: flags & TWOSEG_CHECK_SUBDIVISIONS != 0,
            paracyclic: flags & TWOSEG_CHECK_PARACYCLIC != 0,
            gamma: flags & TWOSEG_CHECK_GAMMA != 0,
            frobenius: flags & TWOSEG_CHECK_FROBENIUS != 0,
            full_hexagon: flags & TWOSEG_CHECK_FULL_HEXAGON != 0,
        };
        let result = cmd_check(doc, sel)?;
        if !report.is_null() {
            let json = serde_json::to_string(&result).map_err(Error::from)?;
            unsafe { write_string(report, json) }?;
        }
        Ok(if result.exit_code() == 0 {
            TwosegStatus::Ok
        } else {
            TwosegStatus::CheckFailed
        })
    })
}

/// Derives a new document in the given direction.
///
/// # Safety
/// `doc` must be a live document and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_derive(
    doc: *const TwosegDocument,
    direction: TwosegDirection,
    out: *mut *mut TwosegDocument,
) -> TwosegStatus {
    guard(|| {
        let doc = unsafe { read_doc(doc) }?;
        let direction = match direction {
            TwosegDirection::FrobeniusToParacyclic => Direction::FrobeniusToParacyclic,
            TwosegDirection::ParacyclicToFrobenius => Direction::ParacyclicToFrobenius,
            TwosegDirection::GammaToCommutative => Direction::GammaToCommutative,
            TwosegDirection::CommutativeToGamma => Direction::CommutativeToGamma,
        };
        let derived = cmd_derive(doc, direction)?;
        unsafe { write_doc(out, derived) }?;
        Ok(TwosegStatus::Ok)
    })
}

/// Searches for an associator on a 2-truncated document. Returns `Ok` when
/// one exists and `CheckFailed` otherwise; `verdict` may be null.
///
/// # Safety
/// `doc` must be a live document; `verdict` may be null.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_search_lift(
    doc: *const TwosegDocument,
    budget: u64,
    verdict: *mut *mut c_char,
) -> TwosegStatus {
    guard(|| {
        let doc = unsafe { read_doc(doc) }?;
        let (result, code) = cmd_search_lift(doc, budget as u128)?;
        if !verdict.is_null() {
            unsafe { write_string(verdict, result.to_string()) }?;
        }
        Ok(if code == 0 {
            TwosegStatus::Ok
        } else {
            TwosegStatus::CheckFailed
        })
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn twoseg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the last failure on this thread, empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn twoseg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
