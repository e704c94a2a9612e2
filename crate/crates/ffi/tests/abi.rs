use std::ffi::{CStr, CString, c_char};
use std::ptr;

use twoseg_ffi::*;

fn take_string(s: *mut c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { twoseg_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(twoseg_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn example(name: &str, param: usize, level: usize) -> *mut TwosegDocument {
    let name = CString::new(name).unwrap();
    let mut doc = ptr::null_mut();
    let status = unsafe { twoseg_document_example(name.as_ptr(), param, level, &mut doc) };
    assert_eq!(status, TwosegStatus::Ok, "{}", last_error());
    doc
}

#[test]
fn parse_serialize_round_trip() {
    let doc = example("cyclic-group", 3, 3);
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { twoseg_document_to_json(doc, &mut json) },
        TwosegStatus::Ok
    );
    let text = take_string(json);
    let c_text = CString::new(text.clone()).unwrap();
    let mut parsed = ptr::null_mut();
    assert_eq!(
        unsafe { twoseg_document_parse(c_text.as_ptr(), &mut parsed) },
        TwosegStatus::Ok
    );
    let mut again = ptr::null_mut();
    assert_eq!(
        unsafe { twoseg_document_to_json(parsed, &mut again) },
        TwosegStatus::Ok
    );
    assert_eq!(take_string(again), text);
    let mut top = 0;
    assert_eq!(
        unsafe { twoseg_document_top_level(parsed, &mut top) },
        TwosegStatus::Ok
    );
    assert_eq!(top, 3);
    unsafe {
        twoseg_document_free(doc);
        twoseg_document_free(parsed);
    }
}

#[test]
fn check_status_and_report() {
    let good = example("interval", 0, 4);
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { twoseg_check(good, 0, &mut report) },
        TwosegStatus::Ok
    );
    let report: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert!(report["checks"].as_array().unwrap().len() > 1);

    let bad = example("coskeleton-no-lift", 0, 3);
    let status = unsafe { twoseg_check(bad, TWOSEG_CHECK_2SEGAL, ptr::null_mut()) };
    assert_eq!(status, TwosegStatus::CheckFailed);
    unsafe {
        twoseg_document_free(good);
        twoseg_document_free(bad);
    }
}

#[test]
fn derive_round_trip() {
    let cyclic = example("interval", 0, 4);
    let mut frobenius = ptr::null_mut();
    let status = unsafe {
        twoseg_derive(
            cyclic,
            TwosegDirection::ParacyclicToFrobenius,
            &mut frobenius,
        )
    };
    assert_eq!(status, TwosegStatus::Ok, "{}", last_error());
    let mut back = ptr::null_mut();
    let status =
        unsafe { twoseg_derive(frobenius, TwosegDirection::FrobeniusToParacyclic, &mut back) };
    assert_eq!(status, TwosegStatus::Ok, "{}", last_error());
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        twoseg_document_to_json(cyclic, &mut a);
        twoseg_document_to_json(back, &mut b);
    }
    assert_eq!(take_string(a), take_string(b));

    let mut none = ptr::null_mut();
    let status = unsafe { twoseg_derive(cyclic, TwosegDirection::CommutativeToGamma, &mut none) };
    assert_eq!(status, TwosegStatus::InvalidInput);
    assert!(none.is_null());
    assert!(last_error().contains("commutative"));
    unsafe {
        twoseg_document_free(cyclic);
        twoseg_document_free(frobenius);
        twoseg_document_free(back);
    }
}

#[test]
fn search_lift_status() {
    let doc = example("no-lift", 2, 2);
    let mut verdict = ptr::null_mut();
    assert_eq!(
        unsafe { twoseg_search_lift(doc, 1 << 20, &mut verdict) },
        TwosegStatus::CheckFailed
    );
    assert!(take_string(verdict).contains("no lift"));
    unsafe { twoseg_document_free(doc) };
}

#[test]
fn error_codes() {
    let mut doc = ptr::null_mut();
    let broken = CString::new("{\"levels\": [1,").unwrap();
    assert_eq!(
        unsafe { twoseg_document_parse(broken.as_ptr(), &mut doc) },
        TwosegStatus::InvalidInput
    );
    assert!(doc.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { twoseg_document_parse(ptr::null(), &mut doc) },
        TwosegStatus::NullPointer
    );
    assert_eq!(
        unsafe { twoseg_check(ptr::null(), 0, ptr::null_mut()) },
        TwosegStatus::NullPointer
    );

    let unknown = CString::new("no-such-example").unwrap();
    let status = unsafe { twoseg_document_example(unknown.as_ptr(), 0, 3, &mut doc) };
    assert_eq!(status, TwosegStatus::InvalidInput);

    let invalid = [0xffu8, 0];
    let status = unsafe { twoseg_document_parse(invalid.as_ptr().cast(), &mut doc) };
    assert_eq!(status, TwosegStatus::InvalidUtf8);

    let point = example("point", 0, 2);
    assert!(last_error().is_empty());
    unsafe {
        twoseg_document_free(point);
        twoseg_document_free(ptr::null_mut());
        twoseg_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/twoseg.h");
    for name in [
        "twoseg_document_parse",
        "twoseg_document_example",
        "twoseg_document_free",
        "twoseg_document_to_json",
        "twoseg_document_top_level",
        "twoseg_check",
        "twoseg_derive",
        "twoseg_search_lift",
        "twoseg_string_free",
        "twoseg_last_error",
        "TWOSEG_STATUS_CHECK_FAILED",
        "TWOSEG_CHECK_FULL_HEXAGON",
        "typedef struct TwosegDocument TwosegDocument",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
