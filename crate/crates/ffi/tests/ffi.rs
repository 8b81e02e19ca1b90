use std::ffi::{CStr, CString};
use std::ptr;

use dlcalc_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { dlc_string_free(s) };
    out
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn normalize_and_act() {
    let s = dlc_session_new();
    let mut out = ptr::null_mut();
    let w = CString::new("Q^4 Q^1").unwrap();
    assert_eq!(
        unsafe { dlc_normalize(s, w.as_ptr(), &mut out) },
        DlcStatus::Ok
    );
    assert_eq!(json(&take(out))["result_text"], "Q^3 Q^2");

    let model = CString::new("MU").unwrap();
    let e = CString::new("Q^6 b_2").unwrap();
    assert_eq!(
        unsafe { dlc_act(s, model.as_ptr(), e.as_ptr(), 12, &mut out) },
        DlcStatus::Ok
    );
    assert_eq!(
        json(&take(out))["result_text"],
        "b_1 b_2^2 + b_1 b_4 + b_2 b_3 + b_5"
    );
    unsafe { dlc_session_free(s) };
}

#[test]
fn closure_reports_violation() {
    let s = dlc_session_new();
    let mut out = ptr::null_mut();
    let sub = CString::new("k(2)").unwrap();
    let st = unsafe { dlc_closure(s, sub.as_ptr(), ptr::null(), 31, &mut out) };
    assert_eq!(st, DlcStatus::Violation);
    let v = json(&take(out));
    assert_eq!(v["status"], "violation");
    assert!(v["result_text"]
        .as_str()
        .unwrap()
        .contains("xibar2 -> xibar3"));
    unsafe { dlc_session_free(s) };
}

#[test]
fn verify_and_generic_run() {
    let s = dlc_session_new();
    let mut out = ptr::null_mut();
    let suite = CString::new("cupone").unwrap();
    assert_eq!(
        unsafe { dlc_verify(s, suite.as_ptr(), &mut out) },
        DlcStatus::Ok
    );
    assert_eq!(json(&take(out))["suite_results"][0]["passed"], true);

    let cmd = CString::new("poincare").unwrap();
    let opts = CString::new(r#"{"gens": "x:1", "flavor": "En", "n": "2", "maxdeg": 7}"#).unwrap();
    let st = unsafe { dlc_run(s, cmd.as_ptr(), ptr::null(), opts.as_ptr(), &mut out) };
    assert_eq!(st, DlcStatus::Ok);
    assert_eq!(
        json(&take(out))["result_dims"],
        serde_json::json!([1, 1, 1, 2, 2, 2, 3, 4])
    );
    unsafe { dlc_session_free(s) };
}

#[test]
fn error_codes() {
    let s = dlc_session_new();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { dlc_normalize(s, ptr::null(), &mut out) },
        DlcStatus::NullArg
    );
    assert!(out.is_null());
    assert_eq!(
        unsafe { dlc_normalize(ptr::null_mut(), ptr::null(), &mut out) },
        DlcStatus::NullArg
    );

    let bad = CString::new("Q^4 $").unwrap();
    assert_eq!(
        unsafe { dlc_normalize(s, bad.as_ptr(), &mut out) },
        DlcStatus::Parse
    );
    let msg = take(dlc_last_error_message());
    assert!(msg.contains("syntax error"), "{msg}");

    let bytes = [0xffu8, 0];
    assert_eq!(
        unsafe { dlc_normalize(s, bytes.as_ptr().cast(), &mut out) },
        DlcStatus::Utf8
    );

    let cmd = CString::new("act").unwrap();
    let e = CString::new("Q^1 zz").unwrap();
    assert_eq!(
        unsafe { dlc_run(s, cmd.as_ptr(), e.as_ptr(), ptr::null(), &mut out) },
        DlcStatus::Parse
    );
    let opts = CString::new(r#"{"colour": 1}"#).unwrap();
    assert_eq!(
        unsafe { dlc_run(s, cmd.as_ptr(), e.as_ptr(), opts.as_ptr(), &mut out) },
        DlcStatus::Usage
    );
    let m = CString::new("MU").unwrap();
    let high = CString::new("Q^30 b_1").unwrap();
    assert_eq!(
        unsafe { dlc_act(s, m.as_ptr(), high.as_ptr(), 12, &mut out) },
        DlcStatus::Math
    );
    unsafe { dlc_session_free(s) };
}

#[test]
fn header_is_generated() {
    let h =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dlcalc.h")).unwrap();
    for sym in [
        "dlc_session_new",
        "dlc_session_free",
        "dlc_run",
        "dlc_last_error_message",
        "DLC_STATUS_MATH",
    ] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
    assert!(h.contains("typedef struct DlcSession DlcSession"));
}
