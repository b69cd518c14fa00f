//! Exercises the C ABI exactly as a foreign client would: through raw
//! pointers and status codes.

use std::ffi::{CStr, CString};
use std::ptr;

use cayley_tower_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    ct_string_free(ptr);
    out
}

#[test]
fn group_handles() {
    unsafe {
        let mut group: *mut CtGroup = ptr::null_mut();
        let status = ct_group_new(c("gl2:4").as_ptr(), &mut group);
        assert_eq!(status, CtStatus::Ok);
        assert_eq!(ct_group_order(group), 180);
        assert_eq!(ct_group_exponent(group), 30);
        assert_eq!(ct_group_class_count(group), 15);
        ct_group_free(group);

        let mut bad: *mut CtGroup = ptr::null_mut();
        let status = ct_group_new(c("gl2:9").as_ptr(), &mut bad);
        assert_eq!(status, CtStatus::Unsupported);
        assert!(bad.is_null());
        let msg = CStr::from_ptr(ct_last_error_message()).to_str().unwrap();
        assert!(msg.contains("catalog"), "message: {msg}");

        let status = ct_group_new(c("nonsense").as_ptr(), &mut bad);
        assert_eq!(status, CtStatus::ConfigError);

        let status = ct_group_new(ptr::null(), &mut bad);
        assert_eq!(status, CtStatus::NullPointer);
    }
}

#[test]
fn chartab_json_is_parseable() {
    unsafe {
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        let status = ct_chartab_json(c("symmetric:3").as_ptr(), &mut out);
        assert_eq!(status, CtStatus::Ok);
        let json = take_string(out);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["order"], 6);
        assert_eq!(value["rows"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn tower_report_round_trip() {
    let config = "group = cyclic:5\nbeta = 1:1,2:1\nell = 2\nlevels = 2\nchecks = factorization,growth\n";
    unsafe {
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        let status = ct_tower_report_json(c(config).as_ptr(), &mut out);
        assert_eq!(status, CtStatus::Ok);
        let json = take_string(out);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["mu"], 1);
        assert_eq!(value["lambda"], 1);
        assert_eq!(value["checks"]["factorization"]["status"], "pass");
        assert_eq!(value["checks"]["growth"]["status"], "pass");
    }
}

#[test]
fn verify_status_contract() {
    unsafe {
        // passing checks
        let ok = "group = cyclic:5\nbeta = 1:1,2:1\nell = 2\nlevels = 2\nchecks = factorization\n";
        assert_eq!(ct_verify(c(ok).as_ptr()), CtStatus::Ok);

        // ramified prime: unsupported
        let ramified = "group = cyclic:3\ngens = 1,2\nbeta = 1:1\nell = 3\nlevels = 1\nchecks = sum-rule\n";
        assert_eq!(ct_verify(c(ramified).as_ptr()), CtStatus::Unsupported);

        // malformed config
        let broken = "group = cyclic:5\nwibble = 1\n";
        assert_eq!(ct_verify(c(broken).as_ptr()), CtStatus::ConfigError);
    }
}

#[test]
fn batch_csv_shape() {
    let manifest = "group = cyclic:5\nbeta = 1:1,2:1\nell = 2\nlevels = 1\nchecks = factorization\n";
    unsafe {
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        let status = ct_batch_csv(c(manifest).as_ptr(), &mut out);
        assert_eq!(status, CtStatus::Ok);
        let csv = take_string(out);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "group,ell,mu,lambda,nu,n0,checks_passed");
        assert!(lines[1].starts_with("cyclic:5,2,1,1,"));
        assert!(lines[1].ends_with("1/1"));
    }
}
