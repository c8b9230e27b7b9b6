//! Exercises the C entry points from a separate compilation unit and keeps
//! the generated header in lockstep with the exported symbols.

use std::ffi::{c_char, c_int, CStr, CString};

use preimage_lab_ffi::*;

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { plab_string_free(ptr) };
    s
}

#[test]
fn verification_runs_end_to_end() {
    let mut json: *mut c_char = std::ptr::null_mut();
    let mut all_pass: c_int = -1;
    let status = unsafe { plab_verify(100, &mut json, &mut all_pass) };
    assert_eq!(status, PLAB_OK);
    assert_eq!(all_pass, 1);
    let report: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(report["schema"], "1");
    assert_eq!(report["config"]["cd_height_bound"], "100");
    assert_eq!(report["records"].as_array().unwrap().len(), 11);
}

#[test]
fn domain_violations_report_codes_not_panics() {
    let mut out = 0u32;
    assert_eq!(plab_kappa(1, &mut out), PLAB_DOMAIN_ERROR);

    let c = CString::new("1/2").unwrap();
    // corollary counts are a d >= 3 statement
    assert_eq!(
        unsafe { plab_corollary_count(2, c.as_ptr(), &mut out) },
        PLAB_DOMAIN_ERROR
    );
    let msg = take_string(plab_last_error());
    assert!(!msg.is_empty());

    let mut json: *mut c_char = std::ptr::null_mut();
    assert_eq!(
        unsafe { plab_dm_search_json(3, 10, &mut json) },
        PLAB_DOMAIN_ERROR
    );
}

#[test]
fn null_out_pointers_are_rejected() {
    let c = CString::new("-1").unwrap();
    assert_eq!(
        unsafe { plab_corollary_count(4, c.as_ptr(), std::ptr::null_mut()) },
        PLAB_INVALID_ARGUMENT
    );
    let mut len = 0usize;
    assert_eq!(
        unsafe { plab_tree_union_len(std::ptr::null(), &mut len) },
        PLAB_INVALID_ARGUMENT
    );
}

#[test]
fn header_tracks_the_exported_surface() {
    let header_path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/preimage_lab.h");
    let header = std::fs::read_to_string(header_path).expect("header generated at build time");
    assert!(header.contains("typedef struct PlabTree PlabTree;"));
    for symbol in [
        "plab_last_error",
        "plab_string_free",
        "plab_kappa",
        "plab_corollary_count",
        "plab_preimages",
        "plab_tree_free",
        "plab_tree_truncated",
        "plab_tree_union_len",
        "plab_tree_union_value",
        "plab_tree_to_json",
        "plab_cd_points_json",
        "plab_xt_class",
        "plab_dm_search_json",
        "plab_verify",
    ] {
        assert!(header.contains(symbol), "{symbol} missing from header");
    }
    for code in [
        "PLAB_OK",
        "PLAB_INVALID_ARGUMENT",
        "PLAB_DOMAIN_ERROR",
        "PLAB_CLASSIFICATION_ERROR",
        "PLAB_INTERNAL_ERROR",
    ] {
        assert!(header.contains(code), "{code} missing from header");
    }
}
