use std::ffi::{CStr, CString};
use std::ptr;

use pellrep_ffi::*;

fn last_error() -> Option<String> {
    let p = pr_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    pr_string_free(p);
    s
}

#[test]
fn solve_base_ten_pell_lucas() {
    unsafe {
        let mut report = ptr::null_mut();
        let st = pr_solve(PrSequence::PellLucas as u32, 10, 10, 0, &mut report);
        assert_eq!(st, PrStatus::Ok, "{:?}", last_error());
        assert!(last_error().is_none());

        let mut count = 0usize;
        assert_eq!(pr_report_solution_count(report, &mut count), PrStatus::Ok);
        assert_eq!(count, 3);
        let values: Vec<String> = (0..count)
            .map(|i| CStr::from_ptr(pr_report_solution_value(report, i)).to_str().unwrap().to_owned())
            .collect();
        assert_eq!(values, ["14", "34", "82"]);

        let mut s = PrSolution::default();
        assert_eq!(pr_report_solution(report, 2, &mut s), PrStatus::Ok);
        assert_eq!(s.sequence, PrSequence::PellLucas as u32);
        assert_eq!(s.n, 5);
        assert_eq!(s.repr, PrRepresentation { base: 10, d1: 8, l1: 1, d2: 2, l2: 1 });

        assert_eq!(pr_report_solution(report, 3, &mut s), PrStatus::OutOfRange);
        assert!(last_error().unwrap().contains("index 3"));
        assert!(pr_report_solution_value(report, 3).is_null());

        let mut json = ptr::null_mut();
        assert_eq!(pr_report_to_json(report, &mut json), PrStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["kind"], "pell-lucas");
        assert_eq!(v["solutions"].as_array().unwrap().len(), 3);

        pr_report_free(report);
        pr_report_free(ptr::null_mut());
    }
}

#[test]
fn decompose_and_errors() {
    unsafe {
        let n = CString::new("5741").unwrap();
        let mut r = PrRepresentation::default();
        assert_eq!(pr_decompose(n.as_ptr(), 9, &mut r), PrStatus::Ok);
        assert_eq!(r, PrRepresentation { base: 9, d1: 7, l1: 3, d2: 8, l2: 1 });

        let n = CString::new("121").unwrap();
        assert_eq!(pr_decompose(n.as_ptr(), 10, &mut r), PrStatus::NotFound);
        assert_eq!(pr_decompose(n.as_ptr(), 11, &mut r), PrStatus::InvalidBase);
        let bad = CString::new("12x").unwrap();
        assert_eq!(pr_decompose(bad.as_ptr(), 10, &mut r), PrStatus::InvalidArgument);
        assert_eq!(pr_decompose(ptr::null(), 10, &mut r), PrStatus::NullPointer);
        assert_eq!(pr_decompose(n.as_ptr(), 10, ptr::null_mut()), PrStatus::NullPointer);
        assert!(last_error().is_some());
    }
}

#[test]
fn terms_and_bounds() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pr_term(PrSequence::Pell as u32, 11, &mut s), PrStatus::Ok);
        assert_eq!(take_string(s), "5741");
        assert_eq!(pr_term(PrSequence::PellLucas as u32, 0, &mut s), PrStatus::Ok);
        assert_eq!(take_string(s), "2");
        assert_eq!(pr_term(7, 0, &mut s), PrStatus::InvalidArgument);

        assert_eq!(pr_bounds_json(PrSequence::Pell as u32, 0, &mut s), PrStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["n_max"].as_str().unwrap().len(), 31);
        assert_eq!(pr_bounds_json(PrSequence::Pell as u32, 100, &mut s), PrStatus::InvalidArgument);
        assert!(last_error().unwrap().contains("precision cap"));
    }
}

#[test]
fn bad_solve_arguments() {
    unsafe {
        let mut report = ptr::null_mut();
        assert_eq!(pr_solve(0, 1, 10, 0, &mut report), PrStatus::InvalidBase);
        assert!(report.is_null());
        assert_eq!(pr_solve(0, 7, 3, 0, &mut report), PrStatus::InvalidArgument);
        assert_eq!(pr_solve(2, 2, 10, 0, &mut report), PrStatus::InvalidArgument);
        assert_eq!(pr_solve(0, 2, 10, 0, ptr::null_mut()), PrStatus::NullPointer);
        let mut count = 0;
        assert_eq!(pr_report_solution_count(ptr::null(), &mut count), PrStatus::NullPointer);
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut r = PrRepresentation::default();
        let n = CString::new("7").unwrap();
        assert_eq!(pr_decompose(n.as_ptr(), 10, &mut r), PrStatus::NotFound);
    }
    assert!(last_error().is_some());
    std::thread::spawn(|| assert!(last_error().is_none())).join().unwrap();
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(pr_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
