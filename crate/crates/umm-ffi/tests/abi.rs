use std::ffi::{c_char, CStr, CString};
use std::ptr;

use serde_json::Value;
use umm_ffi::*;

fn last_error() -> String {
    let e = umm_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
}

fn take_string(s: *mut c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { umm_string_free(s) };
    text
}

struct Fixture {
    ctx: *mut UmmContext,
}

impl Fixture {
    fn new() -> Self {
        let constants =
            CString::new(r#"{"kind":"spectra","generators":["x","y"],"values":[[1,2],["1/3",1]]}"#).unwrap();
        let mut ctx = ptr::null_mut();
        assert_eq!(unsafe { umm_context_new(1, constants.as_ptr(), &mut ctx) }, UmmStatus::Ok);
        Self { ctx }
    }

    fn parse(&self, text: &str) -> *mut UmmPolynomial {
        let text = CString::new(text).unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(unsafe { umm_polynomial_parse(self.ctx, text.as_ptr(), &mut p) }, UmmStatus::Ok);
        p
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        unsafe { umm_context_free(self.ctx) };
    }
}

#[test]
fn master_field_through_the_abi() {
    let f = Fixture::new();
    let p = f.parse("x u1 y u1^-1");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { umm_master_field_json(f.ctx, p, ptr::null(), 0, &mut out) }, UmmStatus::Ok);
    assert!(umm_last_error().is_null());
    // σ(x)σ(y) = (3/2)(2/3)
    let series: Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(series[0]["re"], serde_json::json!(["1", "1"]));

    let v = f.parse("u1 + u1^-1");
    let u = f.parse("u1");
    assert_eq!(unsafe { umm_master_field_json(f.ctx, u, v, 2, &mut out) }, UmmStatus::Ok);
    let series: Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(series[1]["re"], serde_json::json!(["1", "1"]));
    unsafe {
        umm_polynomial_free(p);
        umm_polynomial_free(u);
        umm_polynomial_free(v);
    }
}

#[test]
fn correlators_and_format() {
    let f = Fixture::new();
    let a = f.parse("u1^2");
    let b = f.parse("u1^-2");
    let args = [a as *const UmmPolynomial, b as *const UmmPolynomial];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { umm_tau_kg_json(f.ctx, args.as_ptr(), 2, 0, ptr::null(), 0, &mut out) }, UmmStatus::Ok);
    let series: Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(series[0]["re"], serde_json::json!(["2", "1"]));

    assert_eq!(unsafe { umm_polynomial_format(f.ctx, a, &mut out) }, UmmStatus::Ok);
    assert_eq!(take_string(out), "1*u1^2");
    unsafe {
        umm_polynomial_free(a);
        umm_polynomial_free(b);
    }
}

#[test]
fn hurwitz_and_run() {
    let (alpha, beta) = ([2usize, 1], [3usize]);
    let mut count = 0u64;
    let status = unsafe { umm_hurwitz_count(2, alpha.as_ptr(), alpha.len(), beta.as_ptr(), beta.len(), &mut count) };
    assert_eq!((status, count), (UmmStatus::Ok, 126));

    let config = CString::new(r#"{"command":"hurwitz","genus":0,"d_max":2}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { umm_run_json(config.as_ptr(), &mut out) }, UmmStatus::Ok);
    let report: Value = serde_json::from_str(&take_string(out)).unwrap();
    // d = 1 and d = 2: one pair plus four
    assert_eq!(report["exact"]["table"].as_array().unwrap().len(), 5);
    assert_eq!(report["provenance"]["command"], "hurwitz");
}

#[test]
fn errors_are_codes_with_messages() {
    let f = Fixture::new();
    let text = CString::new("u1 + zz").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { umm_polynomial_parse(f.ctx, text.as_ptr(), &mut p) }, UmmStatus::Parse);
    assert!(p.is_null());
    assert!(last_error().contains("zz"));

    assert_eq!(unsafe { umm_polynomial_parse(ptr::null(), text.as_ptr(), &mut p) }, UmmStatus::NullPointer);
    assert!(last_error().contains("ctx"));

    let bad = CString::new(r#"{"kind":"spectra","generators":["x"],"values":[[1],[2]]}"#).unwrap();
    let mut ctx = ptr::null_mut();
    assert_eq!(unsafe { umm_context_new(1, bad.as_ptr(), &mut ctx) }, UmmStatus::Config);
    assert!(last_error().contains("constants.values"));

    let v = f.parse("u1");
    let q = f.parse("u1");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { umm_master_field_json(f.ctx, q, v, 1, &mut out) }, UmmStatus::Compute);
    assert!(last_error().contains("selfadjoint"));

    let mut count = 0;
    let (a, b) = ([2usize], [1usize]);
    assert_eq!(unsafe { umm_hurwitz_count(0, a.as_ptr(), 1, b.as_ptr(), 1, &mut count) }, UmmStatus::Compute);
    let config = CString::new(r#"{"command":"hurwitz","genius":1}"#).unwrap();
    assert_eq!(unsafe { umm_run_json(config.as_ptr(), &mut out) }, UmmStatus::Config);
    assert!(last_error().contains("genius"));
    unsafe {
        umm_polynomial_free(v);
        umm_polynomial_free(q);
        umm_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(umm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
