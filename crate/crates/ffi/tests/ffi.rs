use std::ffi::{c_char, CStr};
use std::ptr;

use sonine_ffi::*;

fn ctx() -> *mut SonineContext {
    sonine_context_new()
}

fn last_error(c: *mut SonineContext) -> String {
    unsafe { CStr::from_ptr(sonine_last_error(c)) }.to_string_lossy().into_owned()
}

fn re(v: &[f64]) -> Vec<SonineComplex> {
    v.iter().map(|&re| SonineComplex { re, im: 0.0 }).collect()
}

#[test]
fn bessel_1d_is_cosine_at_minus_half() {
    let c = ctx();
    let mut out = SonineComplex::default();
    let st = unsafe { sonine_bessel_1d(c, -0.5, SonineComplex { re: 1.0, im: 0.0 }, &mut out) };
    assert_eq!(st, SonineStatus::Ok);
    assert!((out.re - 1f64.cos()).abs() < 1e-14);
    unsafe { sonine_context_free(c) };
}

#[test]
fn bessel_b_at_zero_is_one() {
    let c = ctx();
    let x = re(&[0.7, 0.2]);
    let y = re(&[0.0, 0.0]);
    let mut out = SonineEval::default();
    let st = unsafe { sonine_bessel_b(c, 2, 0.5, 1.0, x.as_ptr(), y.as_ptr(), &mut out) };
    assert_eq!(st, SonineStatus::Ok);
    assert!((out.value.re - 1.0).abs() < 1e-15);
    unsafe { sonine_context_free(c) };
}

#[test]
fn bessel_b_matches_library() {
    let c = ctx();
    let x = re(&[0.9, 0.4]);
    let y = re(&[0.5, 0.3]);
    let mut out = SonineEval::default();
    let st = unsafe { sonine_bessel_b(c, 2, 1.5, 0.5, x.as_ptr(), y.as_ptr(), &mut out) };
    assert_eq!(st, SonineStatus::Ok);
    let k = sonine::hyper::MultiplicityB::new(2, 1.5, 0.5).unwrap();
    let direct = sonine::hyper::bessel_b(
        &k,
        &sonine::hyper::real_vec(&[0.9, 0.4]),
        &sonine::hyper::real_vec(&[0.5, 0.3]),
        &Default::default(),
    )
    .unwrap();
    assert_eq!(out.value.re, direct.value.re);
    assert_eq!(out.degree_used, direct.degree_used);
    unsafe { sonine_context_free(c) };
}

#[test]
fn bessel_a_rejects_one_variable() {
    let c = ctx();
    let x = re(&[1.0]);
    let mut out = SonineEval::default();
    let st = unsafe { sonine_bessel_a(c, 1, 1.0, x.as_ptr(), x.as_ptr(), &mut out) };
    assert_ne!(st, SonineStatus::Ok);
    assert!(!last_error(c).is_empty());
    unsafe { sonine_context_free(c) };
}

#[test]
fn jack_of_one_box_is_power_sum() {
    let c = ctx();
    let parts = [1u32, 0];
    let x = re(&[2.0, 3.0]);
    let mut out = SonineComplex::default();
    let st = unsafe { sonine_jack_eval(c, parts.as_ptr(), 2, 2, 1, x.as_ptr(), &mut out) };
    assert_eq!(st, SonineStatus::Ok);
    assert!((out.re - 5.0).abs() < 1e-13);
    unsafe { sonine_context_free(c) };
}

#[test]
fn binomial_string_and_buffer_size() {
    let c = ctx();
    let k = [2u32, 1];
    let l = [1u32, 0];
    let mut needed = 0usize;
    let mut small = [0 as c_char; 2];
    let st = unsafe { sonine_binomial(c, k.as_ptr(), l.as_ptr(), 2, 1, 1, small.as_mut_ptr(), 2, &mut needed) };
    assert_eq!(st, SonineStatus::BufferTooSmall);
    assert_eq!(needed, 4);
    let mut buf = vec![0 as c_char; needed];
    let st = unsafe { sonine_binomial(c, k.as_ptr(), l.as_ptr(), 2, 1, 1, buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
    assert_eq!(st, SonineStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "3/1");
    assert!(last_error(c).is_empty());
    unsafe { sonine_context_free(c) };
}

#[test]
fn invalid_partition_and_zero_denominator() {
    let c = ctx();
    let k = [1u32, 2];
    let l = [0u32, 0];
    let mut buf = [0 as c_char; 16];
    let st = unsafe { sonine_binomial(c, k.as_ptr(), l.as_ptr(), 2, 1, 1, buf.as_mut_ptr(), 16, ptr::null_mut()) };
    assert_eq!(st, SonineStatus::InvalidArgument);
    let k = [2u32, 1];
    let st = unsafe { sonine_binomial(c, k.as_ptr(), l.as_ptr(), 2, 1, 0, buf.as_mut_ptr(), 16, ptr::null_mut()) };
    assert_eq!(st, SonineStatus::InvalidArgument);
    assert!(last_error(c).contains("denominator"));
    unsafe { sonine_context_free(c) };
}

#[test]
fn null_pointers_are_reported() {
    let mut out = SonineComplex::default();
    let st = unsafe { sonine_bessel_1d(ptr::null_mut(), 0.0, SonineComplex::default(), &mut out) };
    assert_eq!(st, SonineStatus::NullPointer);
    let c = ctx();
    let st = unsafe { sonine_bessel_1d(c, 0.0, SonineComplex::default(), ptr::null_mut()) };
    assert_eq!(st, SonineStatus::NullPointer);
    let st = unsafe { sonine_bessel_b(c, 2, 1.0, 1.0, ptr::null(), ptr::null(), ptr::null_mut()) };
    assert_eq!(st, SonineStatus::NullPointer);
    assert_eq!(unsafe { sonine_connection_len(ptr::null()) }, 0);
    unsafe {
        sonine_context_free(c);
        sonine_context_free(ptr::null_mut());
        sonine_connection_free(ptr::null_mut());
    }
    assert!(!unsafe { CStr::from_ptr(sonine_last_error(ptr::null())) }.to_bytes().is_empty());
}

#[test]
fn policy_is_validated() {
    let c = ctx();
    assert_eq!(unsafe { sonine_set_policy(c, 10, 1e-10, 2) }, SonineStatus::Ok);
    assert_ne!(unsafe { sonine_set_policy(c, 10, -1.0, 2) }, SonineStatus::Ok);
    unsafe { sonine_context_free(c) };
}

#[test]
fn laguerre_one_variable_degree_one() {
    // L̃_1^a(x) = 1 - x/(a+1)
    let c = ctx();
    let k = [1u32];
    let x = [0.6];
    let mut out = SonineEval::default();
    let st = unsafe { sonine_laguerre_normalized(c, k.as_ptr(), 1, 0.5, 1.0, x.as_ptr(), &mut out) };
    assert_eq!(st, SonineStatus::Ok);
    assert!((out.value.re - (1.0 - 0.6 / 1.5)).abs() < 1e-13);
    unsafe { sonine_context_free(c) };
}

#[test]
fn connection_table_round_trip() {
    let c = ctx();
    let k = [2u32, 1];
    let mut t: *mut SonineConnectionTable = ptr::null_mut();
    // a = 0, alpha = 1, h = 1
    let st = unsafe { sonine_connection_new(c, k.as_ptr(), 2, 0, 1, 1, 1, 1, 1, &mut t) };
    assert_eq!(st, SonineStatus::Ok, "{}", last_error(c));
    let len = unsafe { sonine_connection_len(t) };
    assert_eq!(len, 5);
    let mut total = 0.0;
    let mut lambda = [0u32; 2];
    for i in 0..len {
        let mut v = 0.0;
        let mut s: *const c_char = ptr::null();
        assert_eq!(unsafe { sonine_connection_entry(t, i, lambda.as_mut_ptr(), &mut v, &mut s) }, SonineStatus::Ok);
        assert!(lambda[0] >= lambda[1] && lambda[0] <= 2 && lambda[1] <= 1);
        assert!(unsafe { CStr::from_ptr(s) }.to_str().unwrap().contains('/'));
        total += v;
    }
    assert!((total - 1.0).abs() < 1e-14);
    assert_eq!(unsafe { sonine_connection_entry(t, len, lambda.as_mut_ptr(), ptr::null_mut(), ptr::null_mut()) }, SonineStatus::InvalidArgument);
    unsafe { sonine_connection_free(t) };

    let st = unsafe { sonine_connection_new(c, k.as_ptr(), 2, -3, 1, 1, 1, 1, 1, &mut t) };
    assert_ne!(st, SonineStatus::Ok);
    assert!(t.is_null());
    unsafe { sonine_context_free(c) };
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sonine.h")).unwrap();
    for f in [
        "sonine_context_new",
        "sonine_context_free",
        "sonine_last_error",
        "sonine_set_policy",
        "sonine_bessel_b",
        "sonine_bessel_a",
        "sonine_bessel_1d",
        "sonine_jack_eval",
        "sonine_binomial",
        "sonine_laguerre_normalized",
        "sonine_connection_new",
        "sonine_connection_len",
        "sonine_connection_entry",
        "sonine_connection_free",
    ] {
        assert!(header.contains(&format!(" {f}(")) || header.contains(&format!("*{f}(")), "{f} missing from header");
    }
    assert!(header.contains("SONINE_STATUS_BUFFER_TOO_SMALL"));
}
