use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fuzzybisim_ffi::*;

const A: &str = include_str!("../../core/fixtures/A.json");
const A_PRIME: &str = include_str!("../../core/fixtures/Aprime.json");
const SIM: &str = include_str!("../../core/fixtures/greatest_sim_godel.json");
const ONES: &str = include_str!("../../core/fixtures/approx_all_ones.json");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fb_last_error()) }.to_str().unwrap().to_string()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    fb_string_free(s);
    out
}

struct Fixture {
    a: *mut FbAutomaton,
    b: *mut FbAutomaton,
}

impl Fixture {
    fn new() -> Self {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        unsafe {
            assert_eq!(fb_automaton_from_json(c(A).as_ptr(), &mut a), FbStatus::Ok);
            assert_eq!(fb_automaton_from_json(c(A_PRIME).as_ptr(), &mut b), FbStatus::Ok);
        }
        Fixture { a, b }
    }

    fn relation(json: &str) -> *mut FbRelation {
        let mut r = ptr::null_mut();
        unsafe { assert_eq!(fb_relation_from_json(c(json).as_ptr(), &mut r), FbStatus::Ok) };
        r
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        unsafe {
            fb_automaton_free(self.a);
            fb_automaton_free(self.b);
        }
    }
}

#[test]
fn language_degree() {
    let f = Fixture::new();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            fb_lang_degree(FB_LATTICE_GODEL, f.a, c("s").as_ptr(), &mut out),
            FbStatus::Ok
        );
        assert_eq!(take(out), "7/10");
        assert_eq!(
            fb_lang_degree(FB_LATTICE_GODEL, f.a, c("q").as_ptr(), &mut out),
            FbStatus::InvalidInput
        );
    }
    assert!(last_error().contains("unknown symbol"));
}

#[test]
fn greatest_report() {
    let f = Fixture::new();
    let mut out = ptr::null_mut();
    unsafe {
        let status = fb_greatest(FB_LATTICE_PRODUCT, FB_KIND_SIMULATION, f.a, f.b, 1000, &mut out);
        assert_eq!(status, FbStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(report["norm"], "3/4");
        assert_eq!(report["converged"], true);

        let status = fb_greatest(FB_LATTICE_GODEL, FB_KIND_SIMULATION, f.a, f.b, 1, &mut out);
        assert_eq!(status, FbStatus::NotConverged);
        let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(report["converged"], false);
    }
}

#[test]
fn checks_and_norms() {
    let f = Fixture::new();
    let sim = Fixture::relation(SIM);
    let ones = Fixture::relation(ONES);
    unsafe {
        assert_eq!(
            fb_check(FB_LATTICE_GODEL, FB_KIND_SIMULATION, f.a, f.b, sim, false),
            FbStatus::Ok
        );
        assert_eq!(
            fb_check(FB_LATTICE_GODEL, FB_KIND_SIMULATION, f.a, f.b, sim, true),
            FbStatus::PropertyFailed
        );
        assert_eq!(
            fb_check(FB_LATTICE_GODEL, FB_KIND_BISIMULATION, f.a, f.b, sim, false),
            FbStatus::PropertyFailed
        );

        let lambda = c("3/5");
        assert_eq!(
            fb_check_approx(FB_LATTICE_GODEL, FB_KIND_BISIMULATION, f.a, f.b, ones, lambda.as_ptr()),
            FbStatus::Ok
        );
        assert_eq!(
            fb_check_approx(FB_LATTICE_PRODUCT, FB_KIND_SIMULATION, f.a, f.b, ones, lambda.as_ptr()),
            FbStatus::NotHeyting
        );

        let mut out = ptr::null_mut();
        assert_eq!(
            fb_norm(FB_LATTICE_GODEL, FB_KIND_SIMULATION, f.a, f.b, sim, &mut out),
            FbStatus::Ok
        );
        assert_eq!(take(out), "3/5");
        assert_eq!(
            fb_max_lambda(FB_LATTICE_GODEL, FB_KIND_SIMULATION, f.a, f.b, 100, &mut out),
            FbStatus::Ok
        );
        assert_eq!(take(out), "3/5");

        fb_relation_free(sim);
        fb_relation_free(ones);
    }
}

#[test]
fn formula_evaluation() {
    let f = Fixture::new();
    let mut out = ptr::null_mut();
    unsafe {
        let formula = c("<s> (0.7 -> T)");
        assert_eq!(
            fb_eval_formula(FB_LATTICE_GODEL, f.a, formula.as_ptr(), &mut out),
            FbStatus::Ok
        );
        let values: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(values["u"], "4/5");
        let bad = c("<s>");
        assert_eq!(
            fb_eval_formula(FB_LATTICE_GODEL, f.a, bad.as_ptr(), &mut out),
            FbStatus::InvalidInput
        );
    }
}

#[test]
fn bad_arguments() {
    let f = Fixture::new();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            fb_lang_degree(FB_LATTICE_GODEL, ptr::null(), c("s").as_ptr(), &mut out),
            FbStatus::NullPointer
        );
        assert_eq!(
            fb_lang_degree(7, f.a, c("s").as_ptr(), &mut out),
            FbStatus::InvalidInput
        );
        assert!(last_error().contains("lattice"));
        assert_eq!(
            fb_greatest(FB_LATTICE_GODEL, 9, f.a, f.b, 10, &mut out),
            FbStatus::InvalidInput
        );
        assert_eq!(
            fb_lang_degree(FB_LATTICE_GODEL, f.a, c("s").as_ptr(), ptr::null_mut()),
            FbStatus::NullPointer
        );
        let mut a = ptr::null_mut();
        assert_eq!(fb_automaton_from_json(c("{}").as_ptr(), &mut a), FbStatus::InvalidInput);
        assert!(a.is_null());
        fb_string_free(ptr::null_mut());
        fb_automaton_free(ptr::null_mut());
    }
    // success clears the message
    unsafe {
        assert_eq!(
            fb_lang_degree(FB_LATTICE_GODEL, f.a, c("s").as_ptr(), &mut out),
            FbStatus::Ok
        );
        fb_string_free(out);
    }
    assert_eq!(last_error(), "");
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/fuzzybisim.h");
    let source = include_str!("../src/lib.rs");
    for line in source.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(header.contains(&format!("{name}(")), "{name} missing from header");
        }
    }
}
