use std::ffi::{c_char, CStr, CString};
use std::ptr;

use reflekt_ffi::*;

const A2: &str = "objects: v y\narrows:\n  a: v -> y\n";

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    reflekt_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = reflekt_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

unsafe fn category(src: &str) -> *mut ReflektCategory {
    let mut c = ptr::null_mut();
    assert_eq!(reflekt_category_parse(cstr(src).as_ptr(), 64, &mut c), ReflektStatus::Ok);
    c
}

#[test]
fn categories_and_cones() {
    unsafe {
        let c = category(A2);
        assert_eq!(reflekt_category_num_objects(c), 2);
        assert_eq!(reflekt_category_num_morphisms(c), 3);
        let mut y = 0;
        assert_eq!(reflekt_category_object(c, cstr("y").as_ptr(), &mut y), ReflektStatus::Ok);
        assert!(reflekt_last_error().is_null());
        let mut plus = ptr::null_mut();
        let ys = [y, y];
        assert_eq!(reflekt_category_cone(c, ys.as_ptr(), 2, ReflektDirection::Plus, &mut plus), ReflektStatus::Ok);
        assert_eq!(reflekt_category_num_objects(plus), 3);
        assert_eq!(reflekt_category_num_morphisms(plus), 3 + 1 + 4);
        let mut d = ptr::null_mut();
        assert_eq!(reflekt_category_separate(c, ys.as_ptr(), 2, ReflektDirection::Minus, &mut d), ReflektStatus::Ok);
        assert_eq!(reflekt_category_num_objects(d), 2 + 2 + 1);
        let mut text = ptr::null_mut();
        assert_eq!(reflekt_category_text(plus, &mut text), ReflektStatus::Ok);
        assert!(take(text).starts_with("objects:"));
        let mut n = 0;
        assert_eq!(reflekt_category_hom_size(c, 0, 1, &mut n), ReflektStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(reflekt_category_hom_size(c, 0, 9, &mut n), ReflektStatus::OutOfRange);
        reflekt_category_free(d);
        reflekt_category_free(plus);
        reflekt_category_free(c);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut c = ptr::null_mut();
        let bad = cstr("objects: a\narrows:\n  f: a -> b\n");
        assert_eq!(reflekt_category_parse(bad.as_ptr(), 64, &mut c), ReflektStatus::Parse);
        assert!(c.is_null());
        assert!(last_error().contains("line 3"));
        assert_eq!(reflekt_category_parse(ptr::null(), 64, &mut c), ReflektStatus::NullArgument);
        assert_eq!(reflekt_category_parse(bad.as_ptr(), 64, ptr::null_mut()), ReflektStatus::NullArgument);
        let c = category(A2);
        let ys = [5usize];
        let mut out = ptr::null_mut();
        assert_eq!(reflekt_category_cone(c, ys.as_ptr(), 1, ReflektDirection::Minus, &mut out), ReflektStatus::OutOfRange);
        let mut v = ReflektVerdict::Pass;
        assert_eq!(reflekt_run_suite(cstr("none").as_ptr(), 0, 0, &mut v, ptr::null_mut()), ReflektStatus::Usage);
        reflekt_category_free(c);
        reflekt_category_free(ptr::null_mut());
        reflekt_string_free(ptr::null_mut());
    }
}

#[test]
fn amalgam_words() {
    let span = "category W\nobjects: p q\ncategory X\nobjects: 0 1\narrows:\n  u: 0 -> 1\n\
                category Y\nobjects: 0 1\narrows:\n  u: 0 -> 1\n\
                functor fx: W -> X\n  obj p = 0\n  obj q = 1\nfunctor fy: W -> Y\n  obj p = 0\n  obj q = 1\n";
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(reflekt_amalgam_parse(cstr(span).as_ptr(), 64, &mut a), ReflektStatus::Ok);
        let mut z = ptr::null_mut();
        assert_eq!(reflekt_amalgam_category(a, &mut z), ReflektStatus::Ok);
        assert_eq!(reflekt_category_num_morphisms(z), 4);
        let mut v = ReflektVerdict::Unknown;
        assert_eq!(reflekt_amalgam_equal(a, cstr("X:u").as_ptr(), cstr("Y:u").as_ptr(), 4, &mut v), ReflektStatus::Ok);
        assert_eq!(v, ReflektVerdict::Fail);
        assert_eq!(reflekt_amalgam_equal(a, cstr("X:u").as_ptr(), cstr("X:u").as_ptr(), 4, &mut v), ReflektStatus::Ok);
        assert_eq!(v, ReflektVerdict::Pass);
        assert_eq!(reflekt_amalgam_equal(a, cstr("Z:u").as_ptr(), cstr("X:u").as_ptr(), 4, &mut v), ReflektStatus::Usage);
        reflekt_category_free(z);
        reflekt_amalgam_free(a);
    }
}

#[test]
fn reflection_matches_the_library() {
    use reflekt::cli::{load_category, write_crep};
    use reflekt::field::PrimeField;
    use reflekt::homotopy::ReflectionData;
    use reflekt::random::{instance_rng, random_complex};

    let lib = load_category(A2, 64).unwrap();
    let rd = ReflectionData::new(&lib, &[1]).unwrap();
    let f = PrimeField::new(5).unwrap();
    let x = random_complex(&rd.minus.cat, &f, -1, 1, 2, &mut instance_rng(11, 0)).unwrap();
    let crep = write_crep(&x);
    let expected = write_crep(&rd.reflect_minus(&x).unwrap());
    unsafe {
        let c = category(A2);
        let ys = [1usize];
        let mut out = ptr::null_mut();
        let status = reflekt_reflect(c, ys.as_ptr(), 1, ReflektDirection::Minus, cstr(&crep).as_ptr(), &mut out);
        assert_eq!(status, ReflektStatus::Ok);
        assert_eq!(take(out), expected);
        reflekt_category_free(c);
    }
}

#[test]
fn suites_run_through_the_interface() {
    unsafe {
        let mut v = ReflektVerdict::Fail;
        let mut json = ptr::null_mut();
        assert_eq!(reflekt_run_suite(cstr("r-table").as_ptr(), 0, 0, &mut v, &mut json), ReflektStatus::Ok);
        assert_eq!(v, ReflektVerdict::Pass);
        let body: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(body["suite"], "r-table");
        let version = CStr::from_ptr(reflekt_version()).to_str().unwrap();
        assert_eq!(version, env!("CARGO_PKG_VERSION"));
    }
}
