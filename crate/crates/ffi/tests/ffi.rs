use std::ffi::{c_char, CStr, CString};
use std::ptr;

use freegroup_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    fg_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(fg_last_error_message()).to_str().unwrap().to_string()
}

#[test]
fn reduce_and_minimize() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(fg_reduce(2, c("abBA").as_ptr(), &mut out), FgStatus::Ok);
        assert_eq!(take(out), "1");
        let mut len = 0;
        assert_eq!(fg_minimal_length(2, c("abab").as_ptr(), &mut len), FgStatus::Ok);
        assert_eq!(len, 2);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(fg_reduce(2, ptr::null(), &mut out), FgStatus::NullPointer);
        assert_eq!(fg_reduce(2, c("a?").as_ptr(), &mut out), FgStatus::Parse);
        assert!(last_error().contains('?'));
        assert_eq!(fg_reduce(0, c("a").as_ptr(), &mut out), FgStatus::Invalid);
        let bad = [0x61u8, 0xff, 0];
        assert_eq!(fg_reduce(2, bad.as_ptr() as *const c_char, &mut out), FgStatus::InvalidUtf8);
        assert_eq!(fg_reduce(2, c("a").as_ptr(), ptr::null_mut()), FgStatus::NullPointer);
    }
}

#[test]
fn graph_handles() {
    unsafe {
        let gens = [c("a"), c("bab")];
        let ptrs: Vec<*const c_char> = gens.iter().map(|s| s.as_ptr()).collect();
        let mut g = ptr::null_mut();
        assert_eq!(fg_graph_from_generators(2, ptrs.as_ptr(), 2, &mut g), FgStatus::Ok);
        let mut rank = 0;
        assert_eq!(fg_graph_rank(g, &mut rank), FgStatus::Ok);
        assert_eq!(rank, 2);
        let mut yes = false;
        assert_eq!(fg_graph_contains(g, c("baBA").as_ptr(), &mut yes), FgStatus::Ok);
        assert!(!yes);
        assert_eq!(fg_graph_contains(g, c("ab").as_ptr(), &mut yes), FgStatus::Ok);
        assert!(!yes);
        assert_eq!(fg_graph_contains(g, c("babA").as_ptr(), &mut yes), FgStatus::Ok);
        assert!(yes);
        assert_eq!(fg_graph_is_malnormal(g, &mut yes), FgStatus::Ok);

        let mut json = ptr::null_mut();
        assert_eq!(fg_graph_to_json(g, &mut json), FgStatus::Ok);
        let text = c(&take(json));
        let mut h = ptr::null_mut();
        assert_eq!(fg_graph_from_json(text.as_ptr(), &mut h), FgStatus::Ok);
        let mut n1 = 0;
        let mut n2 = 0;
        fg_graph_num_vertices(g, &mut n1);
        fg_graph_num_vertices(h, &mut n2);
        assert_eq!(n1, n2);

        let squares = [c("aa"), c("b")];
        let sp: Vec<*const c_char> = squares.iter().map(|s| s.as_ptr()).collect();
        let mut s = ptr::null_mut();
        fg_graph_from_generators(2, sp.as_ptr(), 2, &mut s);
        let mut meet = ptr::null_mut();
        assert_eq!(fg_graph_intersect(g, s, &mut meet), FgStatus::Ok);
        assert_eq!(fg_graph_contains(meet, c("aa").as_ptr(), &mut yes), FgStatus::Ok);
        assert!(yes);
        assert_eq!(fg_graph_contains(meet, c("a").as_ptr(), &mut yes), FgStatus::Ok);
        assert!(!yes);

        assert_eq!(fg_graph_from_json(c("{").as_ptr(), &mut h), FgStatus::Parse);
        assert_eq!(fg_graph_rank(ptr::null(), &mut rank), FgStatus::NullPointer);
        for x in [g, h, s, meet] {
            fg_graph_free(x);
        }
        fg_graph_free(ptr::null_mut());
    }
}

#[test]
fn certify_report() {
    unsafe {
        let gens = [c("aab"), c("abbb")];
        let ptrs: Vec<*const c_char> = gens.iter().map(|s| s.as_ptr()).collect();
        let mut report = ptr::null_mut();
        let mut certified = true;
        assert_eq!(fg_certify(2, ptrs.as_ptr(), 2, &mut report, &mut certified), FgStatus::Ok);
        assert!(!certified);
        assert!(take(report).contains("\"verdict\": \"inconclusive\""));
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/freegroup.h")).unwrap();
    for name in ["fg_reduce", "fg_graph_from_generators", "fg_graph_free", "fg_certify", "fg_last_error_message", "FG_STATUS_PANIC"] {
        assert!(header.contains(name), "{name}");
    }
    assert!(header.contains("typedef struct FgGraph FgGraph"));
}
