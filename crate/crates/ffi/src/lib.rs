//! C ABI over `freegroup`.
//!
//! Every function returns an [`FgStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read with
//! [`fg_last_error_message`]. Strings returned by the library are owned by the
//! caller and released with [`fg_string_free`]; graphs with [`fg_graph_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use freegroup::certifier::{certify, CertParams};
use freegroup::stallings::fiber_product;
use freegroup::whitehead::minimize;
use freegroup::{Alphabet, Error, ReducedWord, StallingsGraph};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    Panic = 5,
}

/// Opaque subgroup graph.
pub struct FgGraph {
    inner: StallingsGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(FgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::GraphFormat(_) | Error::LetterOutOfRange { .. } | Error::Json(_) => {
                FgStatus::Parse
            }
            _ => FgStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside freegroup".into());
            FgStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(FgStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

unsafe fn graph<'a>(g: *const FgGraph, what: &str) -> Result<&'a StallingsGraph, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null(what))
}

unsafe fn words(k: usize, gens: *const *const c_char, count: usize) -> Result<(Alphabet, Vec<ReducedWord>), Failure> {
    let alphabet = Alphabet::new(k)?;
    if count > 0 && gens.is_null() {
        return Err(null("gens"));
    }
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let t = text(*gens.add(i), "generator")?;
        out.push(ReducedWord::parse(alphabet, t)?);
    }
    Ok((alphabet, out))
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn fg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Freely reduces `word` over `F_k`.
///
/// # Safety
/// `word` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_reduce(k: usize, word: *const c_char, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        let w = ReducedWord::parse(Alphabet::new(k)?, text(word, "word")?)?;
        write(out, owned_string(w.to_string()), "out")
    })
}

/// Minimal cyclic length of `word` over its automorphism orbit.
///
/// # Safety
/// `word` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_minimal_length(k: usize, word: *const c_char, out: *mut usize) -> FgStatus {
    guard(|| {
        let w = ReducedWord::parse(Alphabet::new(k)?, text(word, "word")?)?;
        let len = if w.is_empty() { 0 } else { minimize(&w)?.0.len() };
        write(out, len, "out")
    })
}

/// Stallings graph of the subgroup generated by `count` words.
///
/// # Safety
/// `gens` must point to `count` nul-terminated strings and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_from_generators(
    k: usize,
    gens: *const *const c_char,
    count: usize,
    out: *mut *mut FgGraph,
) -> FgStatus {
    guard(|| {
        let (alphabet, gens) = words(k, gens, count)?;
        let inner = StallingsGraph::from_generators(alphabet, &gens)?;
        write(out, Box::into_raw(Box::new(FgGraph { inner })), "out")
    })
}

/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_from_json(json: *const c_char, out: *mut *mut FgGraph) -> FgStatus {
    guard(|| {
        let inner = StallingsGraph::from_json(text(json, "json")?)?;
        write(out, Box::into_raw(Box::new(FgGraph { inner })), "out")
    })
}

/// # Safety
/// `g` must be a live graph and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_to_json(g: *const FgGraph, out: *mut *mut c_char) -> FgStatus {
    guard(|| write(out, owned_string(graph(g, "graph")?.to_json()), "out"))
}

/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_free(g: *mut FgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_rank(g: *const FgGraph, out: *mut usize) -> FgStatus {
    guard(|| write(out, graph(g, "graph")?.rank(), "out"))
}

/// # Safety
/// `g` must be a live graph and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_num_vertices(g: *const FgGraph, out: *mut usize) -> FgStatus {
    guard(|| write(out, graph(g, "graph")?.num_vertices(), "out"))
}

/// Membership of `word` in the subgroup.
///
/// # Safety
/// `g` must be a live graph, `word` nul-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_contains(g: *const FgGraph, word: *const c_char, out: *mut bool) -> FgStatus {
    guard(|| {
        let g = graph(g, "graph")?;
        let w = ReducedWord::parse(g.alphabet(), text(word, "word")?)?;
        write(out, g.contains(&w), "out")
    })
}

/// # Safety
/// `g` must be a live graph and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_is_malnormal(g: *const FgGraph, out: *mut bool) -> FgStatus {
    guard(|| write(out, graph(g, "graph")?.is_malnormal(), "out"))
}

/// Graph of the intersection of two subgroups.
///
/// # Safety
/// `a` and `b` must be live graphs and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_intersect(a: *const FgGraph, b: *const FgGraph, out: *mut *mut FgGraph) -> FgStatus {
    guard(|| {
        let (a, b) = (graph(a, "left")?, graph(b, "right")?);
        let base = fiber_product(a, b)?
            .into_iter()
            .find(|c| c.basepointed)
            .expect("the basepointed component is always returned");
        let inner = base.to_graph(a);
        write(out, Box::into_raw(Box::new(FgGraph { inner })), "out")
    })
}

/// Runs the certificate with default parameters; writes the JSON report and
/// the verdict.
///
/// # Safety
/// `gens` must point to `count` nul-terminated strings; `report` and
/// `certified` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fg_certify(
    k: usize,
    gens: *const *const c_char,
    count: usize,
    report: *mut *mut c_char,
    certified: *mut bool,
) -> FgStatus {
    guard(|| {
        if report.is_null() || certified.is_null() {
            return Err(null("out"));
        }
        let (alphabet, gens) = words(k, gens, count)?;
        let r = certify(alphabet, &gens, &CertParams::default())?;
        write(certified, r.is_certified(), "certified")?;
        write(report, owned_string(r.to_json_pretty()), "report")
    })
}
