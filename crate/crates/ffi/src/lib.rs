//! C ABI over `netclosure`.
//!
//! Objects are opaque handles released with their `*_free` function. Every
//! fallible call returns an [`NcStatus`]; on failure a message is available
//! from [`nc_last_error`] until the next call on the same thread. Vertex
//! sets cross the boundary as bit masks (bit `v` set means `v` is a member).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::json;

use netclosure::{netcode, reduce, solvegraph, ClosureOp, Digraph, Error, NetworkInstance, VertexSet};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    TooLarge = 4,
    InvalidArgument = 5,
    /// Input violates a structural rule such as network shape or strong connectivity.
    Domain = 6,
    Panic = 7,
}

/// A digraph on at most 24 vertices.
pub struct NcDigraph(Digraph);

/// A closure operator on at most 16 elements.
pub struct NcClosure(ClosureOp);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> NcStatus {
    match e {
        Error::Parse { .. } => NcStatus::Parse,
        Error::TooLarge { .. } => NcStatus::TooLarge,
        Error::InvalidArgument(_) | Error::VertexOutOfRange { .. } | Error::GroundSetMismatch { .. } => {
            NcStatus::InvalidArgument
        }
        _ => NcStatus::Domain,
    }
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard<F>(f: F) -> NcStatus
where
    F: FnOnce() -> Result<(), NcFailure>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NcStatus::Ok,
        Ok(Err(NcFailure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            NcStatus::Panic
        }
    }
}

struct NcFailure(NcStatus, String);

impl From<Error> for NcFailure {
    fn from(e: Error) -> Self {
        NcFailure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> NcFailure {
    NcFailure(NcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, NcFailure> {
    if p.is_null() {
        return Err(null("text"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| NcFailure(NcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, NcFailure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), NcFailure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses the `digraph <n>` text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_digraph_parse(text_: *const c_char, out: *mut *mut NcDigraph) -> NcStatus {
    guard(|| {
        let d: Digraph = text(text_)?.parse()?;
        put(out, Box::into_raw(Box::new(NcDigraph(d))))
    })
}

/// # Safety
/// `d` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nc_digraph_free(d: *mut NcDigraph) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_digraph_order(d: *const NcDigraph, out: *mut usize) -> NcStatus {
    guard(|| put(out, get(d, "digraph")?.0.n()))
}

/// Maximum induced acyclic subgraph size.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_digraph_mias(d: *const NcDigraph, out: *mut usize) -> NcStatus {
    guard(|| put(out, get(d, "digraph")?.0.mias()))
}

/// Minimum feedback vertex set size, which is the rank of the D-closure.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_digraph_rank(d: *const NcDigraph, out: *mut usize) -> NcStatus {
    guard(|| put(out, get(d, "digraph")?.0.rank()))
}

/// Removes the useless part of a strongly connected digraph and reports the
/// surviving vertices as a mask.
///
/// # Safety
/// `d` must be a live handle and `kept` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_digraph_reduce(d: *const NcDigraph, kept: *mut u32) -> NcStatus {
    guard(|| {
        let r = reduce::remove_useless_part(&get(d, "digraph")?.0)?;
        put(kept, r.kept.bits())
    })
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_closure_from_digraph(d: *const NcDigraph, out: *mut *mut NcClosure) -> NcStatus {
    guard(|| {
        let cl = ClosureOp::from_digraph(&get(d, "digraph")?.0)?;
        put(out, Box::into_raw(Box::new(NcClosure(cl))))
    })
}

/// Parses the `closure <n>` text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_closure_parse(text_: *const c_char, out: *mut *mut NcClosure) -> NcStatus {
    guard(|| {
        let cl: ClosureOp = text(text_)?.parse()?;
        put(out, Box::into_raw(Box::new(NcClosure(cl))))
    })
}

/// # Safety
/// `cl` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nc_closure_free(cl: *mut NcClosure) {
    if !cl.is_null() {
        drop(Box::from_raw(cl));
    }
}

/// # Safety
/// `cl` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_closure_order(cl: *const NcClosure, out: *mut usize) -> NcStatus {
    guard(|| put(out, get(cl, "closure")?.0.n()))
}

/// # Safety
/// `cl` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_closure_rank(cl: *const NcClosure, out: *mut usize) -> NcStatus {
    guard(|| put(out, get(cl, "closure")?.0.rank()))
}

/// Closure of the set with mask `set`.
///
/// # Safety
/// `cl` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_closure_apply(cl: *const NcClosure, set: u32, out: *mut u32) -> NcStatus {
    guard(|| {
        let cl = &get(cl, "closure")?.0;
        let x = VertexSet::from_bits(set);
        if !x.is_subset(cl.ground()) {
            return Err(NcFailure(
                NcStatus::InvalidArgument,
                format!("mask {set:#x} has members outside 0..{}", cl.n()),
            ));
        }
        put(out, cl.apply(x).bits())
    })
}

/// Independence number of the solvability graph over `q` symbols.
///
/// # Safety
/// `cl` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_alpha(cl: *const NcClosure, q: usize, out: *mut u64) -> NcStatus {
    guard(|| {
        let a = solvegraph::alpha(&get(cl, "closure")?.0, q)?;
        put(out, a.alpha as u64)
    })
}

/// # Safety
/// `cl` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_is_solvable(cl: *const NcClosure, q: usize, out: *mut bool) -> NcStatus {
    guard(|| {
        let s = solvegraph::is_solvable(&get(cl, "closure")?.0, q)?;
        put(out, s.solvable)
    })
}

/// Solves a network given as JSON and returns the certificate JSON, to be
/// released with [`nc_string_free`].
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_solve_network_json(json: *const c_char, q: usize, out: *mut *mut c_char) -> NcStatus {
    guard(|| {
        let net = NetworkInstance::from_json(text(json)?)?;
        let sol = netcode::solve_network(&net, q)?;
        let mut value = match &sol.solvability {
            Some(s) => s.certificate_json(),
            None => json!({ "alpha": null, "rank": sol.rank, "q": q, "solvable": false }),
        };
        value["r"] = json!(sol.r);
        value["obstruction"] = json!(sol.obstruction);
        value["verified"] = json!(sol.coding_function().map(|f| netcode::verify_network_solution(
            &net,
            f,
            q,
            netcode::DecodeMode::Permutation
        )));
        let s = CString::new(value.to_string()).expect("JSON has no nul bytes");
        put(out, s.into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
