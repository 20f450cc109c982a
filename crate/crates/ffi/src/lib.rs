//! C ABI over `earcomb`.
//!
//! Instances are opaque handles released with [`earcomb_instance_free`].
//! Strings handed out by the library belong to the caller and are released
//! with [`earcomb_string_free`]. Every call returns an [`EarcombStatus`]; on
//! failure [`earcomb_last_error`] describes it until the next call on the
//! same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde::Deserialize;

use earcomb::combinat::{dominates, RankSet};
use earcomb::complex::{SimplicialComplex, Vertex};
use earcomb::geomlat::{Matroid, MatroidJson};
use earcomb::pipeline::{verify_artifact, Instance};
use earcomb::report::{Artifact, StoredArtifact};
use earcomb::Error;

/// Result of every call. The first three match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EarcombStatus {
    Ok = 0,
    /// The computation ran but a certificate or check failed.
    CertificateFailed = 1,
    InvalidInput = 2,
    NullPointer = 3,
    /// The output buffer is too short; the needed length was written.
    BufferTooSmall = 4,
    Panic = 5,
}

/// A poset with its Boolean pieces, ready to decompose.
pub struct EarcombInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(EarcombStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status =
            if e.is_certificate_failure() { EarcombStatus::CertificateFailed } else { EarcombStatus::InvalidInput };
        Failure(status, e.to_string())
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(EarcombStatus::InvalidInput, message.into())
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<EarcombStatus, Failure>) -> EarcombStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EarcombStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(EarcombStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Failure> {
    match (p.is_null(), len) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(null()),
        (false, _) => Ok(std::slice::from_raw_parts(p, len)),
    }
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

/// Nulls an output pointer so callers never see a stale value on failure.
unsafe fn clear<T>(out: *mut *mut T) {
    if !out.is_null() {
        out.write(ptr::null_mut());
    }
}

unsafe fn put_string(out: *mut *mut c_char, json: &impl serde::Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string(json).map_err(|e| invalid(e.to_string()))?;
    put(out, CString::new(s).expect("JSON has no nul bytes").into_raw())
}

unsafe fn put_instance(
    out: *mut *mut EarcombInstance,
    inner: Result<Instance, Error>,
) -> Result<EarcombStatus, Failure> {
    clear(out);
    if out.is_null() {
        return Err(null());
    }
    put(out, Box::into_raw(Box::new(EarcombInstance { inner: inner? })))?;
    Ok(EarcombStatus::Ok)
}

/// Complex JSON `{"vertices": [...], "facets": [[...], ...]}` with facets
/// in shelling order.
#[derive(Deserialize)]
struct ComplexJson {
    vertices: Vec<Vertex>,
    facets: Vec<Vec<Vertex>>,
}

fn parse<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| invalid(e.to_string()))
}

fn load_complex(json: &str) -> Result<(SimplicialComplex, Vec<Vec<Vertex>>), Failure> {
    let file: ComplexJson = parse(json)?;
    let facets: Vec<Vec<Vertex>> = file
        .facets
        .into_iter()
        .map(|mut f| {
            f.sort_unstable();
            f
        })
        .collect();
    let k = SimplicialComplex::with_vertices(file.vertices, facets.iter().cloned()).map_err(Error::from)?;
    Ok((k, facets))
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn earcomb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn earcomb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the Boolean lattice `B_d` as a single piece.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn earcomb_boolean(d: usize, out: *mut *mut EarcombInstance) -> EarcombStatus {
    guard(|| put_instance(out, Instance::boolean(d)))
}

/// Builds the lattice of flats of a matroid given as
/// `{"ground": n, "bases": [[...], ...]}` with 1-based elements.
///
/// # Safety
/// `matroid_json` must be a nul-terminated string; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn earcomb_geometric(
    matroid_json: *const c_char,
    out: *mut *mut EarcombInstance,
) -> EarcombStatus {
    guard(|| {
        let json: MatroidJson = parse(text(matroid_json)?)?;
        put_instance(out, Matroid::from_json(&json).map_err(Error::from).and_then(|m| Instance::geometric(&m)))
    })
}

/// Builds the face poset of a complex whose facets are listed in shelling
/// order.
///
/// # Safety
/// `complex_json` must be a nul-terminated string; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn earcomb_faceposet(
    complex_json: *const c_char,
    out: *mut *mut EarcombInstance,
) -> EarcombStatus {
    guard(|| {
        let (k, order) = load_complex(text(complex_json)?)?;
        put_instance(out, Instance::faceposet(&k, &order))
    })
}

/// Releases an instance. NULL is ignored.
///
/// # Safety
/// `instance` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn earcomb_instance_free(instance: *mut EarcombInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Rank of the ambient poset, or 0 for NULL.
///
/// # Safety
/// `instance` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn earcomb_instance_d(instance: *const EarcombInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.d())
}

/// Decomposes `Δ(P_S)` for the rank set `s[0..s_len]`, or for every nonempty
/// rank set when `s_len` is 0, and writes the JSON report to `out_json`.
/// Returns `CertificateFailed` with the report written when a check fails.
///
/// # Safety
/// `instance` must be a live handle, `s` valid for `s_len` reads and
/// `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn earcomb_decompose(
    instance: *const EarcombInstance,
    s: *const usize,
    s_len: usize,
    out_json: *mut *mut c_char,
) -> EarcombStatus {
    clear(out_json);
    guard(|| {
        let inst = &instance.as_ref().ok_or_else(null)?.inner;
        let sets = if s_len == 0 {
            inst.nonempty_rank_sets()
        } else {
            vec![RankSet::new(inst.d(), slice(s, s_len)?.iter().copied()).map_err(Error::from)?]
        };
        let runs = sets.iter().map(|s| inst.decompose(s)).collect::<Result<Vec<_>, _>>()?;
        let artifact = Artifact::new(inst.source.clone(), inst.prechecks.clone(), runs);
        put_string(out_json, &artifact)?;
        Ok(if artifact.passed { EarcombStatus::Ok } else { EarcombStatus::CertificateFailed })
    })
}

/// Re-checks the ears of a report produced by [`earcomb_decompose`] and
/// writes the per-run certificate reports to `out_json`.
///
/// # Safety
/// `artifact_json` must be a nul-terminated string; `out_json` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn earcomb_verify(artifact_json: *const c_char, out_json: *mut *mut c_char) -> EarcombStatus {
    clear(out_json);
    guard(|| {
        let stored: StoredArtifact = parse(text(artifact_json)?)?;
        let runs: Vec<_> = verify_artifact(stored)?.into_iter().map(|(_, r)| r).collect();
        let passed = runs.iter().all(|r| r.passed());
        put_string(out_json, &serde_json::json!({ "runs": runs, "passed": passed }))?;
        Ok(if passed { EarcombStatus::Ok } else { EarcombStatus::CertificateFailed })
    })
}

unsafe fn write_vector(v: &[i64], buf: *mut i64, cap: usize, len: *mut usize) -> Result<EarcombStatus, Failure> {
    put(len, v.len())?;
    if cap < v.len() {
        return Ok(EarcombStatus::BufferTooSmall);
    }
    if !v.is_empty() {
        if buf.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
    }
    Ok(EarcombStatus::Ok)
}

/// Writes `(f_{-1}, f_0, ..., f_{d-1})` of a complex to `buf` and its length
/// to `len`. Pass `cap` 0 to query the length.
///
/// # Safety
/// `complex_json` must be a nul-terminated string, `buf` valid for `cap`
/// writes and `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn earcomb_f_vector(
    complex_json: *const c_char,
    buf: *mut i64,
    cap: usize,
    len: *mut usize,
) -> EarcombStatus {
    guard(|| {
        let (k, _) = load_complex(text(complex_json)?)?;
        write_vector(&k.f_vector().map_err(Error::from)?, buf, cap, len)
    })
}

/// Writes `(h_0, ..., h_d)` of a pure complex, as [`earcomb_f_vector`].
///
/// # Safety
/// As for [`earcomb_f_vector`].
#[no_mangle]
pub unsafe extern "C" fn earcomb_h_vector(
    complex_json: *const c_char,
    buf: *mut i64,
    cap: usize,
    len: *mut usize,
) -> EarcombStatus {
    guard(|| {
        let (k, _) = load_complex(text(complex_json)?)?;
        write_vector(&k.h_vector().map_err(Error::from)?, buf, cap, len)
    })
}

/// Writes whether `S` dominates `T` as subsets of `[d-1]`.
///
/// # Safety
/// `t` and `s` must be valid for `t_len` and `s_len` reads; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn earcomb_dominates(
    d: usize,
    t: *const usize,
    t_len: usize,
    s: *const usize,
    s_len: usize,
    out: *mut bool,
) -> EarcombStatus {
    guard(|| {
        let t = RankSet::new(d, slice(t, t_len)?.iter().copied()).map_err(Error::from)?;
        let s = RankSet::new(d, slice(s, s_len)?.iter().copied()).map_err(Error::from)?;
        put(out, dominates(&t, &s).map_err(Error::from)?.dominates)?;
        Ok(EarcombStatus::Ok)
    })
}
