//! C ABI over the symlift core.
//!
//! Handles are opaque; structured results cross the boundary as JSON in the
//! same formats the command line writes. Status codes follow the same
//! contract as the process exit codes: 0 success, 1 a check failed, 2 the
//! lift is obstructed, 3 bad input. Failing calls leave a message readable
//! through `symlift_last_error` until the same thread makes its next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symlift::error::Error;
use symlift::io;
use symlift::lifting::{lift_region, verify, LiftOptions, LiftResult};
use symlift::regions::SampledRegion;

/// Outcome of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymliftStatus {
    Ok = 0,
    CheckFailed = 1,
    Obstructed = 2,
    InvalidInput = 3,
}

/// A parsed and validated sampled region.
pub struct SymliftRegion {
    inner: SampledRegion,
}

/// A computed lift of some region.
pub struct SymliftLift {
    inner: LiftResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl std::fmt::Display) {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(text).unwrap()));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn error_status(e: &Error) -> SymliftStatus {
    match e {
        Error::Holonomy { .. } | Error::ConflictingSheet { .. } => SymliftStatus::Obstructed,
        _ => SymliftStatus::InvalidInput,
    }
}

fn fail(status: SymliftStatus, msg: impl std::fmt::Display) -> SymliftStatus {
    set_error(msg);
    status
}

/// Runs a body, translating panics into `InvalidInput` instead of unwinding
/// across the ABI.
fn guarded(f: impl FnOnce() -> SymliftStatus) -> SymliftStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SymliftStatus::InvalidInput, "internal panic"),
    }
}

/// # Safety
/// `p` must be null or a NUL-terminated string valid for the call.
unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, String> {
    if p.is_null() {
        return Err("null string argument".into());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| format!("argument is not UTF-8: {e}"))
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> Result<(), String> {
    let c = CString::new(text).map_err(|_| "text contains an embedded NUL".to_string())?;
    *out = c.into_raw();
    Ok(())
}

/// Version tag written into every JSON document.
#[no_mangle]
pub extern "C" fn symlift_format_version() -> u32 {
    io::FORMAT_VERSION
}

/// Parses a region document into a handle. On success stores a new region
/// in `*out_region`; the caller releases it with `symlift_region_free`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_region` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symlift_region_from_json(
    json: *const c_char,
    out_region: *mut *mut SymliftRegion,
) -> SymliftStatus {
    guarded(|| {
        if out_region.is_null() {
            return fail(SymliftStatus::InvalidInput, "null output argument");
        }
        *out_region = ptr::null_mut();
        let text = match str_arg(json) {
            Ok(t) => t,
            Err(e) => return fail(SymliftStatus::InvalidInput, e),
        };
        let parsed = io::parse_region_file(text).and_then(|f| io::build_region(&f, None));
        match parsed {
            Ok(region) => {
                *out_region = Box::into_raw(Box::new(SymliftRegion { inner: region }));
                SymliftStatus::Ok
            }
            Err(e) => fail(error_status(&e), e),
        }
    })
}

/// Serializes a region handle back to its document form.
///
/// # Safety
/// `region` must come from `symlift_region_from_json` and `out_json` must be
/// a valid pointer; release the string with `symlift_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symlift_region_to_json(
    region: *const SymliftRegion,
    out_json: *mut *mut c_char,
) -> SymliftStatus {
    guarded(|| {
        if region.is_null() || out_json.is_null() {
            return fail(SymliftStatus::InvalidInput, "null argument");
        }
        *out_json = ptr::null_mut();
        let doc = io::region_file_of(&(*region).inner);
        match put_string(out_json, io::to_json(&doc)) {
            Ok(()) => SymliftStatus::Ok,
            Err(e) => fail(SymliftStatus::InvalidInput, e),
        }
    })
}

/// Points per tuple, or 0 for a null handle.
///
/// # Safety
/// `region` must be null or a live region handle.
#[no_mangle]
pub unsafe extern "C" fn symlift_region_m(region: *const SymliftRegion) -> usize {
    if region.is_null() {
        return 0;
    }
    (*region).inner.m()
}

/// Grid nodes, or 0 for a null handle.
///
/// # Safety
/// `region` must be null or a live region handle.
#[no_mangle]
pub unsafe extern "C" fn symlift_region_nodes(region: *const SymliftRegion) -> usize {
    if region.is_null() {
        return 0;
    }
    (*region).inner.grid().len()
}

/// Releases a region handle. Null is allowed.
///
/// # Safety
/// `region` must be null or a live region handle, and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn symlift_region_free(region: *mut SymliftRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

/// Lifts a region. `Ok` stores a new lift in `*out_lift` (release with
/// `symlift_lift_free`); `Obstructed` means the region admits no coherent
/// lift and the message names the failing edge.
///
/// # Safety
/// `region` must be a live region handle and `out_lift` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symlift_lift_compute(
    region: *const SymliftRegion,
    out_lift: *mut *mut SymliftLift,
) -> SymliftStatus {
    guarded(|| {
        if region.is_null() || out_lift.is_null() {
            return fail(SymliftStatus::InvalidInput, "null argument");
        }
        *out_lift = ptr::null_mut();
        match lift_region(&(*region).inner, &LiftOptions::default()) {
            Ok(lift) => {
                *out_lift = Box::into_raw(Box::new(SymliftLift { inner: lift }));
                SymliftStatus::Ok
            }
            Err(e) => fail(error_status(&e), e),
        }
    })
}

/// Lifted nodes, or 0 for a null handle.
///
/// # Safety
/// `lift` must be null or a live lift handle.
#[no_mangle]
pub unsafe extern "C" fn symlift_lift_nodes(lift: *const SymliftLift) -> usize {
    if lift.is_null() {
        return 0;
    }
    (*lift).inner.tuples.len()
}

/// Matching decisions settled by the lexicographic tie rule.
///
/// # Safety
/// `lift` must be null or a live lift handle.
#[no_mangle]
pub unsafe extern "C" fn symlift_lift_tie_breaks(lift: *const SymliftLift) -> u64 {
    if lift.is_null() {
        return 0;
    }
    (*lift).inner.diagnostics.tie_breaks
}

/// Largest per-edge total displacement of the lift.
///
/// # Safety
/// `lift` must be null or a live lift handle.
#[no_mangle]
pub unsafe extern "C" fn symlift_lift_max_step(lift: *const SymliftLift) -> f64 {
    if lift.is_null() {
        return 0.0;
    }
    (*lift).inner.diagnostics.max_step_displacement
}

/// Reads one coordinate of the lifted tuple at `node`: position indexes the
/// tuple, `axis` the coordinate. Fails for label-valued regions and for any
/// index out of range.
///
/// # Safety
/// `lift` must be a live lift handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symlift_lift_coord(
    lift: *const SymliftLift,
    node: usize,
    position: usize,
    axis: usize,
    out_value: *mut f64,
) -> SymliftStatus {
    guarded(|| {
        if lift.is_null() || out_value.is_null() {
            return fail(SymliftStatus::InvalidInput, "null argument");
        }
        let tuples = &(*lift).inner.tuples;
        let Some(tuple) = tuples.get(node) else {
            return fail(
                SymliftStatus::InvalidInput,
                format!("node {node} out of range ({} nodes)", tuples.len()),
            );
        };
        if position >= tuple.m() {
            return fail(
                SymliftStatus::InvalidInput,
                format!("position {position} out of range (m = {})", tuple.m()),
            );
        }
        match tuple.get(position).as_coords() {
            Some(coords) => match coords.get(axis) {
                Some(v) => {
                    *out_value = *v;
                    SymliftStatus::Ok
                }
                None => fail(
                    SymliftStatus::InvalidInput,
                    format!("axis {axis} out of range ({} axes)", coords.len()),
                ),
            },
            None => fail(SymliftStatus::InvalidInput, "point carries no coordinates"),
        }
    })
}

/// Checks a lift against its region and writes the full lift document,
/// verification checks included. Returns `CheckFailed` when a check fails;
/// the document is still written.
///
/// # Safety
/// `region` and `lift` must be live handles from this library and `out_json`
/// a valid pointer; release the string with `symlift_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symlift_lift_to_json(
    region: *const SymliftRegion,
    lift: *const SymliftLift,
    out_json: *mut *mut c_char,
) -> SymliftStatus {
    guarded(|| {
        if region.is_null() || lift.is_null() || out_json.is_null() {
            return fail(SymliftStatus::InvalidInput, "null argument");
        }
        *out_json = ptr::null_mut();
        let region = &(*region).inner;
        let lift = &(*lift).inner;
        let report = match verify(region, &lift.tuples) {
            Ok(r) => r,
            Err(e) => return fail(error_status(&e), e),
        };
        let doc = io::lift_file_of(region, lift, io::checks_of_report(&report));
        if let Err(e) = put_string(out_json, io::to_json(&doc)) {
            return fail(SymliftStatus::InvalidInput, e);
        }
        if report.pass {
            SymliftStatus::Ok
        } else {
            fail(SymliftStatus::CheckFailed, "verification failed")
        }
    })
}

/// Releases a lift handle. Null is allowed.
///
/// # Safety
/// `lift` must be null or a live lift handle, and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn symlift_lift_free(lift: *mut SymliftLift) {
    if !lift.is_null() {
        drop(Box::from_raw(lift));
    }
}

/// One-shot: parses a region document, lifts it, and writes either the lift
/// document (`Ok`, or `CheckFailed` when its own verification fails) or the
/// obstruction document (`Obstructed`).
///
/// # Safety
/// `region_json` must be a NUL-terminated string and `out_json` a valid
/// pointer; release the string with `symlift_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symlift_lift_report_json(
    region_json: *const c_char,
    out_json: *mut *mut c_char,
) -> SymliftStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(SymliftStatus::InvalidInput, "null output argument");
        }
        *out_json = ptr::null_mut();
        let text = match str_arg(region_json) {
            Ok(t) => t,
            Err(e) => return fail(SymliftStatus::InvalidInput, e),
        };
        let region = match io::parse_region_file(text).and_then(|f| io::build_region(&f, None)) {
            Ok(r) => r,
            Err(e) => return fail(error_status(&e), e),
        };
        match lift_region(&region, &LiftOptions::default()) {
            Ok(lift) => {
                let report = match verify(&region, &lift.tuples) {
                    Ok(r) => r,
                    Err(e) => return fail(error_status(&e), e),
                };
                let doc = io::lift_file_of(&region, &lift, io::checks_of_report(&report));
                if let Err(e) = put_string(out_json, io::to_json(&doc)) {
                    return fail(SymliftStatus::InvalidInput, e);
                }
                if report.pass {
                    SymliftStatus::Ok
                } else {
                    fail(SymliftStatus::CheckFailed, "verification failed")
                }
            }
            Err(e @ (Error::Holonomy { .. } | Error::ConflictingSheet { .. })) => {
                let doc = io::obstruction_file_of(&region, &e);
                if let Err(err) = put_string(out_json, io::to_json(&doc)) {
                    return fail(SymliftStatus::InvalidInput, err);
                }
                fail(SymliftStatus::Obstructed, e)
            }
            Err(e) => fail(error_status(&e), e),
        }
    })
}

/// Checks a lift document against a region handle. `Ok` when every check
/// passes, `CheckFailed` otherwise; the message carries the first failing
/// detail.
///
/// # Safety
/// `region` must be a live region handle and `lift_json` a NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn symlift_verify_json(
    region: *const SymliftRegion,
    lift_json: *const c_char,
) -> SymliftStatus {
    guarded(|| {
        if region.is_null() {
            return fail(SymliftStatus::InvalidInput, "null argument");
        }
        let text = match str_arg(lift_json) {
            Ok(t) => t,
            Err(e) => return fail(SymliftStatus::InvalidInput, e),
        };
        let region = &(*region).inner;
        let outcome = io::parse_lift_file(text)
            .and_then(|f| io::build_tuples(&f, region))
            .and_then(|tuples| verify(region, &tuples));
        match outcome {
            Ok(report) if report.pass => SymliftStatus::Ok,
            Ok(report) => {
                let detail = report
                    .checks
                    .iter()
                    .find(|c| !c.pass)
                    .map(|c| format!("{}: {}", c.name, c.detail))
                    .unwrap_or_else(|| "verification failed".into());
                fail(SymliftStatus::CheckFailed, detail)
            }
            Err(e) => fail(error_status(&e), e),
        }
    })
}

/// Writes the partition table document for m.
///
/// # Safety
/// `out_json` must be a valid pointer; release the string with
/// `symlift_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symlift_partitions_json(
    m: usize,
    out_json: *mut *mut c_char,
) -> SymliftStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(SymliftStatus::InvalidInput, "null output argument");
        }
        *out_json = ptr::null_mut();
        match io::partitions_file(m) {
            Ok(doc) => match put_string(out_json, io::to_json(&doc)) {
                Ok(()) => SymliftStatus::Ok,
                Err(e) => fail(SymliftStatus::InvalidInput, e),
            },
            Err(e) => fail(error_status(&e), e),
        }
    })
}

/// Writes the counting document for the discrete q-point base, `CheckFailed`
/// if any of its cross-checks disagree.
///
/// # Safety
/// `out_json` must be a valid pointer; release the string with
/// `symlift_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symlift_count_json(
    q: usize,
    m: usize,
    out_json: *mut *mut c_char,
) -> SymliftStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(SymliftStatus::InvalidInput, "null output argument");
        }
        *out_json = ptr::null_mut();
        let doc = match io::count_file(q, m) {
            Ok(d) => d,
            Err(e) => return fail(error_status(&e), e),
        };
        let ok = doc.checks.iter().all(|c| c.passed());
        if let Err(e) = put_string(out_json, io::to_json(&doc)) {
            return fail(SymliftStatus::InvalidInput, e);
        }
        if ok {
            SymliftStatus::Ok
        } else {
            fail(SymliftStatus::CheckFailed, "cardinality cross-checks disagree")
        }
    })
}

/// Sweeps one registered lemma (or "all") over ground sets up to n points
/// and writes the audit document. `CheckFailed` when any verdict deviates
/// from its registered expectation.
///
/// # Safety
/// `lemma` must be a NUL-terminated string and `out_json` a valid pointer;
/// release the string with `symlift_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symlift_audit_json(
    lemma: *const c_char,
    n: usize,
    out_json: *mut *mut c_char,
) -> SymliftStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(SymliftStatus::InvalidInput, "null output argument");
        }
        *out_json = ptr::null_mut();
        let name = match str_arg(lemma) {
            Ok(t) => t,
            Err(e) => return fail(SymliftStatus::InvalidInput, e),
        };
        use symlift::finitetop::audit::{audit, audit_all};
        let reports = if name == "all" {
            audit_all(n, n.min(3))
        } else {
            audit(name, n).map(|r| vec![r])
        };
        let reports = match reports {
            Ok(r) => r,
            Err(e) => return fail(error_status(&e), e),
        };
        let ok = reports.iter().all(|r| r.verdict == r.expected);
        let doc = io::audit_file_of(n, reports);
        if let Err(e) = put_string(out_json, io::to_json(&doc)) {
            return fail(SymliftStatus::InvalidInput, e);
        }
        if ok {
            SymliftStatus::Ok
        } else {
            fail(SymliftStatus::CheckFailed, "verdicts deviate from the registry")
        }
    })
}

/// Message from the calling thread's most recent failing call, or null.
/// Valid until that thread's next call into this library.
#[no_mangle]
pub extern "C" fn symlift_last_error() -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(msg) => msg.as_ptr(),
        None => ptr::null(),
    })
}

/// Releases a string produced by this library. Null is allowed.
///
/// # Safety
/// `s` must be null or a string returned by this library, and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn symlift_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
