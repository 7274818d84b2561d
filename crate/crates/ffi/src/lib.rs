//! C ABI over `pmp-core`.
//!
//! Every entry point returns a [`PmpStatus`]; on failure the message is kept
//! in a thread-local slot readable through [`pmp_last_error_message`].
//! Handles are opaque and must be released with their `_free` function.
//! Strings handed out by the library are released with [`pmp_string_free`].
//! Rationals cross the boundary as `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pmp_core::action::{action_distance, Word};
use pmp_core::conjugacy::{approximate_conjugacy, verify_witness, ConjugacyWitness, Mode};
use pmp_core::format::{parse_action, serialize_action, ActionDocument};
use pmp_core::irs::{empirical_irs, irs_equal, EmpiricalIRS};
use pmp_core::rational::{fmt_q, parse_q};
use pmp_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DomainMismatch = 4,
    InvalidSpace = 5,
    InvalidPermutation = 6,
    WeightMismatch = 7,
    SplitMismatch = 8,
    InvalidEdgeSet = 9,
    InvarianceViolation = 10,
    Resource = 11,
    IrsMismatch = 12,
    Precondition = 13,
    NoIsomorphism = 14,
    BudgetExceeded = 15,
    Internal = 16,
    InvalidArgument = 17,
    Panic = 99,
}

impl From<&Error> for PmpStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DomainMismatch(_) => PmpStatus::DomainMismatch,
            Error::InvalidSpace(_) => PmpStatus::InvalidSpace,
            Error::InvalidPermutation(_) => PmpStatus::InvalidPermutation,
            Error::WeightMismatch { .. } => PmpStatus::WeightMismatch,
            Error::SplitMismatch { .. } => PmpStatus::SplitMismatch,
            Error::InvalidEdgeSet(_) => PmpStatus::InvalidEdgeSet,
            Error::InvarianceViolation { .. } => PmpStatus::InvarianceViolation,
            Error::Resource { .. } => PmpStatus::Resource,
            Error::IrsMismatch { .. } => PmpStatus::IrsMismatch,
            Error::Precondition(_) => PmpStatus::Precondition,
            Error::NoIsomorphism(_) => PmpStatus::NoIsomorphism,
            Error::BudgetExceeded { .. } => PmpStatus::BudgetExceeded,
            Error::Internal(_) => PmpStatus::Internal,
            Error::Parse { .. } => PmpStatus::Parse,
        }
    }
}

/// How [`pmp_conjugacy`] chooses the cut.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmpModeKind {
    /// No cut; fails unless the actions are conjugate.
    Exact = 0,
    /// Decompose with components of at most `bound` atoms.
    Bound = 1,
    /// Keep the error below `epsilon`; `bound` 0 means unbounded.
    Epsilon = 2,
}

/// A parsed action document.
pub struct PmpAction {
    doc: ActionDocument,
}

/// An empirical IRS.
pub struct PmpIrs {
    irs: EmpiricalIRS,
}

/// A conjugacy witness.
pub struct PmpWitness {
    witness: ConjugacyWitness,
}

struct Failure(PmpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(PmpStatus::from(&e), e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_last_error(msg: Option<String>) {
    LAST_ERROR.with(|s| *s.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PmpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(None);
            PmpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(Some(msg));
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(Some(format!("panic: {msg}")));
            PmpStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PmpStatus::NullArgument, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(PmpStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(PmpStatus::Internal, "string contains a nul byte".into()))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(c_string(s)?);
    Ok(())
}

/// Library version, a static string owned by the library.
#[no_mangle]
pub extern "C" fn pmp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Free with
/// [`pmp_string_free`].
#[no_mangle]
pub extern "C" fn pmp_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|s| match s.borrow().as_ref() {
        Some(m) => CString::new(m.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn pmp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an action document.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_action_parse(text: *const c_char, out: *mut *mut PmpAction) -> PmpStatus {
    guard(|| {
        let doc = parse_action(c_str(text, "text")?)?;
        put(out, Box::into_raw(Box::new(PmpAction { doc })), "out")
    })
}

/// # Safety
/// `a` must be null or a handle from [`pmp_action_parse`], freed at most once.
#[no_mangle]
pub unsafe extern "C" fn pmp_action_free(a: *mut PmpAction) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Canonical text of an action document.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_action_serialize(a: *const PmpAction, out: *mut *mut c_char) -> PmpStatus {
    guard(|| {
        let a = borrow(a, "action")?;
        put_string(out, serialize_action(&a.doc))
    })
}

/// Number of atoms, 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pmp_action_atom_count(a: *const PmpAction) -> usize {
    a.as_ref().map_or(0, |a| a.doc.action.len())
}

/// Number of generators, 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pmp_action_generator_count(a: *const PmpAction) -> usize {
    a.as_ref().map_or(0, |a| a.doc.action.generator_count())
}

/// Uniform distance between two actions on the same space, as `"p/q"`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_uniform_distance(
    a: *const PmpAction,
    b: *const PmpAction,
    out: *mut *mut c_char,
) -> PmpStatus {
    guard(|| {
        let (a, b) = (borrow(a, "left")?, borrow(b, "right")?);
        put_string(out, fmt_q(&action_distance(&a.doc.action, &b.doc.action)?))
    })
}

/// Empirical IRS of an action.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_irs_compute(a: *const PmpAction, out: *mut *mut PmpIrs) -> PmpStatus {
    guard(|| {
        let irs = empirical_irs(&borrow(a, "action")?.doc.action);
        put(out, Box::into_raw(Box::new(PmpIrs { irs })), "out")
    })
}

/// Parse an IRS from its text form.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_irs_from_text(text: *const c_char, out: *mut *mut PmpIrs) -> PmpStatus {
    guard(|| {
        let irs = EmpiricalIRS::from_text(c_str(text, "text")?)?;
        put(out, Box::into_raw(Box::new(PmpIrs { irs })), "out")
    })
}

/// # Safety
/// `irs` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn pmp_irs_free(irs: *mut PmpIrs) {
    if !irs.is_null() {
        drop(Box::from_raw(irs));
    }
}

/// Text form of an IRS, one class per line.
///
/// # Safety
/// `irs` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_irs_to_text(irs: *const PmpIrs, out: *mut *mut c_char) -> PmpStatus {
    guard(|| put_string(out, borrow(irs, "irs")?.irs.to_text()))
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_irs_equal(a: *const PmpIrs, b: *const PmpIrs, out: *mut bool) -> PmpStatus {
    guard(|| {
        let eq = irs_equal(&borrow(a, "left")?.irs, &borrow(b, "right")?.irs);
        put(out, eq, "out")
    })
}

/// Conjugacy witness between two actions with equal IRS, tested on the
/// generators.
///
/// `epsilon` is a `"p/q"` string read only in [`PmpModeKind::Epsilon`].
///
/// # Safety
/// `alpha` and `beta` must be live handles; `epsilon` must be null or a
/// nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_conjugacy(
    alpha: *const PmpAction,
    beta: *const PmpAction,
    kind: PmpModeKind,
    bound: usize,
    epsilon: *const c_char,
    out: *mut *mut PmpWitness,
) -> PmpStatus {
    guard(|| {
        let (a, b) = (&borrow(alpha, "alpha")?.doc.action, &borrow(beta, "beta")?.doc.action);
        let mode = match kind {
            PmpModeKind::Exact => Mode::Exact,
            PmpModeKind::Bound if bound == 0 => {
                return Err(Failure(PmpStatus::InvalidArgument, "bound must be positive".into()))
            }
            PmpModeKind::Bound => Mode::Bound(bound),
            PmpModeKind::Epsilon => {
                let e = c_str(epsilon, "epsilon")?;
                let epsilon = parse_q(e).map_err(|err| Failure(PmpStatus::InvalidArgument, format!("epsilon {e:?}: {err}")))?;
                Mode::Epsilon {
                    epsilon,
                    bound: (bound > 0).then_some(bound),
                }
            }
        };
        let words: Vec<Word> = (0..a.generator_count()).map(Word::generator).collect();
        let witness = approximate_conjugacy(a, b, &words, &mode)?;
        put(out, Box::into_raw(Box::new(PmpWitness { witness })), "out")
    })
}

/// # Safety
/// `w` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn pmp_witness_free(w: *mut PmpWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_witness_to_json(w: *const PmpWitness, out: *mut *mut c_char) -> PmpStatus {
    guard(|| put_string(out, borrow(w, "witness")?.witness.to_json()))
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_witness_from_json(json: *const c_char, out: *mut *mut PmpWitness) -> PmpStatus {
    guard(|| {
        let witness = ConjugacyWitness::from_json(c_str(json, "json")?)?;
        put(out, Box::into_raw(Box::new(PmpWitness { witness })), "out")
    })
}

/// Claimed error bound, as `"p/q"`.
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_witness_bound(w: *const PmpWitness, out: *mut *mut c_char) -> PmpStatus {
    guard(|| put_string(out, fmt_q(&borrow(w, "witness")?.witness.bound)))
}

/// Measure of the recorded error set, as `"p/q"`.
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_witness_error_measure(w: *const PmpWitness, out: *mut *mut c_char) -> PmpStatus {
    guard(|| put_string(out, fmt_q(&borrow(w, "witness")?.witness.error_measure())))
}

/// Recheck a witness against a pair of actions. `passed` receives the
/// verdict; `report`, if not null, receives the JSON report.
///
/// # Safety
/// `w`, `alpha` and `beta` must be live handles; `passed` must be writable;
/// `report` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pmp_witness_verify(
    w: *const PmpWitness,
    alpha: *const PmpAction,
    beta: *const PmpAction,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> PmpStatus {
    guard(|| {
        let w = borrow(w, "witness")?;
        let (a, b) = (borrow(alpha, "alpha")?, borrow(beta, "beta")?);
        let r = verify_witness(&w.witness, &a.doc.action, &b.doc.action, &[]);
        put(passed, r.passed(), "passed")?;
        if !report.is_null() {
            let json = serde_json::to_string(&r).map_err(|e| Failure(PmpStatus::Internal, e.to_string()))?;
            put_string(report, json)?;
        }
        Ok(())
    })
}
