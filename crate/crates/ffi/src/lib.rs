//! C interface to `pellrep`.
//!
//! Every fallible call returns a [`PrStatus`]; on failure a message is kept
//! per thread and read with [`pr_last_error_message`]. Reports are opaque
//! handles released with [`pr_report_free`]; strings handed out with
//! ownership are released with [`pr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use pellrep::linforms::derive_initial_bounds;
use pellrep::repdigits::decompose;
use pellrep::sequences::term;
use pellrep::solver::{solve, SolverReport};
use pellrep::{ConcatRepdigit, Error, Precision, SequenceKind};

/// Smallest accepted precision cap; `0` selects the default.
pub const PR_MIN_PRECISION_CAP: u32 = 256;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidBase = 3,
    /// The integer has no two-block representation.
    NotFound = 4,
    /// Index out of range.
    OutOfRange = 5,
    /// A certified evaluation or reduction failed.
    ComputationFailed = 6,
    /// A reduced bound did not beat the assumed lower bound on `n`.
    ReductionInsufficient = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrSequence {
    Pell = 0,
    PellLucas = 1,
}

/// Sequences are passed as `uint32_t` holding a [`PrSequence`] value, so an
/// out-of-range value is an error rather than undefined behaviour.
fn sequence_kind(s: u32) -> Result<SequenceKind, PrStatus> {
    match s {
        x if x == PrSequence::Pell as u32 => Ok(SequenceKind::Pell),
        x if x == PrSequence::PellLucas as u32 => Ok(SequenceKind::PellLucas),
        x => Err(fail(PrStatus::InvalidArgument, format!("unknown sequence {x}"))),
    }
}

/// `d1` repeated `l1` times followed by `d2` repeated `l2` times, in base `base`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrRepresentation {
    pub base: u32,
    pub d1: u32,
    pub l1: u32,
    pub d2: u32,
    pub l2: u32,
}

impl From<ConcatRepdigit> for PrRepresentation {
    fn from(r: ConcatRepdigit) -> Self {
        PrRepresentation {
            base: r.b,
            d1: r.d1,
            l1: r.l1,
            d2: r.d2,
            l2: r.l2,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrSolution {
    pub sequence: u32,
    pub n: u32,
    pub repr: PrRepresentation,
}

/// Opaque solver report.
pub struct PrSolverReport {
    report: SolverReport,
    values: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> PrStatus {
    match e {
        Error::InvalidBase(_) => PrStatus::InvalidBase,
        Error::InvalidParameter(_) | Error::InvalidRepdigit(_) => PrStatus::InvalidArgument,
        Error::ReductionInsufficient { .. } => PrStatus::ReductionInsufficient,
        Error::Instance { source, .. } => status_of(source),
        _ => PrStatus::ComputationFailed,
    }
}

fn fail(status: PrStatus, msg: impl Into<String>) -> PrStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> PrStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning panics into [`PrStatus::Panic`].
fn guard(f: impl FnOnce() -> PrStatus) -> PrStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(PrStatus::Panic, msg)
        }
    }
}

fn precision(cap: u32) -> Result<Precision, PrStatus> {
    match cap {
        0 => Ok(Precision::default()),
        c if c < PR_MIN_PRECISION_CAP => Err(fail(
            PrStatus::InvalidArgument,
            format!("precision cap must be 0 or at least {PR_MIN_PRECISION_CAP}"),
        )),
        c => Ok(Precision::with_cap(c)),
    }
}

fn give_string(s: String, out: *mut *mut c_char) -> PrStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: callers check `out` for null first.
            unsafe { *out = c.into_raw() };
            PrStatus::Ok
        }
        Err(e) => fail(PrStatus::ComputationFailed, e.to_string()),
    }
}

/// Solves for one sequence over `base_min..=base_max` and stores a new
/// report in `*out`. `precision_cap` is in bits; `0` for the default.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn pr_solve(
    sequence: u32,
    base_min: u32,
    base_max: u32,
    precision_cap: u32,
    out: *mut *mut PrSolverReport,
) -> PrStatus {
    guard(|| {
        if out.is_null() {
            return fail(PrStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let p = match precision(precision_cap) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let kind = match sequence_kind(sequence) {
            Ok(k) => k,
            Err(s) => return s,
        };
        match solve(kind, base_min..=base_max, &p) {
            Ok(report) => {
                let values = report
                    .solutions
                    .iter()
                    .map(|s| CString::new(s.value.to_string()).expect("digits"))
                    .collect();
                *out = Box::into_raw(Box::new(PrSolverReport { report, values }));
                PrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `report` must come from [`pr_solve`] and not be freed; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pr_report_solution_count(report: *const PrSolverReport, out: *mut usize) -> PrStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(PrStatus::NullPointer, "null argument");
        }
        *out = (&*report).report.solutions.len();
        PrStatus::Ok
    })
}

/// # Safety
/// As for [`pr_report_solution_count`].
#[no_mangle]
pub unsafe extern "C" fn pr_report_solution(
    report: *const PrSolverReport,
    index: usize,
    out: *mut PrSolution,
) -> PrStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(PrStatus::NullPointer, "null argument");
        }
        let Some(s) = (&*report).report.solutions.get(index) else {
            return fail(PrStatus::OutOfRange, format!("no solution at index {index}"));
        };
        *out = PrSolution {
            sequence: match s.kind {
                SequenceKind::Pell => PrSequence::Pell as u32,
                SequenceKind::PellLucas => PrSequence::PellLucas as u32,
            },
            n: s.n,
            repr: s.repr.into(),
        };
        PrStatus::Ok
    })
}

/// Decimal value of solution `index`, owned by the report; null if out of
/// range.
///
/// # Safety
/// `report` must come from [`pr_solve`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn pr_report_solution_value(report: *const PrSolverReport, index: usize) -> *const c_char {
    if report.is_null() {
        set_error("report is null");
        return ptr::null();
    }
    match (&*report).values.get(index) {
        Some(v) => v.as_ptr(),
        None => {
            set_error(format!("no solution at index {index}"));
            ptr::null()
        }
    }
}

/// Full report as JSON; free with [`pr_string_free`].
///
/// # Safety
/// `report` must come from [`pr_solve`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pr_report_to_json(report: *const PrSolverReport, out: *mut *mut c_char) -> PrStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(PrStatus::NullPointer, "null argument");
        }
        match serde_json::to_string(&(&*report).report) {
            Ok(s) => give_string(s, out),
            Err(e) => fail(PrStatus::ComputationFailed, e.to_string()),
        }
    })
}

/// # Safety
/// `report` must come from [`pr_solve`] or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn pr_report_free(report: *mut PrSolverReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Two-block decomposition of the decimal integer `n` in `base`.
/// [`PrStatus::NotFound`] when there is none.
///
/// # Safety
/// `n` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pr_decompose(n: *const c_char, base: u32, out: *mut PrRepresentation) -> PrStatus {
    guard(|| {
        if n.is_null() || out.is_null() {
            return fail(PrStatus::NullPointer, "null argument");
        }
        let Some(value) = CStr::from_ptr(n).to_str().ok().and_then(|s| s.trim().parse::<BigUint>().ok()) else {
            return fail(PrStatus::InvalidArgument, "n is not a non-negative decimal integer");
        };
        if let Err(e) = pellrep::repdigits::check_base(base) {
            return from_error(e);
        }
        match decompose(&value, base) {
            Some(r) => {
                *out = r.into();
                PrStatus::Ok
            }
            None => fail(PrStatus::NotFound, format!("{value} has no two-block form in base {base}")),
        }
    })
}

/// `P_n` or `Q_n` in decimal; free with [`pr_string_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pr_term(sequence: u32, n: u32, out: *mut *mut c_char) -> PrStatus {
    guard(|| {
        if out.is_null() {
            return fail(PrStatus::NullPointer, "out is null");
        }
        match sequence_kind(sequence) {
            Ok(kind) => give_string(term(kind, n).value.to_string(), out),
            Err(s) => s,
        }
    })
}

/// Initial-bound ledger as JSON; free with [`pr_string_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pr_bounds_json(sequence: u32, precision_cap: u32, out: *mut *mut c_char) -> PrStatus {
    guard(|| {
        if out.is_null() {
            return fail(PrStatus::NullPointer, "out is null");
        }
        let p = match precision(precision_cap) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let kind = match sequence_kind(sequence) {
            Ok(k) => k,
            Err(s) => return s,
        };
        match derive_initial_bounds(kind, &p) {
            Ok(ledger) => match serde_json::to_string(&ledger) {
                Ok(s) => give_string(s, out),
                Err(e) => fail(PrStatus::ComputationFailed, e.to_string()),
            },
            Err(e) => from_error(e),
        }
    })
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn pr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn pr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
