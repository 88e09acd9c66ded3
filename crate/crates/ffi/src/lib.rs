//! C interface to `fuzzybisim`.
//!
//! Automata and relations live behind opaque handles created from JSON and
//! released with the matching `_free` function. Every fallible call returns
//! an [`FbStatus`]; on failure `fb_last_error` describes what went wrong.
//! Strings handed out by the library are owned by the caller and must be
//! released with [`fb_string_free`]. Degrees cross the boundary as exact
//! rational strings such as `"7/10"`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fuzzybisim::automata::{lang_degree, FuzzyAutomaton, Word};
use fuzzybisim::hmlogic::{eval_formula, Formula};
use fuzzybisim::simrel::{self, RelationKind};
use fuzzybisim::{Degree, Error, FuzzyRelation, LatticeKind};

pub const FB_LATTICE_GODEL: u32 = 0;
pub const FB_LATTICE_LUKASIEWICZ: u32 = 1;
pub const FB_LATTICE_PRODUCT: u32 = 2;

pub const FB_KIND_SIMULATION: u32 = 0;
pub const FB_KIND_BISIMULATION: u32 = 1;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FbStatus {
    Ok = 0,
    /// The call ran but the checked property does not hold.
    PropertyFailed = 1,
    InvalidInput = 2,
    NotConverged = 3,
    NullPointer = 4,
    /// Approximate relations were requested over a non-Gödel lattice.
    NotHeyting = 5,
    Panic = 6,
}

/// Opaque automaton handle.
pub struct FbAutomaton(FuzzyAutomaton);

/// Opaque relation handle.
pub struct FbRelation(FuzzyRelation);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let mut bytes = message.into().into_bytes();
    bytes.retain(|b| *b != 0);
    let text = CString::new(bytes).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(FbStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match err {
            Error::NotConverged { .. } => FbStatus::NotConverged,
            Error::NotHeyting => FbStatus::NotHeyting,
            _ => FbStatus::InvalidInput,
        };
        Failure(status, err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FbStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any failure or panic for `fb_last_error`.
fn guard(body: impl FnOnce() -> Result<FbStatus, Failure>) -> FbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => {
            set_error("");
            status
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FbStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(FbStatus::InvalidInput, format!("{what}: {e}")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn lattice(code: u32) -> Result<LatticeKind, Failure> {
    match code {
        FB_LATTICE_GODEL => Ok(LatticeKind::Goedel),
        FB_LATTICE_LUKASIEWICZ => Ok(LatticeKind::Lukasiewicz),
        FB_LATTICE_PRODUCT => Ok(LatticeKind::Product),
        other => Err(Failure(FbStatus::InvalidInput, format!("unknown lattice code {other}"))),
    }
}

fn kind(code: u32) -> Result<RelationKind, Failure> {
    match code {
        FB_KIND_SIMULATION => Ok(RelationKind::Simulation),
        FB_KIND_BISIMULATION => Ok(RelationKind::Bisimulation),
        other => Err(Failure(
            FbStatus::InvalidInput,
            format!("unknown relation kind code {other}"),
        )),
    }
}

unsafe fn give_string(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let s = CString::new(value).map_err(|e| Failure(FbStatus::InvalidInput, e.to_string()))?;
    *out = s.into_raw();
    Ok(())
}

/// Message describing the last failure on this thread; empty after a
/// successful call. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn fb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn fb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an automaton from its JSON description.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fb_automaton_from_json(json: *const c_char, out: *mut *mut FbAutomaton) -> FbStatus {
    guard(|| {
        let json = text(json, "json")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let a = FuzzyAutomaton::from_json(json)?;
        *out = Box::into_raw(Box::new(FbAutomaton(a)));
        Ok(FbStatus::Ok)
    })
}

/// # Safety
/// `a` must come from `fb_automaton_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fb_automaton_free(a: *mut FbAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Parses a relation from its JSON array form.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fb_relation_from_json(json: *const c_char, out: *mut *mut FbRelation) -> FbStatus {
    guard(|| {
        let json = text(json, "json")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let r = FuzzyRelation::from_json(json)?;
        *out = Box::into_raw(Box::new(FbRelation(r)));
        Ok(FbStatus::Ok)
    })
}

/// # Safety
/// `r` must come from `fb_relation_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fb_relation_free(r: *mut FbRelation) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Degree to which `a` accepts `word` (symbols separated by spaces or
/// commas), written to `out` as a rational string.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free with
/// `fb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fb_lang_degree(
    lattice_code: u32,
    a: *const FbAutomaton,
    word: *const c_char,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| {
        let lat = lattice(lattice_code)?;
        let a = &deref(a, "automaton")?.0;
        let w = Word::parse(text(word, "word")?, a.alphabet())?;
        give_string(out, lang_degree(&lat, a, &w)?.to_string())?;
        Ok(FbStatus::Ok)
    })
}

/// Checks whether `r` is a fuzzy simulation or bisimulation (or, with
/// `crisp` set, a crisp one). Returns `Ok` when it is and `PropertyFailed`
/// when it is not.
///
/// # Safety
/// Pointers must be valid handles.
#[no_mangle]
pub unsafe extern "C" fn fb_check(
    lattice_code: u32,
    kind_code: u32,
    a: *const FbAutomaton,
    b: *const FbAutomaton,
    r: *const FbRelation,
    crisp: bool,
) -> FbStatus {
    guard(|| {
        let lat = lattice(lattice_code)?;
        let (a, b) = (&deref(a, "left automaton")?.0, &deref(b, "right automaton")?.0);
        let r = &deref(r, "relation")?.0;
        let holds = match (kind(kind_code)?, crisp) {
            (RelationKind::Simulation, false) => simrel::check_fuzzy_simulation(&lat, a, b, r)?,
            (RelationKind::Simulation, true) => simrel::check_crisp_simulation(&lat, a, b, r)?,
            (RelationKind::Bisimulation, false) => simrel::check_fuzzy_bisimulation(&lat, a, b, r)?,
            (RelationKind::Bisimulation, true) => simrel::check_crisp_bisimulation(&lat, a, b, r)?,
        };
        Ok(if holds { FbStatus::Ok } else { FbStatus::PropertyFailed })
    })
}

/// Checks whether `r` is a λ-approximate simulation or bisimulation, with
/// `lambda` a rational string. Gödel lattice only.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fb_check_approx(
    lattice_code: u32,
    kind_code: u32,
    a: *const FbAutomaton,
    b: *const FbAutomaton,
    r: *const FbRelation,
    lambda: *const c_char,
) -> FbStatus {
    guard(|| {
        let lat = lattice(lattice_code)?;
        let (a, b) = (&deref(a, "left automaton")?.0, &deref(b, "right automaton")?.0);
        let r = &deref(r, "relation")?.0;
        let lambda: Degree = text(lambda, "lambda")?.parse()?;
        let degree = simrel::approx_degree(&lat, kind(kind_code)?, a, b, r)?;
        Ok(if lambda <= degree {
            FbStatus::Ok
        } else {
            FbStatus::PropertyFailed
        })
    })
}

/// Computes the greatest fuzzy simulation or bisimulation and writes the
/// JSON report (relation, norm, iterations, converged) to `out`. The report
/// is written even when the status is `NotConverged`.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free with
/// `fb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fb_greatest(
    lattice_code: u32,
    kind_code: u32,
    a: *const FbAutomaton,
    b: *const FbAutomaton,
    max_iters: usize,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| {
        let lat = lattice(lattice_code)?;
        let (a, b) = (&deref(a, "left automaton")?.0, &deref(b, "right automaton")?.0);
        let report = simrel::greatest(&lat, kind(kind_code)?, a, b, max_iters);
        let json = serde_json::to_string(&report).expect("reports serialize");
        give_string(out, json)?;
        if report.converged {
            Ok(FbStatus::Ok)
        } else {
            Err(Failure(
                FbStatus::NotConverged,
                format!("no fixpoint within {} sweeps", report.iterations),
            ))
        }
    })
}

/// Norm of `r` as a simulation or bisimulation, as a rational string.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free with
/// `fb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fb_norm(
    lattice_code: u32,
    kind_code: u32,
    a: *const FbAutomaton,
    b: *const FbAutomaton,
    r: *const FbRelation,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| {
        let lat = lattice(lattice_code)?;
        let (a, b) = (&deref(a, "left automaton")?.0, &deref(b, "right automaton")?.0);
        let r = &deref(r, "relation")?.0;
        simrel::validate_relation(a, b, r)?;
        give_string(out, simrel::norm(&lat, kind(kind_code)?, a, b, r).to_string())?;
        Ok(FbStatus::Ok)
    })
}

/// Largest λ admitting a λ-approximate simulation or bisimulation.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free with
/// `fb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fb_max_lambda(
    lattice_code: u32,
    kind_code: u32,
    a: *const FbAutomaton,
    b: *const FbAutomaton,
    max_iters: usize,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| {
        let lat = lattice(lattice_code)?;
        let (a, b) = (&deref(a, "left automaton")?.0, &deref(b, "right automaton")?.0);
        let lambda = simrel::max_approx_lambda(&lat, kind(kind_code)?, a, b, max_iters)?;
        give_string(out, lambda.to_string())?;
        Ok(FbStatus::Ok)
    })
}

/// Evaluates a formula on every state; writes a JSON object mapping state
/// names to degrees (states with degree 0 are omitted).
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free with
/// `fb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fb_eval_formula(
    lattice_code: u32,
    a: *const FbAutomaton,
    formula: *const c_char,
    out: *mut *mut c_char,
) -> FbStatus {
    guard(|| {
        let lat = lattice(lattice_code)?;
        let a = &deref(a, "automaton")?.0;
        let f: Formula = text(formula, "formula")?.parse()?;
        let values = eval_formula(&lat, a, &f)?;
        give_string(out, serde_json::to_string(&values).expect("sets serialize"))?;
        Ok(FbStatus::Ok)
    })
}
