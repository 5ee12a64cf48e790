//! C ABI over the `stublab` library.
//!
//! LSTSs and Petri nets live behind opaque handles. Every other value
//! crosses the boundary as a NUL-terminated UTF-8 JSON string in the same
//! formats the library and the command-line tool use. Functions return a
//! [`StublabStatus`]; on any status other than `Ok` or `Fails` a message is
//! available from [`stublab_last_error_message`] on the calling thread.
//!
//! Strings returned through `out` parameters are owned by the caller and
//! must be released with [`stublab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::{json, Value};
use stublab::models::{self, SuiteConfig};
use stublab::oracle;
use stublab::stubborn::{self, default_bound};
use stublab::{
    build_lsts, Condition, Error, InvisibilityFlags, Limits, Lsts, OracleWitness, PetriNet, ReducedLsts,
    ReductionFunction, Verdict,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StublabStatus {
    /// The call succeeded and every checked property holds (possibly within bounds).
    Ok = 0,
    /// The call succeeded and a checked property fails; the report carries the witness.
    Fails = 1,
    /// Malformed JSON, unknown names or ids, or otherwise invalid input.
    InvalidInput = 2,
    /// A state, closure or enumeration cap was hit before an answer was reached.
    LimitExceeded = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// The library panicked; the handle arguments should be considered unusable.
    Internal = 6,
}

/// Opaque LSTS handle.
pub struct StublabLsts {
    inner: Lsts,
}

/// Opaque Petri net handle.
pub struct StublabNet {
    inner: PetriNet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn guard<F>(f: F) -> StublabStatus
where
    F: FnOnce() -> Result<StublabStatus, Failure>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer passed for {what}"));
            StublabStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_last_error(format!("{what} is not valid UTF-8"));
            StublabStatus::InvalidUtf8
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            if e.is_limit() {
                StublabStatus::LimitExceeded
            } else {
                StublabStatus::InvalidInput
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("internal error: {msg}"));
            StublabStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &'static str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    *out = value;
    Ok(())
}

unsafe fn put_json(out: *mut *mut c_char, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(Error::from)?;
    let c = CString::new(text).map_err(|e| Error::Input(e.to_string()))?;
    put(out, c.into_raw(), "out")
}

fn status_of(report: &Value) -> StublabStatus {
    if report["status"] == "fails" {
        StublabStatus::Fails
    } else {
        StublabStatus::Ok
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Lib(Error::Input(e.to_string()))
}

/// Returns the message of the last failed call on this thread, or null.
/// The pointer stays valid until the next `stublab_*` call on the thread.
#[no_mangle]
pub extern "C" fn stublab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn stublab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an LSTS from its JSON form.
///
/// # Safety
/// `json` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stublab_lsts_from_json(json: *const c_char, out: *mut *mut StublabLsts) -> StublabStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inner = Lsts::from_json_str(text).map_err(Error::from)?;
        put(out, Box::into_raw(Box::new(StublabLsts { inner })), "out")?;
        Ok(StublabStatus::Ok)
    })
}

/// Releases an LSTS handle. Null is ignored.
///
/// # Safety
/// `lsts` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn stublab_lsts_free(lsts: *mut StublabLsts) {
    if !lsts.is_null() {
        drop(Box::from_raw(lsts));
    }
}

/// Serialises an LSTS to JSON.
///
/// # Safety
/// `lsts` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stublab_lsts_to_json(lsts: *const StublabLsts, out: *mut *mut c_char) -> StublabStatus {
    guard(|| {
        let l = handle(lsts, "lsts")?;
        put_json(out, &l.inner.to_json_value())?;
        Ok(StublabStatus::Ok)
    })
}

/// Number of states of an LSTS, or 0 for a null handle.
///
/// # Safety
/// `lsts` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stublab_lsts_num_states(lsts: *const StublabLsts) -> usize {
    lsts.as_ref().map_or(0, |l| l.inner.num_states())
}

/// Number of transitions of an LSTS, or 0 for a null handle.
///
/// # Safety
/// `lsts` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stublab_lsts_num_transitions(lsts: *const StublabLsts) -> usize {
    lsts.as_ref().map_or(0, |l| l.inner.transitions().len())
}

/// Parses a Petri net from its JSON form.
///
/// # Safety
/// `json` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stublab_net_from_json(json: *const c_char, out: *mut *mut StublabNet) -> StublabStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inner = PetriNet::from_json_str(text).map_err(Error::from)?;
        put(out, Box::into_raw(Box::new(StublabNet { inner })), "out")?;
        Ok(StublabStatus::Ok)
    })
}

/// Releases a net handle. Null is ignored.
///
/// # Safety
/// `net` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn stublab_net_free(net: *mut StublabNet) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Builds the reachability LSTS of a net.
///
/// `props_json` may be null for no propositions. `invisibility` is a
/// comma-joined flag list such as `"reach,value"`; null means `"plain"`.
/// A zero `state_cap` or `box_bound` selects 10000 and 6.
///
/// # Safety
/// `net` must be a live handle, string arguments null or valid C strings,
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stublab_net_build_lsts(
    net: *const StublabNet,
    props_json: *const c_char,
    invisibility: *const c_char,
    state_cap: usize,
    box_bound: u32,
    out: *mut *mut StublabLsts,
) -> StublabStatus {
    guard(|| {
        let net = &handle(net, "net")?.inner;
        let props = match opt_str_arg(props_json, "props_json")? {
            Some(text) => stublab::props::props_from_json_str(text, net).map_err(Error::from)?,
            None => Vec::new(),
        };
        let flags: InvisibilityFlags = opt_str_arg(invisibility, "invisibility")?
            .unwrap_or("plain")
            .parse()
            .map_err(input)?;
        let cap = if state_cap == 0 { 10_000 } else { state_cap };
        let bx = if box_bound == 0 { 6 } else { box_bound };
        let built = build_lsts(net, &props, flags, cap, bx).map_err(Error::from)?;
        put(out, Box::into_raw(Box::new(StublabLsts { inner: built.lsts })), "out")?;
        Ok(StublabStatus::Ok)
    })
}

/// Checks one stubborn-set condition at one state.
///
/// `rset_json` is a JSON array of action names, `condition` one of
/// `D0 D1 D1p D2 D2w V I C4`. A zero `bound` selects the default path bound.
/// The report has the shape of the `check` command's result entries.
///
/// # Safety
/// `lsts` must be a live handle, string arguments valid C strings, `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stublab_check_condition(
    lsts: *const StublabLsts,
    state: usize,
    rset_json: *const c_char,
    condition: *const c_char,
    bound: usize,
    out: *mut *mut c_char,
) -> StublabStatus {
    guard(|| {
        let l = &handle(lsts, "lsts")?.inner;
        let names: Vec<String> = serde_json::from_str(str_arg(rset_json, "rset_json")?).map_err(Error::from)?;
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let rset = l.action_set(&refs).map_err(Error::from)?;
        let c: Condition = str_arg(condition, "condition")?.parse().map_err(Error::from)?;
        if state >= l.num_states() {
            return Err(input(format!("state {state} out of range")));
        }
        let bound = if bound == 0 { default_bound(l.num_states()) } else { bound };
        let v = stubborn::check_condition(l, &state, &rset, c, bound).map_err(Error::from)?;
        let report = json!({
            "state": state,
            "state_name": l.state_name(state),
            "set": names,
            "condition": c.to_string(),
            "bound": bound,
            "status": v.status(),
            "summary": v.witness().map(|w| stublab::cli::describe_condition_witness(l, w)),
            "verdict": v,
        });
        put_json(out, &report)?;
        Ok(status_of(&report))
    })
}

/// Builds the reduced LSTS of `lsts` under a reduction function given in
/// its JSON form.
///
/// # Safety
/// `lsts` must be a live handle, `r_json` a valid C string, `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn stublab_reduce(
    lsts: *const StublabLsts,
    r_json: *const c_char,
    out: *mut *mut StublabLsts,
) -> StublabStatus {
    guard(|| {
        let l = &handle(lsts, "lsts")?.inner;
        let r = ReductionFunction::from_json_str(str_arg(r_json, "r_json")?, l).map_err(Error::from)?;
        let red = stubborn::reduce(l, &r).map_err(Error::from)?;
        put(out, Box::into_raw(Box::new(StublabLsts { inner: red.lsts })), "out")?;
        Ok(StublabStatus::Ok)
    })
}

/// Compares a reduced LSTS with the full one. `mode` is one of `stutter`,
/// `weak`, `deadlock` or `labels`; zero limits select 2 and 100000. The
/// reduced LSTS must be a subgraph of the full one, as produced by
/// [`stublab_reduce`].
///
/// # Safety
/// Both handles must be live, `mode` a valid C string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stublab_compare(
    full: *const StublabLsts,
    reduced: *const StublabLsts,
    mode: *const c_char,
    repeat: usize,
    count: usize,
    out: *mut *mut c_char,
) -> StublabStatus {
    guard(|| {
        let l = &handle(full, "full")?.inner;
        let sub = handle(reduced, "reduced")?.inner.clone();
        let red = ReducedLsts::from_subgraph(l, sub).map_err(Error::from)?;
        let mode = str_arg(mode, "mode")?;
        let defaults = Limits::default();
        let limits = Limits {
            repeat: if repeat == 0 { defaults.repeat } else { repeat },
            count: if count == 0 { defaults.count } else { count },
        };
        let mut report = json!({ "mode": mode, "limits": limits });
        let verdict: Verdict<OracleWitness> = match mode {
            "stutter" => oracle::check_stutter_trace_equivalence(l, &red, limits).map_err(Error::from)?,
            "weak" => oracle::check_weak_trace_equivalence(l, &red, l.invisible(), limits).map_err(Error::from)?,
            "deadlock" => {
                let d = oracle::check_deadlock_preservation(l, &red, limits).map_err(Error::from)?;
                report["permutations"] = json!(d.permutations);
                d.verdict
            }
            "labels" => oracle::check_reachable_labellings(l, &red),
            other => return Err(input(format!("unknown comparison mode '{other}'"))),
        };
        report["status"] = json!(verdict.status());
        report["summary"] = json!(verdict.witness().map(|w| stublab::cli::describe_oracle_witness(l, w)));
        if let Some(OracleWitness::Unmatched { witness, .. }) = verdict.witness() {
            report["nostut"] = json!(l.format_trace(&witness.nostut));
        }
        report["verdict"] = json!(verdict);
        put_json(out, &report)?;
        Ok(status_of(&report))
    })
}

/// Runs the bundled model suite. A nonzero `d1_for_d1p` replaces D1p by D1
/// wherever the suite checks D1p.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stublab_run_suite(d1_for_d1p: bool, out: *mut *mut c_char) -> StublabStatus {
    guard(|| {
        let report = models::run_builtin_suite(SuiteConfig { d1p_as_d1: d1_for_d1p }).to_json_value();
        put_json(out, &report)?;
        Ok(status_of(&report))
    })
}
