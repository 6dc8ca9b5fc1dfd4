//! C ABI for the romlift laboratory.
//!
//! Handles are opaque pointers created and destroyed by the paired
//! `*_parse`/`*_by_name` and `*_free` functions. Every fallible call returns
//! an [`RlStatus`]; on anything other than `RL_STATUS_OK` the thread-local
//! message from [`rl_last_error`] describes what went wrong. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! must be released with [`rl_string_free`]. Structured results cross the
//! boundary as JSON documents.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use romlift::engine::QueryCircuit;
use romlift::lift::lifting_report;
use romlift::oracle::{format_oracle_text, parse_oracle_text_total, Oracle};
use romlift::prg::ClassicalPrg;
use romlift::pseudodet::sim_oracle;
use romlift::{fixtures, prg, Error, Mode};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// Input text failed to parse (oracle file, circuit JSON, name syntax).
    Parse = 3,
    /// An exact enumeration would exceed the configured budget.
    Budget = 4,
    /// No built-in object has the requested name.
    UnknownName = 5,
    /// The inputs are structurally valid but inconsistent (signature
    /// mismatch, bad parameters, failed contract).
    Invalid = 6,
    /// The library panicked; this is a bug worth reporting.
    Panic = 7,
}

/// An oracle handle: a total function on a small bit-string domain.
pub struct RlOracle {
    inner: Oracle,
}

/// A quantum query circuit handle.
pub struct RlCircuit {
    inner: QueryCircuit,
}

/// A built-in classical PRG handle.
pub struct RlPrg {
    inner: Box<dyn ClassicalPrg>,
}

thread_local! {
    static LAST_ERROR: std::cell::RefCell<Option<CString>> =
        const { std::cell::RefCell::new(None) };
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn status_of(err: &Error) -> RlStatus {
    match err {
        Error::Parse { .. } | Error::Json(_) => RlStatus::Parse,
        Error::BudgetExceeded { .. } => RlStatus::Budget,
        Error::UnknownName(_) => RlStatus::UnknownName,
        _ => RlStatus::Invalid,
    }
}

fn guard(body: impl FnOnce() -> RlStatus) -> RlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            RlStatus::Panic
        }
    }
}

/// Read a UTF-8 string argument; records an error status on failure.
///
/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, RlStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(RlStatus::NullArgument);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(text) => Ok(text),
        Err(_) => {
            set_error("argument is not valid UTF-8");
            Err(RlStatus::Utf8)
        }
    }
}

fn write_string(out: *mut *mut c_char, text: String) -> RlStatus {
    if out.is_null() {
        set_error("null output pointer");
        return RlStatus::NullArgument;
    }
    let owned = match CString::new(text) {
        Ok(owned) => owned,
        Err(_) => {
            set_error("result contained an interior NUL byte");
            return RlStatus::Invalid;
        }
    };
    unsafe { *out = owned.into_raw() };
    RlStatus::Ok
}

/// The library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn rl_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// The message for the most recent error on this thread, or null. The
/// caller owns the returned string and must free it with
/// [`rl_string_free`].
#[no_mangle]
pub extern "C" fn rl_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(message) => message.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `ptr` must be null or a pointer previously returned by a `char **`
/// out-parameter or [`rl_last_error`], and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rl_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(unsafe { CString::from_raw(ptr) });
    }
}

/// Parse an oracle from the line-oriented text format
/// (`n=<int> m=<int>` header, then `x_bits -> y_bits` lines covering every
/// point).
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_oracle_parse(text: *const c_char, out: *mut *mut RlOracle) -> RlStatus {
    guard(|| {
        let text = match unsafe { read_str(text) } {
            Ok(text) => text,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("null output pointer");
            return RlStatus::NullArgument;
        }
        match parse_oracle_text_total(text) {
            Ok(oracle) => {
                unsafe { *out = Box::into_raw(Box::new(RlOracle { inner: oracle })) };
                RlStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Render an oracle in the text format.
///
/// # Safety
/// `oracle` must be a live handle from [`rl_oracle_parse`]; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_oracle_format(
    oracle: *const RlOracle,
    out: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let Some(oracle) = (unsafe { oracle.as_ref() }) else {
            set_error("null oracle handle");
            return RlStatus::NullArgument;
        };
        write_string(out, format_oracle_text(&oracle.inner.graph()))
    })
}

/// Release an oracle handle.
///
/// # Safety
/// `oracle` must be null or a live handle, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rl_oracle_free(oracle: *mut RlOracle) {
    if !oracle.is_null() {
        drop(unsafe { Box::from_raw(oracle) });
    }
}

/// Parse a circuit from the JSON format.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_circuit_parse_json(
    json: *const c_char,
    out: *mut *mut RlCircuit,
) -> RlStatus {
    guard(|| {
        let text = match unsafe { read_str(json) } {
            Ok(text) => text,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("null output pointer");
            return RlStatus::NullArgument;
        }
        match QueryCircuit::from_json_str(text) {
            Ok(circuit) => {
                unsafe { *out = Box::into_raw(Box::new(RlCircuit { inner: circuit })) };
                RlStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Render a circuit as JSON.
///
/// # Safety
/// `circuit` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_circuit_to_json(
    circuit: *const RlCircuit,
    out: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let Some(circuit) = (unsafe { circuit.as_ref() }) else {
            set_error("null circuit handle");
            return RlStatus::NullArgument;
        };
        write_string(out, circuit.inner.to_json_string())
    })
}

/// Release a circuit handle.
///
/// # Safety
/// `circuit` must be null or a live handle, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rl_circuit_free(circuit: *mut RlCircuit) {
    if !circuit.is_null() {
        drop(unsafe { Box::from_raw(circuit) });
    }
}

/// Look up a built-in classical PRG (`g_id`, `g_xp2`, `g_const`).
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_prg_by_name(name: *const c_char, out: *mut *mut RlPrg) -> RlStatus {
    guard(|| {
        let name = match unsafe { read_str(name) } {
            Ok(name) => name,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("null output pointer");
            return RlStatus::NullArgument;
        }
        match prg::by_name(name) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(RlPrg { inner })) };
                RlStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Release a PRG handle.
///
/// # Safety
/// `prg` must be null or a live handle, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rl_prg_free(prg: *mut RlPrg) {
    if !prg.is_null() {
        drop(unsafe { Box::from_raw(prg) });
    }
}

/// Exact measurement distribution of a circuit run against an oracle, as a
/// JSON object mapping output bit strings to probabilities.
///
/// # Safety
/// `circuit` and `oracle` must be live handles; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_output_distribution_json(
    circuit: *const RlCircuit,
    oracle: *const RlOracle,
    out: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let (Some(circuit), Some(oracle)) =
            (unsafe { circuit.as_ref() }, unsafe { oracle.as_ref() })
        else {
            set_error("null handle");
            return RlStatus::NullArgument;
        };
        match romlift::engine::output_distribution(&circuit.inner, &oracle.inner) {
            Ok(dist) => {
                let width = circuit.inner.output_bits();
                let map: serde_json::Map<String, serde_json::Value> = dist
                    .support()
                    .iter()
                    .map(|(value, p)| {
                        (
                            romlift::bits::format_bits(*value, width),
                            serde_json::json!(p),
                        )
                    })
                    .collect();
                write_string(out, serde_json::Value::Object(map).to_string())
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Exact distinguishing advantage of a built-in distinguisher against a
/// PRG handle.
///
/// # Safety
/// `prg` must be a live handle; `distinguisher` a valid string; `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_prg_advantage(
    prg: *const RlPrg,
    distinguisher: *const c_char,
    budget: u64,
    out: *mut f64,
) -> RlStatus {
    guard(|| {
        let Some(prg) = (unsafe { prg.as_ref() }) else {
            set_error("null prg handle");
            return RlStatus::NullArgument;
        };
        let name = match unsafe { read_str(distinguisher) } {
            Ok(name) => name,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("null output pointer");
            return RlStatus::NullArgument;
        }
        let result = fixtures::distinguisher_for(
            name,
            prg.inner.oracle_n(),
            prg.inner.oracle_m(),
            prg.inner.output_bits(),
        )
        .and_then(|dist| {
            romlift::experiment::prg_advantage(&dist, prg.inner.as_ref(), Mode::Exact { budget })
        });
        match result {
            Ok(advantage) => {
                unsafe { *out = advantage };
                RlStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Full lifting report for a PRG handle and a built-in distinguisher, as
/// JSON. Pass a negative `eps` to tune against the measured quantum
/// advantage.
///
/// # Safety
/// `prg` must be a live handle; `distinguisher` a valid string; `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_lift_report_json(
    prg: *const RlPrg,
    distinguisher: *const c_char,
    eps: f64,
    budget: u64,
    out: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let Some(prg) = (unsafe { prg.as_ref() }) else {
            set_error("null prg handle");
            return RlStatus::NullArgument;
        };
        let name = match unsafe { read_str(distinguisher) } {
            Ok(name) => name,
            Err(status) => return status,
        };
        let eps_target = if eps < 0.0 { None } else { Some(eps) };
        let result = fixtures::distinguisher_for(
            name,
            prg.inner.oracle_n(),
            prg.inner.oracle_m(),
            prg.inner.output_bits(),
        )
        .and_then(|dist| {
            lifting_report(
                &dist,
                prg.inner.as_ref(),
                eps_target,
                Mode::Exact { budget },
            )
        });
        match result {
            Ok(report) => write_string(
                out,
                serde_json::to_string(&report).expect("serializable report"),
            ),
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Simulate a circuit's oracle dependence classically: learn enough of the
/// oracle to reproduce the canonical output. Returns JSON with the query
/// count, the per-stage trace and the simulated oracle.
///
/// # Safety
/// `circuit` and `oracle` must be live handles; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_sim_oracle_json(
    circuit: *const RlCircuit,
    oracle: *const RlOracle,
    delta: f64,
    out: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let (Some(circuit), Some(oracle)) =
            (unsafe { circuit.as_ref() }, unsafe { oracle.as_ref() })
        else {
            set_error("null handle");
            return RlStatus::NullArgument;
        };
        match sim_oracle(&circuit.inner, &oracle.inner, delta) {
            Ok(outcome) => write_string(
                out,
                serde_json::json!({
                    "queries": outcome.queries,
                    "steps": outcome.trace,
                    "simulated_oracle": format_oracle_text(&outcome.oracle.graph()),
                })
                .to_string(),
            ),
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Run a named verification suite (`lemmas`, `lift`, `pseudodet`, `all`)
/// and return its checks as JSON. `passed` is set to 1 when every check
/// passed.
///
/// # Safety
/// `suite` must be a valid NUL-terminated string; `out` and `passed` must
/// be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rl_verify_suite_json(
    suite: *const c_char,
    seed: u64,
    trials: u64,
    budget: u64,
    passed: *mut i32,
    out: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let name = match unsafe { read_str(suite) } {
            Ok(name) => name,
            Err(status) => return status,
        };
        if passed.is_null() {
            set_error("null output pointer");
            return RlStatus::NullArgument;
        }
        match romlift::suite::suite_by_name(name, seed, trials, Mode::Exact { budget }) {
            Ok(checks) => {
                let ok = checks.iter().all(|c| c.pass);
                unsafe { *passed = i32::from(ok) };
                write_string(
                    out,
                    serde_json::to_string(&checks).expect("serializable checks"),
                )
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}
