//! C ABI for the timelot library.
//!
//! Conventions:
//! * Models are opaque handles created from the JSON model format and freed
//!   with `timelot_model_free`.
//! * Every fallible call returns a `TimelotStatus`; on failure a
//!   thread-local message is readable via `timelot_last_error_message`
//!   (valid until the next failing call on the same thread).
//! * Strings returned through `char**` out-parameters are owned by the
//!   caller and must be released with `timelot_string_free`.
//! * Lotteries cross the boundary as JSON (`{"atoms":[{"x":..,"t":..,"p":..}]}`),
//!   matching the CLI file format, and reports come back as JSON documents.

// Pointer arguments are null-checked at every entry point; validity of
// non-null pointers is the C caller's contract.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use timelot::axioms::audit;
use timelot::files::{parse_lottery_json, parse_model_json};
use timelot::models::Model;
use timelot::solvers::{
    find_indifferent_prize, local_radius, time_certainty_equivalent, SolveSettings,
};
use timelot::verdict::{DEFAULT_GRID_N, DEFAULT_SAMPLE_N};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimelotStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON or an unknown key/kind/family.
    Parse = 3,
    /// Parameters or coordinates violate a model constraint.
    InvalidInput = 4,
    /// The operation is not defined for this model or lottery shape.
    Unsupported = 5,
    /// A solver failed to bracket or converge.
    Solver = 6,
    /// No indifference prize exists for the requested shift.
    NoSolution = 7,
    /// A panic was caught at the boundary; state is unspecified.
    Panic = 8,
}

/// Opaque model handle.
pub struct TimelotModel {
    inner: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &timelot::Error) -> TimelotStatus {
    use timelot::Error::*;
    match err {
        Parse(_) | Io(_) => TimelotStatus::Parse,
        EmptySupport
        | ProbabilitySum { .. }
        | OutOfDomain { .. }
        | DomainMismatch
        | InvalidParameter(_)
        | NonPositiveComponent
        | CurvatureDomain(_) => TimelotStatus::InvalidInput,
        NotATimeLottery
        | UnsupportedLotteryShape(_)
        | ModeUnsupported(_)
        | HypothesisFailed { .. } => TimelotStatus::Unsupported,
        NonMonotoneEvaluation(_) | MaxIterExceeded { .. } | Unbracketed => TimelotStatus::Solver,
    }
}

fn fail(err: &timelot::Error) -> TimelotStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Run `f` with panics contained at the ABI boundary.
fn guarded(f: impl FnOnce() -> TimelotStatus) -> TimelotStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            TimelotStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, TimelotStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(TimelotStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        TimelotStatus::InvalidUtf8
    })
}

unsafe fn model_ref<'a>(handle: *const TimelotModel) -> Result<&'a Model, TimelotStatus> {
    if handle.is_null() {
        set_error("null model handle");
        return Err(TimelotStatus::NullArgument);
    }
    Ok(unsafe { &(*handle).inner })
}

fn write_out<T>(out: *mut T, value: T) -> TimelotStatus {
    if out.is_null() {
        set_error("null out-parameter");
        return TimelotStatus::NullArgument;
    }
    unsafe { out.write(value) };
    TimelotStatus::Ok
}

fn default_solve(m: &Model) -> SolveSettings {
    SolveSettings::from_tolerances(&m.default_tolerances())
}

/// Parse a model from its JSON description and hand back an owned handle.
#[no_mangle]
pub extern "C" fn timelot_model_from_json(
    json: *const c_char,
    out_model: *mut *mut TimelotModel,
) -> TimelotStatus {
    guarded(|| {
        let text = match unsafe { read_str(json) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_model_json(text) {
            Ok(model) => write_out(
                out_model,
                Box::into_raw(Box::new(TimelotModel { inner: model })),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Release a model handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn timelot_model_free(model: *mut TimelotModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Serialize the model back to its canonical JSON form.
#[no_mangle]
pub extern "C" fn timelot_model_to_json(
    model: *const TimelotModel,
    out_json: *mut *mut c_char,
) -> TimelotStatus {
    guarded(|| {
        let m = match unsafe { model_ref(model) } {
            Ok(m) => m,
            Err(s) => return s,
        };
        match serde_json::to_string(m) {
            Ok(text) => write_out(out_json, into_c_string(text)),
            Err(e) => {
                set_error(&e.to_string());
                TimelotStatus::Parse
            }
        }
    })
}

/// V(δ_(x,t)).
#[no_mangle]
pub extern "C" fn timelot_eval_outcome(
    model: *const TimelotModel,
    x: f64,
    t: f64,
    out_value: *mut f64,
) -> TimelotStatus {
    guarded(|| {
        let m = match unsafe { model_ref(model) } {
            Ok(m) => m,
            Err(s) => return s,
        };
        match m.eval_at(x, t) {
            Ok(v) => write_out(out_value, v),
            Err(e) => fail(&e),
        }
    })
}

/// V(p) for a lottery given as JSON atoms over the model's domain.
#[no_mangle]
pub extern "C" fn timelot_eval_lottery_json(
    model: *const TimelotModel,
    lottery_json: *const c_char,
    out_value: *mut f64,
) -> TimelotStatus {
    guarded(|| {
        let m = match unsafe { model_ref(model) } {
            Ok(m) => m,
            Err(s) => return s,
        };
        let text = match unsafe { read_str(lottery_json) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let lottery = match parse_lottery_json(text, m.domain()) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        match m.eval_lottery(&lottery) {
            Ok(v) => write_out(out_value, v),
            Err(e) => fail(&e),
        }
    })
}

/// Run the full axiom audit and return the report as a JSON document.
/// `grid_n` and `sample_n` of zero select the scale-aware defaults.
#[no_mangle]
pub extern "C" fn timelot_audit_json(
    model: *const TimelotModel,
    seed: u64,
    grid_n: u32,
    sample_n: u32,
    out_json: *mut *mut c_char,
) -> TimelotStatus {
    guarded(|| {
        let m = match unsafe { model_ref(model) } {
            Ok(m) => m,
            Err(s) => return s,
        };
        let grid_n = if grid_n == 0 {
            DEFAULT_GRID_N
        } else {
            grid_n as usize
        };
        let sample_n = if sample_n == 0 {
            DEFAULT_SAMPLE_N
        } else {
            sample_n as usize
        };
        if grid_n < 3 {
            set_error("grid_n must be at least 3");
            return TimelotStatus::InvalidInput;
        }
        let tol = m.default_tolerances_with(grid_n, sample_n, seed);
        let report = audit(m, &tol);
        match serde_json::to_string_pretty(&report) {
            Ok(text) => write_out(out_json, into_c_string(text)),
            Err(e) => {
                set_error(&e.to_string());
                TimelotStatus::Parse
            }
        }
    })
}

/// Solve δ_(y, t−τ) ∼ δ_(x, t) for y < x. Returns `NoSolution` when even
/// the worst prize at the earlier date is strictly preferred.
#[no_mangle]
pub extern "C" fn timelot_indifferent_prize(
    model: *const TimelotModel,
    x: f64,
    t: f64,
    tau: f64,
    out_y: *mut f64,
) -> TimelotStatus {
    guarded(|| {
        let m = match unsafe { model_ref(model) } {
            Ok(m) => m,
            Err(s) => return s,
        };
        match find_indifferent_prize(m, x, t, tau, &default_solve(m)) {
            Ok(Some(y)) => write_out(out_y, y),
            Ok(None) => {
                set_error("no indifference prize: tau exceeds the local radius");
                TimelotStatus::NoSolution
            }
            Err(e) => fail(&e),
        }
    })
}

/// Radius s > 0 such that indifference prizes exist for every τ in (0, s).
#[no_mangle]
pub extern "C" fn timelot_local_radius(
    model: *const TimelotModel,
    x: f64,
    t: f64,
    out_radius: *mut f64,
) -> TimelotStatus {
    guarded(|| {
        let m = match unsafe { model_ref(model) } {
            Ok(m) => m,
            Err(s) => return s,
        };
        match local_radius(m, x, t, &default_solve(m)) {
            Ok(r) => write_out(out_radius, r),
            Err(e) => fail(&e),
        }
    })
}

/// Time certainty equivalent of a time lottery given as JSON.
#[no_mangle]
pub extern "C" fn timelot_time_certainty_equivalent(
    model: *const TimelotModel,
    lottery_json: *const c_char,
    out_t_star: *mut f64,
) -> TimelotStatus {
    guarded(|| {
        let m = match unsafe { model_ref(model) } {
            Ok(m) => m,
            Err(s) => return s,
        };
        let text = match unsafe { read_str(lottery_json) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        let lottery = match parse_lottery_json(text, m.domain()) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        match time_certainty_equivalent(m, &lottery, &default_solve(m)) {
            Ok(t_star) => write_out(out_t_star, t_star),
            Err(e) => fail(&e),
        }
    })
}

/// Last error message on this thread; empty until a call fails. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn timelot_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by this library. Null is a no-op.
#[no_mangle]
pub extern "C" fn timelot_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn timelot_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn into_c_string(text: String) -> *mut c_char {
    match CString::new(text) {
        Ok(c) => c.into_raw(),
        Err(_) => ptr::null_mut(),
    }
}
