//! C interface to `dlcalc`.
//!
//! A [`DlcSession`] is an opaque handle owning cached model algebras. Every
//! entry point returns a [`DlcStatus`]; results are JSON reports written to
//! `*out` as NUL-terminated strings that the caller releases with
//! [`dlc_string_free`]. After a failure, [`dlc_last_error_message`] returns
//! a description of the error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dlcalc::commands::{Command, Options, Query, Session, Status};
use dlcalc::Error;

/// Result codes. The first three match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlcStatus {
    Ok = 0,
    /// The query ran and found a violated identity or closure failure.
    Violation = 1,
    Usage = 2,
    NullArg = 3,
    Utf8 = 4,
    Parse = 5,
    Math = 6,
    Panic = 7,
}

/// Opaque session handle.
pub struct DlcSession {
    inner: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn classify(e: &Error) -> DlcStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownGenerator(_) | Error::EmptyWord => DlcStatus::Parse,
        Error::Usage(_) | Error::UnsupportedFlavor(_) => DlcStatus::Usage,
        _ => DlcStatus::Math,
    }
}

struct Fail(DlcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(classify(&e), e.to_string())
    }
}

unsafe fn opt_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| Fail(DlcStatus::Utf8, format!("{what} is not valid UTF-8")))
}

unsafe fn req_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    opt_str(p, what)?.ok_or_else(|| Fail(DlcStatus::NullArg, format!("{what} is null")))
}

/// Runs `f` and writes its report to `out`, translating every failure path
/// into a status code.
unsafe fn guarded(
    session: *mut DlcSession,
    out: *mut *mut c_char,
    f: impl FnOnce(&Session) -> Result<Query, Fail>,
) -> DlcStatus {
    if !out.is_null() {
        *out = ptr::null_mut();
    }
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<(DlcStatus, String), Fail> {
        if session.is_null() {
            return Err(Fail(DlcStatus::NullArg, "session is null".into()));
        }
        if out.is_null() {
            return Err(Fail(DlcStatus::NullArg, "output pointer is null".into()));
        }
        let s = &(*session).inner;
        let q = f(s)?;
        let report = s.run(&q)?;
        let code = match report.status {
            Status::Ok => DlcStatus::Ok,
            Status::Violation => DlcStatus::Violation,
            Status::Error => DlcStatus::Usage,
        };
        Ok((code, report.to_json()))
    }));
    match result {
        Ok(Ok((code, json))) => {
            *out = CString::new(json).expect("JSON has no NUL").into_raw();
            code
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            DlcStatus::Panic
        }
    }
}

/// Creates a session. Release it with [`dlc_session_free`].
#[no_mangle]
pub extern "C" fn dlc_session_new() -> *mut DlcSession {
    Box::into_raw(Box::new(DlcSession {
        inner: Session::new(),
    }))
}

/// # Safety
/// `session` must come from [`dlc_session_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dlc_session_free(session: *mut DlcSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string produced by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn dlc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. The string is
/// owned by the caller.
#[no_mangle]
pub extern "C" fn dlc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |m| m.clone().into_raw())
    })
}

/// Generic entry point: `command` is a CLI command name, `input` its
/// positional argument (may be null), `options_json` a JSON object of CLI
/// options (may be null).
///
/// # Safety
/// String arguments must be null or NUL-terminated; `session` must be live;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlc_run(
    session: *mut DlcSession,
    command: *const c_char,
    input: *const c_char,
    options_json: *const c_char,
    out: *mut *mut c_char,
) -> DlcStatus {
    guarded(session, out, |_| {
        let command = Command::parse(req_str(command, "command")?)?;
        let input = opt_str(input, "input")?;
        let options = match opt_str(options_json, "options")? {
            Some(j) => Options::from_json(j)?,
            None => Options::default(),
        };
        Ok(Query {
            command,
            input: input.map(str::to_string),
            options,
        })
    })
}

/// Normal form of an operation polynomial such as `Q^4 Q^1`.
///
/// # Safety
/// As for [`dlc_run`].
#[no_mangle]
pub unsafe extern "C" fn dlc_normalize(
    session: *mut DlcSession,
    word: *const c_char,
    out: *mut *mut c_char,
) -> DlcStatus {
    guarded(session, out, |_| {
        Ok(Query::new(Command::Normalize, Some(req_str(word, "word")?)))
    })
}

/// Evaluates `expr` in a model (`A`, `MO`, `MU`; null means `A`). A `cap` of
/// 0 selects the model's default truncation.
///
/// # Safety
/// As for [`dlc_run`].
#[no_mangle]
pub unsafe extern "C" fn dlc_act(
    session: *mut DlcSession,
    model: *const c_char,
    expr: *const c_char,
    cap: u32,
    out: *mut *mut c_char,
) -> DlcStatus {
    guarded(session, out, |_| {
        let mut q = Query::new(Command::Act, Some(req_str(expr, "expr")?));
        q.options.model = opt_str(model, "model")?.map(str::to_string);
        q.options.cap = (cap != 0).then_some(cap);
        Ok(q)
    })
}

/// Checks closure of a subalgebra of `A` under `ops` (null means `Q_1`)
/// through `maxdeg` (0 means 31).
///
/// # Safety
/// As for [`dlc_run`].
#[no_mangle]
pub unsafe extern "C" fn dlc_closure(
    session: *mut DlcSession,
    sub: *const c_char,
    ops: *const c_char,
    maxdeg: u32,
    out: *mut *mut c_char,
) -> DlcStatus {
    guarded(session, out, |_| {
        let mut q = Query::new(Command::Closure, None);
        q.options.sub = Some(req_str(sub, "sub")?.to_string());
        q.options.ops = opt_str(ops, "ops")?.map(str::to_string);
        q.options.maxdeg = (maxdeg != 0).then_some(maxdeg);
        Ok(q)
    })
}

/// Runs a verification suite by name, or `all`, at default bounds.
///
/// # Safety
/// As for [`dlc_run`].
#[no_mangle]
pub unsafe extern "C" fn dlc_verify(
    session: *mut DlcSession,
    suite: *const c_char,
    out: *mut *mut c_char,
) -> DlcStatus {
    guarded(session, out, |_| {
        Ok(Query::new(Command::Verify, Some(req_str(suite, "suite")?)))
    })
}
