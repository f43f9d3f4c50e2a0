//! C interface to `boolsdr`.
//!
//! Instances and results are opaque heap handles released with their
//! `*_free` function. Every call returns a [`BsdrStatus`]; on failure the
//! message is available from [`bsdr_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use boolsdr::{
    brute_force, run_method, BooleanQpInstance, DescentConfig, Error, HMode, Method, RecoveryResult,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsdrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    OracleTooLarge = 4,
    Solver = 5,
    BufferTooSmall = 6,
    NotCertified = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsdrMethod {
    SdrBool = 0,
    SdrSpin = 1,
    Kbe1 = 2,
    Kbe2 = 3,
    Nuclear = 4,
    Logdet = 5,
}

impl From<BsdrMethod> for Method {
    fn from(m: BsdrMethod) -> Self {
        match m {
            BsdrMethod::SdrBool => Method::SdrBool,
            BsdrMethod::SdrSpin => Method::SdrSpin,
            BsdrMethod::Kbe1 => Method::Kbe1,
            BsdrMethod::Kbe2 => Method::Kbe2,
            BsdrMethod::Nuclear => Method::Nuclear,
            BsdrMethod::Logdet => Method::Logdet,
        }
    }
}

/// Descent parameters. `known_k < 0` means the cardinality is unknown.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BsdrConfig {
    pub lambda: f64,
    pub iterations: usize,
    pub max_reinits: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub known_k: i64,
}

impl BsdrConfig {
    fn to_descent(self) -> Result<DescentConfig, Error> {
        let h_mode = match self.known_k {
            k if k < 0 => HMode::Unknown,
            k => HMode::KnownK(k as usize),
        };
        let cfg = DescentConfig {
            lambda: self.lambda,
            iterations: self.iterations,
            max_reinits: self.max_reinits,
            epsilon: self.epsilon,
            seed: self.seed,
            h_mode,
            ..DescentConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub struct BsdrInstance(BooleanQpInstance);

pub struct BsdrResult(RecoveryResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let mut bytes = message.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BsdrStatus {
    match e {
        Error::Parse { .. } => BsdrStatus::Parse,
        Error::OracleTooLarge { .. } => BsdrStatus::OracleTooLarge,
        Error::Solver { .. } | Error::NonPsdIterate { .. } | Error::DegenerateConstraints(_) => {
            BsdrStatus::Solver
        }
        _ => BsdrStatus::InvalidArgument,
    }
}

fn fail(status: BsdrStatus, message: impl Into<String>) -> BsdrStatus {
    set_error(message);
    status
}

fn guard(f: impl FnOnce() -> BsdrStatus) -> BsdrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == BsdrStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(BsdrStatus::Panic, "internal panic"),
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn bsdr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bsdr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The defaults used by the command-line tool.
#[no_mangle]
pub extern "C" fn bsdr_config_default() -> BsdrConfig {
    let d = DescentConfig::default();
    BsdrConfig {
        lambda: d.lambda,
        iterations: d.iterations,
        max_reinits: d.max_reinits,
        epsilon: d.epsilon,
        seed: d.seed,
        known_k: -1,
    }
}

/// Parses an instance from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bsdr_instance_from_json(
    json: *const c_char,
    out: *mut *mut BsdrInstance,
) -> BsdrStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(BsdrStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(BsdrStatus::Parse, "instance JSON is not UTF-8");
        };
        match BooleanQpInstance::from_json_str(text) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(BsdrInstance(inst)));
                BsdrStatus::Ok
            }
            Err(e) => fail(BsdrStatus::Parse, e.to_string()),
        }
    })
}

/// Number of binary variables, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bsdr_instance_n(inst: *const BsdrInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.n())
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bsdr_instance_free(inst: *mut BsdrInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Runs one method. A null `config` means [`bsdr_config_default`].
///
/// # Safety
/// `inst` must be a live handle, `config` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bsdr_solve(
    inst: *const BsdrInstance,
    method: BsdrMethod,
    config: *const BsdrConfig,
    out: *mut *mut BsdrResult,
) -> BsdrStatus {
    guard(|| {
        if inst.is_null() || out.is_null() {
            return fail(BsdrStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let cfg = config
            .as_ref()
            .copied()
            .unwrap_or_else(|| bsdr_config_default());
        let cfg = match cfg.to_descent() {
            Ok(c) => c,
            Err(e) => return fail(BsdrStatus::InvalidArgument, e.to_string()),
        };
        match run_method(method.into(), &(*inst).0, &cfg) {
            Ok(res) => {
                *out = Box::into_raw(Box::new(BsdrResult(res)));
                BsdrStatus::Ok
            }
            Err(e) => fail(status_of(&e.source), e.to_string()),
        }
    })
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bsdr_result_certified(res: *const BsdrResult) -> bool {
    res.as_ref().is_some_and(|r| r.0.certified)
}

/// Original objective at the rounded candidate; NaN for a null handle.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bsdr_result_objective(res: *const BsdrResult) -> f64 {
    res.as_ref().map_or(f64::NAN, |r| r.0.objective)
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bsdr_result_sdp_iterations(res: *const BsdrResult) -> usize {
    res.as_ref().map_or(0, |r| r.0.sdp_iterations)
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bsdr_result_len(res: *const BsdrResult) -> usize {
    res.as_ref().map_or(0, |r| r.0.x_hat.len())
}

/// Copies the estimate into `buf`: the binary vector when certified, the
/// relaxed candidate otherwise.
///
/// # Safety
/// `res` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bsdr_result_x_hat(
    res: *const BsdrResult,
    buf: *mut f64,
    len: usize,
) -> BsdrStatus {
    guard(|| {
        let Some(r) = res.as_ref() else {
            return fail(BsdrStatus::NullPointer, "null result");
        };
        let x = &r.0.x_hat;
        if buf.is_null() {
            return fail(BsdrStatus::NullPointer, "null buffer");
        }
        if len < x.len() {
            return fail(
                BsdrStatus::BufferTooSmall,
                format!("need {} entries, got {len}", x.len()),
            );
        }
        ptr::copy_nonoverlapping(x.as_ptr(), buf, x.len());
        BsdrStatus::Ok
    })
}

/// Copies the certified binary solution into `buf`.
///
/// # Safety
/// `res` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bsdr_result_x_binary(
    res: *const BsdrResult,
    buf: *mut u8,
    len: usize,
) -> BsdrStatus {
    guard(|| {
        let Some(r) = res.as_ref() else {
            return fail(BsdrStatus::NullPointer, "null result");
        };
        let Some(x) = &r.0.x_binary else {
            return fail(BsdrStatus::NotCertified, "result is not certified");
        };
        if buf.is_null() {
            return fail(BsdrStatus::NullPointer, "null buffer");
        }
        if len < x.len() {
            return fail(
                BsdrStatus::BufferTooSmall,
                format!("need {} entries, got {len}", x.len()),
            );
        }
        ptr::copy_nonoverlapping(x.as_ptr(), buf, x.len());
        BsdrStatus::Ok
    })
}

/// # Safety
/// `res` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bsdr_result_free(res: *mut BsdrResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Exhaustive minimization. Writes the minimizer to `x_opt` (length `n`),
/// and the optimal value and uniqueness flag when those pointers are
/// non-null.
///
/// # Safety
/// `inst` must be a live handle, `x_opt` valid for `len` writes, and the
/// optional pointers null or valid.
#[no_mangle]
pub unsafe extern "C" fn bsdr_oracle(
    inst: *const BsdrInstance,
    x_opt: *mut u8,
    len: usize,
    value: *mut f64,
    unique: *mut bool,
) -> BsdrStatus {
    guard(|| {
        let Some(inst) = inst.as_ref() else {
            return fail(BsdrStatus::NullPointer, "null instance");
        };
        if x_opt.is_null() {
            return fail(BsdrStatus::NullPointer, "null buffer");
        }
        let n = inst.0.n();
        if len < n {
            return fail(
                BsdrStatus::BufferTooSmall,
                format!("need {n} entries, got {len}"),
            );
        }
        match brute_force(&inst.0) {
            Ok(o) => {
                ptr::copy_nonoverlapping(o.x_opt.as_ptr(), x_opt, n);
                if let Some(v) = value.as_mut() {
                    *v = o.value;
                }
                if let Some(u) = unique.as_mut() {
                    *u = o.unique;
                }
                BsdrStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}
