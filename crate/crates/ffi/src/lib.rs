//! C ABI over `normality_lab`.
//!
//! Every function returns an [`NlStatus`]; outputs go through pointers. On
//! failure `nl_last_error` describes the problem until the next call on the
//! same thread. Systems are opaque handles released with `nl_system_free`.

use normality_lab::algebra::{classify_obstruction, incommensurable_witness, AlgebraError, Verdict};
use normality_lab::fourier::{fourier_exact, FourierError};
use normality_lab::ifs::{IfsError, SelfSimilarSystem};
use normality_lab::martingale::{martingale_gap, MartingaleError};
use normality_lab::rational::parse_rational;
use normality_lab::sampling::{digits, orbit_sequence, tail_digits, SampledWords, SamplingError, DEFAULT_GUARD};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlStatus {
    NlOk = 0,
    NlErrNull = 1,
    NlErrParse = 2,
    NlErrValidation = 3,
    NlErrPrecision = 4,
    NlErrBudget = 5,
    NlErrInvalidArg = 6,
    NlErrPanic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlVerdict {
    NlMatchesObstructionForm = 0,
    NlFailsItem1 = 1,
    NlFailsItem2 = 2,
}

/// Opaque validated system.
pub struct NlSystem(SelfSimilarSystem);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(NlStatus, String);

impl From<IfsError> for Failure {
    fn from(e: IfsError) -> Self {
        let code = match e {
            IfsError::Format(_) => NlStatus::NlErrParse,
            _ => NlStatus::NlErrValidation,
        };
        Failure(code, e.to_string())
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::System(e) => e.into(),
            AlgebraError::PrecisionExhausted(_) => Failure(NlStatus::NlErrPrecision, e.to_string()),
            _ => Failure(NlStatus::NlErrInvalidArg, e.to_string()),
        }
    }
}

impl From<FourierError> for Failure {
    fn from(e: FourierError) -> Self {
        let code = match e {
            FourierError::BudgetExceeded(_) => NlStatus::NlErrBudget,
            _ => NlStatus::NlErrInvalidArg,
        };
        Failure(code, e.to_string())
    }
}

impl From<SamplingError> for Failure {
    fn from(e: SamplingError) -> Self {
        match e {
            SamplingError::System(e) => e.into(),
            SamplingError::InvalidInput(_) => Failure(NlStatus::NlErrInvalidArg, e.to_string()),
            _ => Failure(NlStatus::NlErrPrecision, e.to_string()),
        }
    }
}

impl From<MartingaleError> for Failure {
    fn from(e: MartingaleError) -> Self {
        match e {
            MartingaleError::Sampling(e) => e.into(),
            MartingaleError::Fourier(e) => e.into(),
            _ => Failure(NlStatus::NlErrInvalidArg, e.to_string()),
        }
    }
}

fn null() -> Failure {
    Failure(NlStatus::NlErrNull, "null pointer argument".into())
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            NlStatus::NlOk
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            NlStatus::NlErrPanic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(NlStatus::NlErrParse, "string is not UTF-8".into()))
}

unsafe fn system_of<'a>(s: *const NlSystem) -> Result<&'a SelfSimilarSystem, Failure> {
    s.as_ref().map(|s| &s.0).ok_or_else(null)
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn nl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn nl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses and validates a system from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nl_system_from_json(json: *const c_char, out: *mut *mut NlSystem) -> NlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let text = read_str(json)?;
        let sys = SelfSimilarSystem::from_json(text)?;
        *out = Box::into_raw(Box::new(NlSystem(sys)));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `system` must come from `nl_system_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nl_system_free(system: *mut NlSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Number of maps.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nl_system_len(system: *const NlSystem, out: *mut usize) -> NlStatus {
    guard(|| {
        let sys = system_of(system)?;
        *out_ptr(out)? = sys.len();
        Ok(())
    })
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

/// Obstruction verdict for base `base`. `witness` receives the 1-based index
/// of a map whose slope is not log-commensurable with `base`, or 0 if none.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nl_classify(
    system: *const NlSystem,
    base: u64,
    verdict: *mut NlVerdict,
    witness: *mut usize,
) -> NlStatus {
    guard(|| {
        let sys = system_of(system)?;
        let (verdict, witness) = (out_ptr(verdict)?, out_ptr(witness)?);
        let report = classify_obstruction(sys, base)?;
        *verdict = match report.verdict {
            Verdict::MatchesObstructionForm => NlVerdict::NlMatchesObstructionForm,
            Verdict::FailsItem1 => NlVerdict::NlFailsItem1,
            Verdict::FailsItem2 => NlVerdict::NlFailsItem2,
        };
        *witness = incommensurable_witness(sys, base)?.unwrap_or(0);
        Ok(())
    })
}

/// `F_q` of the self-similar measure; `q` is a rational string such as `"-5/7"`.
///
/// # Safety
/// Pointers must be valid; `q` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nl_fourier_exact(
    system: *const NlSystem,
    q: *const c_char,
    tol: f64,
    budget: u64,
    re: *mut f64,
    im: *mut f64,
    error: *mut f64,
) -> NlStatus {
    guard(|| {
        let sys = system_of(system)?;
        let (re, im, error) = (out_ptr(re)?, out_ptr(im)?, out_ptr(error)?);
        let q = parse_rational(read_str(q)?).map_err(|e| Failure(NlStatus::NlErrParse, e.to_string()))?;
        let v = fourier_exact(sys, &q, tol, budget)?;
        (*re, *im, *error) = (v.re, v.im, v.error);
        Ok(())
    })
}

/// First `n` certified base-`base` digits of the point sampled on PRNG
/// stream `task` of `seed`, written to `out[0..n]`.
///
/// # Safety
/// `out` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn nl_digits(
    system: *const NlSystem,
    seed: u64,
    task: u64,
    base: u32,
    n: usize,
    out: *mut u32,
) -> NlStatus {
    guard(|| {
        let sys = system_of(system)?;
        if out.is_null() {
            return Err(null());
        }
        let mut src = SampledWords::for_task(sys, seed, task);
        let stream = digits(sys, &mut src, base, n, DEFAULT_GUARD)?;
        std::slice::from_raw_parts_mut(out, n).copy_from_slice(&stream.digits[..n]);
        Ok(())
    })
}

/// `T_b^k(x)` for `k = 0 … n-1` at the sampled point, with error bounds.
///
/// # Safety
/// `values` and `errors` must each hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn nl_orbit(
    system: *const NlSystem,
    seed: u64,
    task: u64,
    base: u32,
    n: usize,
    values: *mut f64,
    errors: *mut f64,
) -> NlStatus {
    guard(|| {
        let sys = system_of(system)?;
        if values.is_null() || errors.is_null() {
            return Err(null());
        }
        if n == 0 || base < 2 {
            return Err(Failure(NlStatus::NlErrInvalidArg, "need n > 0 and base >= 2".into()));
        }
        let mut src = SampledWords::for_task(sys, seed, task);
        let stream = digits(sys, &mut src, base, n - 1 + tail_digits(base), DEFAULT_GUARD)?;
        let orbit = orbit_sequence(&stream, n)?;
        std::slice::from_raw_parts_mut(values, n).copy_from_slice(&orbit.values);
        std::slice::from_raw_parts_mut(errors, n).copy_from_slice(&orbit.errors);
        Ok(())
    })
}

/// Gap between empirical and cylinder modes at each `ns[i]`, written to `gaps[i]`.
///
/// # Safety
/// `ns` and `gaps` must each hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn nl_martingale_gap(
    system: *const NlSystem,
    seed: u64,
    q: i64,
    p: u64,
    ns: *const usize,
    len: usize,
    tol: f64,
    budget: u64,
    gaps: *mut f64,
) -> NlStatus {
    guard(|| {
        let sys = system_of(system)?;
        if ns.is_null() || gaps.is_null() {
            return Err(null());
        }
        let ns = std::slice::from_raw_parts(ns, len);
        let series = martingale_gap(sys, seed, q, ns, p, tol, budget)?;
        let out = std::slice::from_raw_parts_mut(gaps, len);
        for (o, r) in out.iter_mut().zip(&series.rows) {
            *o = r.gap;
        }
        Ok(())
    })
}
