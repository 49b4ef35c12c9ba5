//! C ABI over `ness-core`.
//!
//! A `NessModel` is an opaque handle holding one validated parameter point.
//! Every function returns a `NessStatus`; on failure the message is kept
//! per thread and can be read with `ness_last_error_message`. Panics never
//! cross the boundary.
//!
//! Matrices are written row-major as 16 real parts followed by 16 imaginary
//! parts, in the energy basis |00>, |10>, |01>, |11>.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ness_core::flags::Flag;
use ness_core::liouvillian::{liouvillian_for, steady_state};
use ness_core::metrology::{qfi_fidelity_oracle, qfi_spectral_checked};
use ness_core::observables::{correlations, DiscordOptions, Representation};
use ness_core::thermo::thermo_report;
use ness_core::{BathParams, Error, SystemParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NessStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Solver = 4,
    NotXForm = 5,
    Step = 6,
    RankChange = 7,
    Optimizer = 8,
    Panic = 9,
}

pub const NESS_FLAG_STEP_SENSITIVE: u32 = 1;
pub const NESS_FLAG_SEMI_CLASSICAL_EPR: u32 = 2;
pub const NESS_FLAG_NEGATIVE_EPR: u32 = 4;
pub const NESS_FLAG_DEGENERATE_ROTATION: u32 = 8;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NessSystem {
    pub omega1: f64,
    pub omega2: f64,
    pub delta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NessBaths {
    pub t1: f64,
    pub t2: f64,
    pub mu1: f64,
    pub mu2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NessQfi {
    pub f_total: f64,
    pub f_e: f64,
    pub f_n: f64,
    pub step: f64,
    pub flags: u32,
}

/// Everything computed at one point. Correlations are in the energy basis.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NessReport {
    pub residual: f64,
    pub populations: [f64; 4],
    pub rho23_re: f64,
    pub rho23_im: f64,
    pub qfi: NessQfi,
    pub coherence: f64,
    pub linear_entropy: f64,
    pub concurrence: f64,
    pub qmi: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub i1: f64,
    pub i2: f64,
    pub j1: f64,
    pub j2: f64,
    pub epr: f64,
    pub flags: u32,
}

/// Opaque parameter point.
pub struct NessModel {
    params: SystemParams,
    baths: BathParams,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NessStatus {
    match e {
        Error::InvalidParameter { .. } | Error::Config(_) | Error::Io { .. } => NessStatus::InvalidParameter,
        Error::Domain(_) => NessStatus::Domain,
        Error::DegenerateNullSpace { .. } | Error::Solver { .. } => NessStatus::Solver,
        Error::NotXForm { .. } => NessStatus::NotXForm,
        Error::StepUnderflow { .. } => NessStatus::Step,
        Error::RankChange { .. } => NessStatus::RankChange,
        Error::Optimizer { .. } => NessStatus::Optimizer,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (NessStatus, String)>) -> NessStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NessStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NessStatus::Panic
        }
    }
}

fn core<T>(r: ness_core::Result<T>) -> Result<T, (NessStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (NessStatus, String) {
    (NessStatus::NullPointer, format!("{what} is NULL"))
}

fn flag_bits(flags: &[Flag]) -> u32 {
    flags.iter().fold(0, |acc, f| {
        acc | match f {
            Flag::StepSensitive => NESS_FLAG_STEP_SENSITIVE,
            Flag::SemiClassicalEpr => NESS_FLAG_SEMI_CLASSICAL_EPR,
            Flag::NegativeEpr => NESS_FLAG_NEGATIVE_EPR,
            Flag::DegenerateRotation => NESS_FLAG_DEGENERATE_ROTATION,
        }
    })
}

/// Creates a model. On success `*out` owns a handle to release with
/// `ness_model_free`; on failure it is set to NULL.
///
/// # Safety
/// `system` and `baths` must be NULL or valid for reads; `out` must be NULL or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ness_model_new(
    system: *const NessSystem,
    baths: *const NessBaths,
    out: *mut *mut NessModel,
) -> NessStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = system.as_ref().ok_or_else(|| null("system"))?;
        let b = baths.as_ref().ok_or_else(|| null("baths"))?;
        let params = core(SystemParams::new(s.omega1, s.omega2, s.delta, s.gamma1, s.gamma2))?;
        let baths = core(BathParams::new(b.t1, b.t2, b.mu1, b.mu2))?;
        *out = Box::into_raw(Box::new(NessModel { params, baths }));
        Ok(())
    })
}

/// Releases a model. NULL is ignored.
///
/// # Safety
/// `model` must be NULL or a handle from `ness_model_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ness_model_free(model: *mut NessModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Replaces the tunneling rate, keeping everything else.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ness_model_set_delta(model: *mut NessModel, delta: f64) -> NessStatus {
    guard(|| {
        let m = model.as_mut().ok_or_else(|| null("model"))?;
        let p = m.params.with_delta(delta);
        core(p.validate())?;
        m.params = p;
        Ok(())
    })
}

/// Writes the steady state: `re[16]` and `im[16]`, row-major.
///
/// # Safety
/// `model` must be NULL or a live handle; `re` and `im` must be NULL or valid
/// for 16 writes each.
#[no_mangle]
pub unsafe extern "C" fn ness_model_steady_state(
    model: *const NessModel,
    re: *mut f64,
    im: *mut f64,
    residual: *mut f64,
) -> NessStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let l = core(liouvillian_for(&m.params, &m.baths))?;
        let ss = core(steady_state(&l))?;
        let rho = ss.rho.matrix();
        for r in 0..4 {
            for c in 0..4 {
                *re.add(4 * r + c) = rho[(r, c)].re;
                *im.add(4 * r + c) = rho[(r, c)].im;
            }
        }
        if !residual.is_null() {
            *residual = ss.residual;
        }
        Ok(())
    })
}

/// Spectral QFI with respect to Δ. A non-positive `step` selects the default.
///
/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ness_model_qfi(model: *const NessModel, step: f64, out: *mut NessQfi) -> NessStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let h = (step > 0.0).then_some(step);
        let q = core(qfi_spectral_checked(&m.params, &m.baths, h))?;
        *out = NessQfi {
            f_total: q.f_total,
            f_e: q.f_e,
            f_n: q.f_n,
            step: q.step,
            flags: flag_bits(&q.flags),
        };
        Ok(())
    })
}

/// Fidelity-based QFI cross-check. A non-positive `step` selects the default.
///
/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ness_model_qfi_fidelity(model: *const NessModel, step: f64, out: *mut f64) -> NessStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = core(qfi_fidelity_oracle(&m.params, &m.baths, (step > 0.0).then_some(step)))?;
        Ok(())
    })
}

/// Steady state, QFI, correlations and currents in one call. `seed` jitters
/// the discord grid when `use_seed` is nonzero.
///
/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ness_model_evaluate(
    model: *const NessModel,
    use_seed: i32,
    seed: u64,
    out: *mut NessReport,
) -> NessStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let l = core(liouvillian_for(&m.params, &m.baths))?;
        let ss = core(steady_state(&l))?;
        let rho = &ss.rho;
        let q = core(qfi_spectral_checked(&m.params, &m.baths, None))?;
        let opts = DiscordOptions {
            seed: (use_seed != 0).then_some(seed),
            ..Default::default()
        };
        let c = core(correlations(rho, &l.basis, Representation::Energy, &opts))?;
        let t = core(thermo_report(&l, rho, &m.params, &m.baths))?;
        let qfi = NessQfi {
            f_total: q.f_total,
            f_e: q.f_e,
            f_n: q.f_n,
            step: q.step,
            flags: flag_bits(&q.flags),
        };
        *out = NessReport {
            residual: ss.residual,
            populations: rho.populations(),
            rho23_re: rho.rho23().re,
            rho23_im: rho.rho23().im,
            qfi,
            coherence: c.coherence,
            linear_entropy: c.linear_entropy,
            concurrence: c.concurrence,
            qmi: c.qmi,
            classical_corr: c.classical_corr,
            discord: c.discord,
            i1: t.i1,
            i2: t.i2,
            j1: t.j1,
            j2: t.j2,
            epr: t.epr,
            flags: qfi.flags | flag_bits(&t.flags) | if l.basis.degenerate { NESS_FLAG_DEGENERATE_ROTATION } else { 0 },
        };
        Ok(())
    })
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ness_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ness_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string has an interior NUL"),
    };
    VERSION.as_ptr()
}
