//! C ABI over `pinch-sop`.
//!
//! Fallible functions return a [`PinchStatus`] and write their result through
//! an out pointer, which is left untouched on failure. The text of the most
//! recent failure on the calling thread is available from
//! [`pinch_last_error_message`]. Configuration handles come from
//! [`pinch_config_new`] and must be released with [`pinch_config_free`].
//!
//! All quantities are SI: metres, hertz, watts; rates in bps/Hz.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pinch_sop::distributions::{cdf_chi, cdf_gamma_b, pdf_gamma_e, pdf_w};
use pinch_sop::monte_carlo::{simulate_sop_fpa, simulate_sop_pas};
use pinch_sop::sop::{
    lower_bound_pas_value, sop_asymptotic, sop_chebyshev, sop_exact, sop_lower_bound_fpa,
};
use pinch_sop::{Error, McConfig, McResult, SystemConfig, SystemParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinchStatus {
    Ok = 0,
    InvalidParameter = 1,
    Domain = 2,
    Singularity = 3,
    Accuracy = 4,
    Usage = 5,
    Io = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Model parameters, SI units.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinchParams {
    /// Side of the square region, m.
    pub region_side: f64,
    /// Waveguide height, m.
    pub height: f64,
    /// Carrier frequency, Hz.
    pub carrier_freq: f64,
    pub n_eff: f64,
    /// Transmit power, W.
    pub transmit_power: f64,
    /// Noise power, W.
    pub noise_power: f64,
    /// Target secrecy rate, bps/Hz.
    pub target_rate: f64,
}

impl From<SystemParams> for PinchParams {
    fn from(p: SystemParams) -> Self {
        Self {
            region_side: p.region_side,
            height: p.height,
            carrier_freq: p.carrier_freq,
            n_eff: p.n_eff,
            transmit_power: p.transmit_power,
            noise_power: p.noise_power,
            target_rate: p.target_rate,
        }
    }
}

impl From<PinchParams> for SystemParams {
    fn from(p: PinchParams) -> Self {
        Self {
            region_side: p.region_side,
            height: p.height,
            carrier_freq: p.carrier_freq,
            n_eff: p.n_eff,
            transmit_power: p.transmit_power,
            noise_power: p.noise_power,
            target_rate: p.target_rate,
        }
    }
}

/// Validated configuration. Opaque to C.
pub struct PinchConfig {
    inner: SystemConfig,
}

/// Outcome of a Monte Carlo run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PinchMcResult {
    pub estimate: f64,
    /// `sqrt(p (1 - p) / trials)`.
    pub std_error: f64,
    pub trials: u64,
    pub hits: u64,
}

impl From<McResult> for PinchMcResult {
    fn from(r: McResult) -> Self {
        Self {
            estimate: r.estimate,
            std_error: r.stderr,
            trials: r.trials,
            hits: r.hits,
        }
    }
}

enum Failure {
    Core(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PinchStatus {
    match e {
        Error::InvalidParameter { .. } => PinchStatus::InvalidParameter,
        Error::Domain { .. } => PinchStatus::Domain,
        Error::Singularity { .. } => PinchStatus::Singularity,
        Error::Accuracy { .. } => PinchStatus::Accuracy,
        Error::Usage(_) => PinchStatus::Usage,
        Error::Io(_) => PinchStatus::Io,
    }
}

/// Runs `f`, converting errors and panics to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PinchStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PinchStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            let status = status_of(&e);
            set_last_error(e.to_string());
            status
        }
        Ok(Err(Failure::Null(name))) => {
            set_last_error(format!("null pointer passed as `{name}`"));
            PinchStatus::NullPointer
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            PinchStatus::Panic
        }
    }
}

unsafe fn config_ref<'a>(cfg: *const PinchConfig) -> Result<&'a SystemConfig, Failure> {
    // SAFETY: caller guarantees `cfg` is null or a live handle.
    unsafe { cfg.as_ref() }
        .map(|c| &c.inner)
        .ok_or(Failure::Null("config"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    // SAFETY: non-null, and the caller guarantees it is valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

/// Default parameters: D = 10 m, h = 3 m, 28 GHz, n_eff = 1.4, 20 dBm
/// transmit power, -80 dBm noise, 0.1 bps/Hz.
#[no_mangle]
pub extern "C" fn pinch_params_default() -> PinchParams {
    SystemParams::default().into()
}

/// Validates `params` and stores a new handle in `*out`.
///
/// # Safety
/// `params` must point to a `PinchParams`; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_config_new(
    params: *const PinchParams,
    out: *mut *mut PinchConfig,
) -> PinchStatus {
    guard(|| {
        // SAFETY: caller contract.
        let p = unsafe { params.as_ref() }.ok_or(Failure::Null("params"))?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let inner = SystemConfig::new((*p).into())?;
        let handle = Box::into_raw(Box::new(PinchConfig { inner }));
        // SAFETY: checked non-null above.
        unsafe { out.write(handle) };
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `cfg` must be null or a handle from `pinch_config_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pinch_config_free(cfg: *mut PinchConfig) {
    if !cfg.is_null() {
        // SAFETY: ownership returns from C.
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Copies the parameters a handle was built from.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_config_params(
    cfg: *const PinchConfig,
    out: *mut PinchParams,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, (*config_ref(cfg)?.params()).into()) })
}

/// Effective transmit SNR `eta P_s / sigma^2`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_config_gamma_bar(
    cfg: *const PinchConfig,
    out: *mut f64,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, config_ref(cfg)?.gamma_bar()) })
}

/// Linear rate threshold `2^R_th`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_config_c_th(cfg: *const PinchConfig, out: *mut f64) -> PinchStatus {
    guard(|| unsafe { write_out(out, config_ref(cfg)?.c_th()) })
}

/// SOP by adaptive quadrature to absolute tolerance `tol` in `(0, 1e-3]`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_sop_exact(
    cfg: *const PinchConfig,
    tol: f64,
    out: *mut f64,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, sop_exact(config_ref(cfg)?, tol)?.value) })
}

/// Gauss-Chebyshev SOP of order `order`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_sop_chebyshev(
    cfg: *const PinchConfig,
    order: usize,
    out: *mut f64,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, sop_chebyshev(config_ref(cfg)?, order)?.value) })
}

/// High-power limit of the SOP.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_sop_asymptotic(
    cfg: *const PinchConfig,
    out: *mut f64,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, sop_asymptotic(config_ref(cfg)?)?.value) })
}

/// `(2 pi - 1) / 24`.
#[no_mangle]
pub extern "C" fn pinch_sop_lower_bound_pas() -> f64 {
    lower_bound_pas_value()
}

/// `0.5`.
#[no_mangle]
pub extern "C" fn pinch_sop_lower_bound_fpa() -> f64 {
    sop_lower_bound_fpa().value
}

fn mc_config(trials: u64, seed: u64, workers: usize) -> Result<McConfig, Failure> {
    Ok(McConfig::new(trials, seed, workers)?)
}

/// Monte Carlo SOP of the pinching-antenna system. Results depend only on
/// `(trials, seed)`, not on `workers`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_mc_sop_pas(
    cfg: *const PinchConfig,
    trials: u64,
    seed: u64,
    workers: usize,
    out: *mut PinchMcResult,
) -> PinchStatus {
    guard(|| unsafe {
        let r = simulate_sop_pas(config_ref(cfg)?, &mc_config(trials, seed, workers)?)?;
        write_out(out, r.into())
    })
}

/// Monte Carlo SOP of the fixed antenna at the region centre.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_mc_sop_fpa(
    cfg: *const PinchConfig,
    trials: u64,
    seed: u64,
    workers: usize,
    out: *mut PinchMcResult,
) -> PinchStatus {
    guard(|| unsafe {
        let r = simulate_sop_fpa(config_ref(cfg)?, &mc_config(trials, seed, workers)?)?;
        write_out(out, r.into())
    })
}

/// CDF of Bob's SNR at `z > 0`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_cdf_gamma_b(
    cfg: *const PinchConfig,
    z: f64,
    out: *mut f64,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, cdf_gamma_b(z, config_ref(cfg)?)?) })
}

/// Density of Eve's SNR at `z > 0`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_pdf_gamma_e(
    cfg: *const PinchConfig,
    z: f64,
    out: *mut f64,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, pdf_gamma_e(z, config_ref(cfg)?)?) })
}

/// Density of Eve's squared horizontal distance at `w >= 0`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_pdf_w(
    cfg: *const PinchConfig,
    w: f64,
    out: *mut f64,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, pdf_w(w, config_ref(cfg)?)?) })
}

/// CDF of Eve's squared horizontal distance at `t`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pinch_cdf_chi(
    cfg: *const PinchConfig,
    t: f64,
    out: *mut f64,
) -> PinchStatus {
    guard(|| unsafe { write_out(out, cdf_chi(t, config_ref(cfg)?)?) })
}

/// Message of the most recent failure on this thread, or null if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pinch_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code, e.g. `"invalid-parameter"`.
#[no_mangle]
pub extern "C" fn pinch_status_name(status: i32) -> *const c_char {
    let name: &'static CStr = match status {
        0 => c"ok",
        1 => c"invalid-parameter",
        2 => c"domain",
        3 => c"singularity",
        4 => c"accuracy",
        5 => c"usage",
        6 => c"io",
        7 => c"null-pointer",
        8 => c"panic",
        _ => c"unknown",
    };
    name.as_ptr()
}
