//! C ABI over `fermicap`.
//!
//! Every fallible call returns an [`FcStatus`]. On failure the message is
//! available from [`fc_last_error`] on the same thread until the next call.
//! Channels are opaque handles from `fc_channel_*` constructors and must be
//! released with [`fc_channel_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fermicap::capacity::{gaussian_capacity, smin_gaussian};
use fermicap::channel::{Channel, FermionicProductChannel};
use fermicap::minimizer::{minimize, MinimizerConfig};
use fermicap::numerics::ComplexMatrix;
use fermicap::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerics = 3,
    Panic = 4,
}

/// Opaque channel handle.
pub struct FcChannel {
    inner: FermionicProductChannel,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FcCapacityReport {
    pub modes: usize,
    pub smin_even: f64,
    pub smin_gaussian: f64,
    pub c1_gaussian: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FcMinimizeResult {
    pub best_entropy: f64,
    /// best_entropy minus the closed-form Gaussian minimum.
    pub deviation: f64,
    pub restarts_agreeing: usize,
    pub dispersion: f64,
    /// Singular-value defect of the best state; negative when unavailable.
    pub witness_defect: f64,
    pub witness_gaussian: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> FcStatus {
    let status = if e.is_input() {
        FcStatus::InvalidArgument
    } else {
        FcStatus::Numerics
    };
    set_error(e.to_string());
    status
}

fn guard(f: impl FnOnce() -> Result<(), FcStatus>) -> FcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FcStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            FcStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), FcStatus> {
    if p.is_null() {
        set_error(format!("argument `{name}` is null"));
        return Err(FcStatus::NullPointer);
    }
    Ok(())
}

/// # Safety
/// `b` must point to `len` readable doubles (or be null when `len` is 0).
unsafe fn slice<'a>(b: *const f64, len: usize, name: &str) -> Result<&'a [f64], FcStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(b, name)?;
    Ok(std::slice::from_raw_parts(b, len))
}

/// Last error message on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn fc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

fn store(
    out: *mut *mut FcChannel,
    ch: Result<FermionicProductChannel, Error>,
) -> Result<(), FcStatus> {
    let inner = ch.map_err(fail)?;
    // SAFETY: caller checked `out` for null.
    unsafe { *out = Box::into_raw(Box::new(FcChannel { inner })) };
    Ok(())
}

/// Channel with explicit coefficients `b[0..2n]`.
///
/// # Safety
/// `b` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_channel_new(
    n: usize,
    b: *const f64,
    len: usize,
    out: *mut *mut FcChannel,
) -> FcStatus {
    guard(|| {
        non_null(out, "out")?;
        let b = slice(b, len, "b")?;
        store(out, FermionicProductChannel::new(n, b.to_vec()))
    })
}

/// All coefficients equal to `b`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_channel_plus(n: usize, b: f64, out: *mut *mut FcChannel) -> FcStatus {
    guard(|| {
        non_null(out, "out")?;
        store(out, FermionicProductChannel::plus(n, b))
    })
}

/// Coefficients b^{p/n} for p = 1..2n.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_channel_times(n: usize, b: f64, out: *mut *mut FcChannel) -> FcStatus {
    guard(|| {
        non_null(out, "out")?;
        store(out, FermionicProductChannel::times(n, b))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `ch` must come from an `fc_channel_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fc_channel_free(ch: *mut FcChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Number of modes, or 0 for a null handle.
///
/// # Safety
/// `ch` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fc_channel_modes(ch: *const FcChannel) -> usize {
    ch.as_ref().map_or(0, |c| c.inner.n())
}

/// Writes the 2n coefficients into `out` (capacity `len`).
///
/// # Safety
/// `ch` must be live; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fc_channel_coefficients(
    ch: *const FcChannel,
    out: *mut f64,
    len: usize,
) -> FcStatus {
    guard(|| {
        non_null(ch, "ch")?;
        non_null(out, "out")?;
        let b = (*ch).inner.coefficients();
        if len < b.len() {
            return Err(fail(Error::LengthMismatch(len, b.len())));
        }
        std::slice::from_raw_parts_mut(out, b.len()).copy_from_slice(b);
        Ok(())
    })
}

/// Applies the channel to a 2^n × 2^n operator given as row-major real and
/// imaginary parts, each of `len` = 4^n doubles.
///
/// # Safety
/// Input pointers must hold `len` readable doubles, output pointers `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fc_channel_apply(
    ch: *const FcChannel,
    re_in: *const f64,
    im_in: *const f64,
    re_out: *mut f64,
    im_out: *mut f64,
    len: usize,
) -> FcStatus {
    guard(|| {
        non_null(ch, "ch")?;
        non_null(re_out, "re_out")?;
        non_null(im_out, "im_out")?;
        let ch = &(*ch).inner;
        let dim = ch.dim();
        if len != dim * dim {
            return Err(fail(Error::DimensionMismatch {
                expected: dim * dim,
                got: len,
            }));
        }
        let re = slice(re_in, len, "re_in")?;
        let im = slice(im_in, len, "im_in")?;
        let entries: Vec<Complex64> = re
            .iter()
            .zip(im)
            .map(|(r, i)| Complex64::new(*r, *i))
            .collect();
        let a = ComplexMatrix::from_row_major(dim, entries).map_err(fail)?;
        let out = ch.apply(&a).map_err(fail)?;
        let (ro, io) = (
            std::slice::from_raw_parts_mut(re_out, len),
            std::slice::from_raw_parts_mut(im_out, len),
        );
        for r in 0..dim {
            for c in 0..dim {
                let z = out[(r, c)];
                ro[r * dim + c] = z.re;
                io[r * dim + c] = z.im;
            }
        }
        Ok(())
    })
}

/// Closed-form Gaussian minimum output entropy of coefficients `b`.
///
/// # Safety
/// `b` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_smin_gaussian(b: *const f64, len: usize, out: *mut f64) -> FcStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = smin_gaussian(slice(b, len, "b")?).map_err(fail)?;
        Ok(())
    })
}

/// Closed-form capacity report for a channel.
///
/// # Safety
/// `ch` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_gaussian_capacity(
    ch: *const FcChannel,
    out: *mut FcCapacityReport,
) -> FcStatus {
    guard(|| {
        non_null(ch, "ch")?;
        non_null(out, "out")?;
        let r = gaussian_capacity((*ch).inner.coefficients()).map_err(fail)?;
        *out = FcCapacityReport {
            modes: r.n,
            smin_even: r.smin_even,
            smin_gaussian: r.smin_gaussian,
            c1_gaussian: r.c1_gaussian,
        };
        Ok(())
    })
}

/// Runs the iterative minimizer with default tolerances.
///
/// # Safety
/// `ch` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_minimize(
    ch: *const FcChannel,
    iterations: usize,
    restarts: usize,
    seed: u64,
    out: *mut FcMinimizeResult,
) -> FcStatus {
    guard(|| {
        non_null(ch, "ch")?;
        non_null(out, "out")?;
        let ch = &(*ch).inner;
        let cfg = MinimizerConfig {
            iterations,
            restarts,
            seed,
            ..Default::default()
        };
        let run = minimize(ch, &cfg).map_err(fail)?;
        let target = smin_gaussian(ch.coefficients()).map_err(fail)?;
        let witness = run.gaussian_witness.as_ref();
        *out = FcMinimizeResult {
            best_entropy: run.best_entropy,
            deviation: run.best_entropy - target,
            restarts_agreeing: run.restarts_agreeing(fermicap::cli::AGREEMENT_TOL),
            dispersion: run.dispersion(),
            witness_defect: witness.map_or(-1.0, |w| w.defect),
            witness_gaussian: witness.is_some_and(|w| w.gaussian),
        };
        Ok(())
    })
}
