//! C interface to `vandcond`.
//!
//! Knot vectors and matrices are passed around as opaque heap handles that
//! the caller releases with [`vc_knots_free`] and [`vc_matrix_free`]. Every
//! fallible call returns a [`VcStatus`]; on failure a description of the last
//! error on the calling thread is available from [`vc_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use vandcond::bounds::{bound_easy, bound_quasi_cyclic, QcMode};
use vandcond::cauchyinv::{
    vandermonde_inverse_lagrange, vandermonde_inverse_via_cv, InverseVariant,
};
use vandcond::knots::{
    make_knot_vector, quasi_cyclic, roots_of_unity, scaled_cluster, single_outlier, van_der_corput,
    KnotVector, DEFAULT_TOL,
};
use vandcond::matrix::{cv_matrix, dft, leading_block, vandermonde, DenseMatrix};
use vandcond::spectral::{genp_residual_experiment, singular_values};
use vandcond::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcStatus {
    VcOk = 0,
    VcNullPointer = 1,
    VcInvalidArgument = 2,
    VcDuplicateKnot = 3,
    VcKnotCollision = 4,
    VcRangeOverflow = 5,
    VcConvergenceFailure = 6,
    VcShape = 7,
    VcZeroPivot = 8,
    VcNoBound = 9,
    VcIo = 10,
    VcPanic = 11,
}

/// Which closed-form inverse entry formula to use.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcVariant {
    VcCompact = 0,
    VcCorrected = 1,
}

/// Staging of the quasi-cyclic lower bound.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VcQcMode {
    VcQcBase = 0,
    VcQcEq15 = 1,
    VcQcEq16 = 2,
    VcQcProduct = 3,
    VcQcIntegral = 4,
}

/// Opaque knot vector.
pub struct VcKnots {
    inner: KnotVector,
}

/// Opaque dense complex matrix.
pub struct VcMatrix {
    inner: DenseMatrix,
}

/// Condition number summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct VcCondition {
    pub sigma1: f64,
    pub sigma_min: f64,
    pub kappa: f64,
    pub log10kappa: f64,
    /// Nonzero when kappa is small enough for double precision to resolve.
    pub trustworthy: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VcStatus {
    match e {
        Error::DuplicateKnot { .. } => VcStatus::VcDuplicateKnot,
        Error::KnotCollision { .. } => VcStatus::VcKnotCollision,
        Error::RangeOverflow { .. } => VcStatus::VcRangeOverflow,
        Error::ConvergenceFailure => VcStatus::VcConvergenceFailure,
        Error::BlockTooLarge { .. }
        | Error::ShapeMismatch(_)
        | Error::BadShape(_)
        | Error::OddSize(_)
        | Error::ArcTooLong { .. } => VcStatus::VcShape,
        Error::ZeroPivot(_) => VcStatus::VcZeroPivot,
        Error::NoPositiveBound | Error::VacuousCertificate(_) | Error::NotSeparated => {
            VcStatus::VcNoBound
        }
        Error::Io(_) | Error::Parse { .. } => VcStatus::VcIo,
        _ => VcStatus::VcInvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), VcStatus>) -> VcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VcStatus::VcOk,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            VcStatus::VcPanic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, VcStatus>;
}

impl<T> OrStatus<T> for vandcond::Result<T> {
    fn or_status(self) -> Result<T, VcStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

fn null() -> VcStatus {
    set_error("null pointer argument".into());
    VcStatus::VcNullPointer
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn store_knots(out: *mut *mut VcKnots, kv: vandcond::Result<KnotVector>) -> VcStatus {
    if out.is_null() {
        return null();
    }
    guard(|| {
        let inner = kv.or_status()?;
        unsafe { put(out, VcKnots { inner }) };
        Ok(())
    })
}

fn store_matrix(
    out: *mut *mut VcMatrix,
    m: impl FnOnce() -> vandcond::Result<DenseMatrix>,
) -> VcStatus {
    if out.is_null() {
        return null();
    }
    guard(|| {
        let inner = m().or_status()?;
        unsafe { put(out, VcMatrix { inner }) };
        Ok(())
    })
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a knot vector from `n` points given as separate real and imaginary
/// arrays. Fails on coinciding knots.
///
/// # Safety
/// `re` and `im` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_from_points(
    re: *const f64,
    im: *const f64,
    n: usize,
    out: *mut *mut VcKnots,
) -> VcStatus {
    if re.is_null() || im.is_null() {
        return null();
    }
    let re = std::slice::from_raw_parts(re, n);
    let im = std::slice::from_raw_parts(im, n);
    let pts: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    store_knots(out, make_knot_vector(&pts, DEFAULT_TOL))
}

/// The n-th roots of unity.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_roots_of_unity(n: usize, out: *mut *mut VcKnots) -> VcStatus {
    store_knots(out, roots_of_unity(n))
}

/// The first n points of the quasi-cyclic sequence.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_quasi_cyclic(n: usize, out: *mut *mut VcKnots) -> VcStatus {
    store_knots(out, quasi_cyclic(n))
}

/// The first n points of the van der Corput sequence on the unit circle.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_van_der_corput(n: usize, out: *mut *mut VcKnots) -> VcStatus {
    store_knots(out, van_der_corput(n))
}

/// `omega_n^i` for `i < n - 1`, then the given last knot.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_single_outlier(
    n: usize,
    last_re: f64,
    last_im: f64,
    out: *mut *mut VcKnots,
) -> VcStatus {
    store_knots(out, single_outlier(n, Complex64::new(last_re, last_im)))
}

/// The (n-k)-th roots of unity followed by k-th roots scaled by `rho`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_scaled_cluster(
    n: usize,
    k: usize,
    rho: f64,
    out: *mut *mut VcKnots,
) -> VcStatus {
    store_knots(out, scaled_cluster(n, k, rho))
}

/// Number of knots; zero for NULL.
///
/// # Safety
/// `k` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_len(k: *const VcKnots) -> usize {
    k.as_ref().map_or(0, |k| k.inner.len())
}

/// Reads knot `i`.
///
/// # Safety
/// `k` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_get(
    k: *const VcKnots,
    i: usize,
    re: *mut f64,
    im: *mut f64,
) -> VcStatus {
    let (Some(k), false, false) = (k.as_ref(), re.is_null(), im.is_null()) else {
        return null();
    };
    match k.inner.knots().get(i) {
        Some(z) => {
            *re = z.re;
            *im = z.im;
            VcStatus::VcOk
        }
        None => {
            set_error(format!("knot index {i} out of range"));
            VcStatus::VcInvalidArgument
        }
    }
}

/// Releases a knot vector. NULL is ignored.
///
/// # Safety
/// `k` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vc_knots_free(k: *mut VcKnots) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// The Vandermonde matrix `s_i^j`.
///
/// # Safety
/// `k` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_vandermonde(
    k: *const VcKnots,
    out: *mut *mut VcMatrix,
) -> VcStatus {
    let Some(k) = k.as_ref() else { return null() };
    store_matrix(out, || vandermonde(&k.inner))
}

/// The n x n DFT matrix.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_dft(n: usize, out: *mut *mut VcMatrix) -> VcStatus {
    store_matrix(out, || dft(n))
}

/// The CV matrix `1/(s_i - f omega_n^j)`.
///
/// # Safety
/// `k` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_cv(
    k: *const VcKnots,
    f_re: f64,
    f_im: f64,
    out: *mut *mut VcMatrix,
) -> VcStatus {
    let Some(k) = k.as_ref() else { return null() };
    store_matrix(out, || cv_matrix(&k.inner, Complex64::new(f_re, f_im)))
}

/// The q x q top-left block of `m`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_leading_block(
    m: *const VcMatrix,
    q: usize,
    out: *mut *mut VcMatrix,
) -> VcStatus {
    let Some(m) = m.as_ref() else { return null() };
    store_matrix(out, || leading_block(&m.inner, q))
}

/// Inverse of the Vandermonde matrix of `k`, through the CV matrix with
/// parameter `f` when `use_cv` is nonzero, otherwise by Lagrange
/// interpolation.
///
/// # Safety
/// `k` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_vandermonde_inverse(
    k: *const VcKnots,
    use_cv: i32,
    f_re: f64,
    f_im: f64,
    variant: VcVariant,
    out: *mut *mut VcMatrix,
) -> VcStatus {
    let Some(k) = k.as_ref() else { return null() };
    let variant = match variant {
        VcVariant::VcCompact => InverseVariant::PaperEq5,
        VcVariant::VcCorrected => InverseVariant::DerivativeCorrected,
    };
    store_matrix(out, || {
        if use_cv != 0 {
            vandermonde_inverse_via_cv(&k.inner, Complex64::new(f_re, f_im), variant)
        } else {
            vandermonde_inverse_lagrange(&k.inner)
        }
    })
}

/// Row count; zero for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_rows(m: *const VcMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.rows())
}

/// Column count; zero for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_cols(m: *const VcMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.cols())
}

/// Reads entry `(i, j)`.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_get(
    m: *const VcMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> VcStatus {
    let (Some(m), false, false) = (m.as_ref(), re.is_null(), im.is_null()) else {
        return null();
    };
    if i >= m.inner.rows() || j >= m.inner.cols() {
        set_error(format!("entry ({i},{j}) out of range"));
        return VcStatus::VcInvalidArgument;
    }
    let z = m.inner.get(i, j);
    *re = z.re;
    *im = z.im;
    VcStatus::VcOk
}

/// Releases a matrix. NULL is ignored.
///
/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vc_matrix_free(m: *mut VcMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Largest and smallest singular values and the condition number.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_condition(m: *const VcMatrix, out: *mut VcCondition) -> VcStatus {
    let Some(m) = m.as_ref() else { return null() };
    if out.is_null() {
        return null();
    }
    guard(|| {
        let s = singular_values(&m.inner).or_status()?;
        *out = VcCondition {
            sigma1: s.sigma1,
            sigma_min: s.sigma_min,
            kappa: s.kappa,
            log10kappa: s.log10kappa,
            trustworthy: s.trustworthy as i32,
        };
        Ok(())
    })
}

/// log10 of `max(1, s_+^(n-1) / sqrt(n))`, a lower bound on the condition
/// number of the Vandermonde matrix of `k`.
///
/// # Safety
/// `k` must be a live handle; `log10value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_bound_easy(k: *const VcKnots, log10value: *mut f64) -> VcStatus {
    let (Some(k), false) = (k.as_ref(), log10value.is_null()) else {
        return null();
    };
    *log10value = bound_easy(&k.inner).log10value;
    VcStatus::VcOk
}

/// log10 lower bound for the quasi-cyclic Vandermonde matrix of size 3q.
///
/// # Safety
/// `log10value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_bound_quasi_cyclic(
    q: usize,
    mode: VcQcMode,
    log10value: *mut f64,
) -> VcStatus {
    if log10value.is_null() {
        return null();
    }
    let mode = match mode {
        VcQcMode::VcQcBase => QcMode::Base,
        VcQcMode::VcQcEq15 => QcMode::Eq15,
        VcQcMode::VcQcEq16 => QcMode::Eq16,
        VcQcMode::VcQcProduct => QcMode::Product,
        VcQcMode::VcQcIntegral => QcMode::Integral,
    };
    guard(|| {
        *log10value = bound_quasi_cyclic(q, mode).or_status()?.log10value;
        Ok(())
    })
}

/// Mean and standard deviation of GENP relative residuals on DFT systems.
///
/// # Safety
/// `mean` and `std` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vc_genp_experiment(
    n: usize,
    trials: usize,
    seed: u64,
    mean: *mut f64,
    std: *mut f64,
) -> VcStatus {
    if mean.is_null() || std.is_null() {
        return null();
    }
    guard(|| {
        let st = genp_residual_experiment(n, trials, seed).or_status()?;
        *mean = st.mean_rn;
        *std = st.std_rn;
        Ok(())
    })
}
