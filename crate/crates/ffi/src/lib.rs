//! C ABI over the `zalcman` crate.
//!
//! Every function returns a [`ZalcmanStatus`]; on failure a message is
//! available from [`zalcman_last_error`] on the calling thread. Measures and
//! search results are opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use zalcman::{
    coeffs_from_measure, compute_an, compute_cn, maximize_phi, phi, sharp_bound, Alpha, Atom,
    DiscreteMeasure, Error, Extremal, Lambda, Regime, SearchConfig, SearchResult,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZalcmanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidAlpha = 2,
    InvalidLambda = 3,
    InvalidOrder = 4,
    InvalidMeasure = 5,
    InvalidConfig = 6,
    Domain = 7,
    InvalidArgument = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZalcmanRegime {
    LargeLambda = 0,
    SmallLambda = 1,
    Boundary = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZalcmanExtremal {
    SingleAtom = 0,
    RotationMix = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZalcmanBound {
    pub alpha: f64,
    pub lambda: f64,
    pub n: usize,
    pub a_n: f64,
    pub a_2n1: f64,
    pub c_n: f64,
    pub value: f64,
    pub regime: ZalcmanRegime,
    pub extremal: ZalcmanExtremal,
}

/// `atoms == 0` selects the default of `2n − 2`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZalcmanSearchConfig {
    pub atoms: usize,
    pub starts: usize,
    pub max_iters: usize,
    pub tol_converge: f64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZalcmanSearchSummary {
    pub best_modulus: f64,
    pub bound: f64,
    pub gap: f64,
    pub seeded_modulus: f64,
    pub starts_used: usize,
    pub iterations: usize,
    pub violations: usize,
    pub converged: bool,
}

/// Opaque discrete measure.
pub struct ZalcmanMeasure(DiscreteMeasure);

/// Opaque search outcome.
pub struct ZalcmanSearch(SearchResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ZalcmanStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidAlpha(_) => ZalcmanStatus::InvalidAlpha,
            Error::InvalidLambda(_) => ZalcmanStatus::InvalidLambda,
            Error::OrderTooSmall { .. }
            | Error::OrderTooLarge { .. }
            | Error::OrderMismatch { .. }
            | Error::InsufficientCoefficients { .. } => ZalcmanStatus::InvalidOrder,
            Error::InvalidMeasure(_) => ZalcmanStatus::InvalidMeasure,
            Error::InvalidConfig(_) => ZalcmanStatus::InvalidConfig,
            Error::Domain(_) => ZalcmanStatus::Domain,
            Error::InvalidSeries(_) => ZalcmanStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ZalcmanStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ZalcmanStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZalcmanStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ZalcmanStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn zalcman_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, nul-terminated crate version.
#[no_mangle]
pub extern "C" fn zalcman_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `A_n(α)` for `n ≥ 1`.
///
/// # Safety
///
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_an(alpha: f64, n: usize, out: *mut f64) -> ZalcmanStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if n == 0 {
            return Err(Error::OrderTooSmall { got: 0, min: 1 }.into());
        }
        *out = compute_an(Alpha::new(alpha)?, n);
        Ok(())
    })
}

/// `C_n(α) = 2A_{2n−1}/A_n²` for `n ≥ 3`.
///
/// # Safety
///
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_cn(alpha: f64, n: usize, out: *mut f64) -> ZalcmanStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = compute_cn(Alpha::new(alpha)?, n)?;
        Ok(())
    })
}

/// Sharp bound of `|λ a_n² − a_{2n−1}|` for `n ≥ 3`.
///
/// # Safety
///
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_sharp_bound(
    alpha: f64,
    lambda: f64,
    n: usize,
    out: *mut ZalcmanBound,
) -> ZalcmanStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let b = sharp_bound(Alpha::new(alpha)?, Lambda::new(lambda)?, n)?;
        *out = ZalcmanBound {
            alpha: b.alpha,
            lambda: b.lambda,
            n: b.n,
            a_n: b.a_n,
            a_2n1: b.a_2n1,
            c_n: b.c_n,
            value: b.value,
            regime: match b.regime {
                Regime::LargeLambda => ZalcmanRegime::LargeLambda,
                Regime::SmallLambda => ZalcmanRegime::SmallLambda,
                Regime::Boundary => ZalcmanRegime::Boundary,
            },
            extremal: match b.extremal {
                Extremal::SingleAtom => ZalcmanExtremal::SingleAtom,
                Extremal::RotationMix => ZalcmanExtremal::RotationMix,
            },
        };
        Ok(())
    })
}

fn boxed<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Measure with atoms at `thetas[i]` carrying `weights[i]`; weights must
/// sum to 1.
///
/// # Safety
///
/// `thetas` and `weights` must point to `len` readable doubles; `out` must
/// be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_measure_new(
    thetas: *const f64,
    weights: *const f64,
    len: usize,
    out: *mut *mut ZalcmanMeasure,
) -> ZalcmanStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        if len > 0 && (thetas.is_null() || weights.is_null()) {
            return Err(null("thetas or weights"));
        }
        let atoms = if len == 0 {
            Vec::new()
        } else {
            let t = slice::from_raw_parts(thetas, len);
            let w = slice::from_raw_parts(weights, len);
            t.iter()
                .zip(w)
                .map(|(&theta, &w)| Atom { theta, w })
                .collect()
        };
        boxed(out, ZalcmanMeasure(DiscreteMeasure::new(atoms)?));
        Ok(())
    })
}

/// Measure from the JSON literal `[{"theta": .., "w": ..}, ..]`.
///
/// # Safety
///
/// `json` must be null or a nul-terminated string; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_measure_from_json(
    json: *const c_char,
    out: *mut *mut ZalcmanMeasure,
) -> ZalcmanStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(ZalcmanStatus::InvalidArgument, e.to_string()))?;
        boxed(out, ZalcmanMeasure(DiscreteMeasure::from_json(text)?));
        Ok(())
    })
}

/// Number of atoms, or 0 for a null handle.
///
/// # Safety
///
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zalcman_measure_len(m: *const ZalcmanMeasure) -> usize {
    m.as_ref().map_or(0, |m| m.0.len())
}

/// Copies atom `index` into `theta` and `w`.
///
/// # Safety
///
/// `m` must be null or a live handle; `theta` and `w` must be null or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_measure_atom(
    m: *const ZalcmanMeasure,
    index: usize,
    theta: *mut f64,
    w: *mut f64,
) -> ZalcmanStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("measure"))?;
        let (theta, w) = (out_ref(theta, "theta")?, out_ref(w, "w")?);
        let atom = m.0.atoms().get(index).ok_or_else(|| {
            Failure(
                ZalcmanStatus::InvalidArgument,
                format!("atom index {index} out of range for {} atoms", m.0.len()),
            )
        })?;
        (*theta, *w) = (atom.theta, atom.w);
        Ok(())
    })
}

/// # Safety
///
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zalcman_measure_free(m: *mut ZalcmanMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `λ a_n² − a_{2n−1}` for the member built from `measure`.
///
/// # Safety
///
/// `measure` must be null or a live handle; `re` and `im` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_phi(
    alpha: f64,
    lambda: f64,
    n: usize,
    measure: *const ZalcmanMeasure,
    re: *mut f64,
    im: *mut f64,
) -> ZalcmanStatus {
    guard(|| {
        let m = measure.as_ref().ok_or_else(|| null("measure"))?;
        let (re, im) = (out_ref(re, "re")?, out_ref(im, "im")?);
        if n < 2 {
            return Err(Error::OrderTooSmall { got: n, min: 2 }.into());
        }
        let f = coeffs_from_measure(Alpha::new(alpha)?, &m.0, 2 * n - 1)?;
        let v = phi(Lambda::new(lambda)?, n, &f)?.value;
        (*re, *im) = (v.re, v.im);
        Ok(())
    })
}

/// Default search settings.
#[no_mangle]
pub extern "C" fn zalcman_search_config_default() -> ZalcmanSearchConfig {
    let d = SearchConfig::default();
    ZalcmanSearchConfig {
        atoms: 0,
        starts: d.starts,
        max_iters: d.max_iters,
        tol_converge: d.tol_converge,
        seed: d.seed,
    }
}

/// Multi-start maximization of `|Φ|`; a null `config` uses the defaults.
///
/// # Safety
///
/// `config` must be null or readable; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_search(
    alpha: f64,
    lambda: f64,
    n: usize,
    config: *const ZalcmanSearchConfig,
    out: *mut *mut ZalcmanSearch,
) -> ZalcmanStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let c = config
            .as_ref()
            .copied()
            .unwrap_or_else(|| zalcman_search_config_default());
        let cfg = SearchConfig {
            atoms: (c.atoms > 0).then_some(c.atoms),
            starts: c.starts,
            max_iters: c.max_iters,
            tol_converge: c.tol_converge,
            seed: c.seed,
        };
        let r = maximize_phi(Alpha::new(alpha)?, Lambda::new(lambda)?, n, &cfg)?;
        boxed(out, ZalcmanSearch(r));
        Ok(())
    })
}

/// # Safety
///
/// `s` must be null or a live handle; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_search_summary(
    s: *const ZalcmanSearch,
    out: *mut ZalcmanSearchSummary,
) -> ZalcmanStatus {
    guard(|| {
        let r = &s.as_ref().ok_or_else(|| null("search"))?.0;
        *out_ref(out, "out")? = ZalcmanSearchSummary {
            best_modulus: r.best_modulus,
            bound: r.bound,
            gap: r.gap,
            seeded_modulus: r.seeded_modulus,
            starts_used: r.starts_used,
            iterations: r.iterations_total,
            violations: r.violations,
            converged: r.converged,
        };
        Ok(())
    })
}

/// New handle holding a copy of the best measure found.
///
/// # Safety
///
/// `s` must be null or a live handle; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn zalcman_search_best_measure(
    s: *const ZalcmanSearch,
    out: *mut *mut ZalcmanMeasure,
) -> ZalcmanStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let r = &s.as_ref().ok_or_else(|| null("search"))?.0;
        boxed(out, ZalcmanMeasure(r.best_measure.clone()));
        Ok(())
    })
}

/// # Safety
///
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zalcman_search_free(s: *mut ZalcmanSearch) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
