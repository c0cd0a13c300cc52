//! C ABI over `wcfpp`.
//!
//! Every function returns a [`WcfppStatus`]. On failure the message is kept
//! per thread and can be read with [`wcfpp_last_error_message`]. Handles are
//! opaque; each `*_new`/`*_parse`/`*_build` has a matching `*_free`.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wcfpp::basis::{basis_constant, BasicSequenceSpec, Method, SimplexPoint};
use wcfpp::constructions::{map_build, AffineMapSpec, AlphaSchedule, MapKind, MapParams};
use wcfpp::harness::{map_apply, min_displacement};
use wcfpp::spaces::SpaceOracle;
use wcfpp::{CoeffVector, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcfppStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidVector = 3,
    NotPolyhedral = 4,
    DimensionCap = 5,
    Infeasible = 6,
    Unbounded = 7,
    TruncationOverflow = 8,
    BufferTooSmall = 9,
    Numerical = 10,
    Panic = 11,
}

/// Method behind an estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcfppMethod {
    ExtremePoints = 0,
    LinearPrograms = 1,
    Sampled = 2,
    Analytic = 3,
}

/// Two-sided bound on a constant. `upper` may be `INFINITY`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WcfppEstimate {
    pub lower: f64,
    pub upper: f64,
    pub certified: bool,
    pub method: WcfppMethod,
}

/// A norm on coefficient vectors.
pub struct WcfppSpace {
    inner: SpaceOracle,
}

/// A basic sequence at a fixed truncation.
pub struct WcfppSequence {
    inner: BasicSequenceSpec,
}

/// A column-stochastic affine map on the coefficient simplex.
pub struct WcfppMap {
    inner: AffineMapSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> WcfppStatus {
    match e {
        Error::InvalidVector { .. } | Error::NotInSimplex(_) => WcfppStatus::InvalidVector,
        Error::NotPolyhedral(_) => WcfppStatus::NotPolyhedral,
        Error::DimensionCap { .. } => WcfppStatus::DimensionCap,
        Error::Infeasible => WcfppStatus::Infeasible,
        Error::Unbounded => WcfppStatus::Unbounded,
        Error::TruncationOverflow { .. } => WcfppStatus::TruncationOverflow,
        Error::CycleSuspected(_) | Error::Internal(_) => WcfppStatus::Numerical,
        _ => WcfppStatus::InvalidArgument,
    }
}

struct Fail(WcfppStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(WcfppStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> WcfppStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WcfppStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            WcfppStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(WcfppStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wcfpp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wcfpp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a space name (`c0`, `ell1`, `ell-p:2`, `summing`, `lin-ell1`,
/// `james:2`) or a JSON descriptor.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_space_parse(name: *const c_char, out: *mut *mut WcfppSpace) -> WcfppStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let inner: SpaceOracle = str_arg(name, "name")?.parse()?;
        *out = Box::into_raw(Box::new(WcfppSpace { inner }));
        Ok(())
    })
}

/// # Safety
/// `space` must come from [`wcfpp_space_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_space_free(space: *mut WcfppSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// `out = ||x||`.
///
/// # Safety
/// `x` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_norm(space: *const WcfppSpace, x: *const f64, len: usize, out: *mut f64) -> WcfppStatus {
    guard(|| {
        let space = ref_arg(space, "space")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = space.inner.norm(slice_arg(x, len, "x")?)?;
        Ok(())
    })
}

/// A sequence `canonical`, `summing`, `shifted:<p>`, `convex[:<base>]` (or
/// JSON) in `ambient`, truncated at `n`. `ambient` may be null for
/// `summing`, which then lives in c0.
///
/// # Safety
/// Pointers must be valid; `preset` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_sequence_new(
    ambient: *const WcfppSpace,
    preset: *const c_char,
    n: usize,
    out: *mut *mut WcfppSequence,
) -> WcfppStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if n == 0 {
            return Err(Fail(WcfppStatus::InvalidArgument, "n must be >= 1".into()));
        }
        let amb = ambient.as_ref().map(|s| s.inner.clone());
        let inner = wcfpp::cli::parse_sequence(str_arg(preset, "preset")?, amb, n)?;
        *out = Box::into_raw(Box::new(WcfppSequence { inner }));
        Ok(())
    })
}

/// # Safety
/// `seq` must come from [`wcfpp_sequence_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_sequence_free(seq: *mut WcfppSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Basis constant `max_{k<=n} ||P_k||`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_basis_constant(
    seq: *const WcfppSequence,
    n: usize,
    out: *mut WcfppEstimate,
) -> WcfppStatus {
    guard(|| {
        let seq = ref_arg(seq, "seq")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = basis_constant(&seq.inner.with_truncation(n.max(seq.inner.truncation)), n)?;
        *out = WcfppEstimate {
            lower: e.lower,
            upper: e.upper,
            certified: e.certified,
            method: match e.method {
                Method::ExactExtremePoints => WcfppMethod::ExtremePoints,
                Method::ExactLp => WcfppMethod::LinearPrograms,
                Method::SampledAscent => WcfppMethod::Sampled,
                Method::AnalyticBound => WcfppMethod::Analytic,
            },
        };
        Ok(())
    })
}

/// Builds `f`/`f-main`, `f0`, `f1` or `f2` on a domain of `n` columns.
/// The main map needs `alpha_len >= 1` schedule values; the others ignore
/// `alphas`.
///
/// # Safety
/// `kind` NUL-terminated; `alphas` points to `alpha_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_map_build(
    kind: *const c_char,
    n: usize,
    alphas: *const f64,
    alpha_len: usize,
    out: *mut *mut WcfppMap,
) -> WcfppStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let kind: MapKind = str_arg(kind, "kind")?.parse()?;
        let mut params = MapParams::new(n);
        if kind == MapKind::FMain {
            params.alpha = Some(AlphaSchedule::explicit(slice_arg(alphas, alpha_len, "alphas")?.to_vec())?);
        }
        let inner = map_build(kind, &params)?;
        *out = Box::into_raw(Box::new(WcfppMap { inner }));
        Ok(())
    })
}

/// # Safety
/// `map` must come from [`wcfpp_map_build`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_map_free(map: *mut WcfppMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Applies the map to the simplex point `t`. The image is written to
/// `out[..*out_len]`; `BufferTooSmall` reports the needed length in
/// `*out_len`.
///
/// # Safety
/// `t` points to `len` doubles, `out` to `out_cap` doubles, `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_map_apply(
    map: *const WcfppMap,
    t: *const f64,
    len: usize,
    out: *mut f64,
    out_cap: usize,
    out_len: *mut usize,
) -> WcfppStatus {
    guard(|| {
        let map = ref_arg(map, "map")?;
        let out_len = out_len.as_mut().ok_or_else(|| null("out_len"))?;
        let p = SimplexPoint::new(CoeffVector::new(slice_arg(t, len, "t")?.to_vec())?)?;
        let img = map_apply(&map.inner, &p)?;
        *out_len = img.len();
        if img.len() > out_cap {
            return Err(Fail(
                WcfppStatus::BufferTooSmall,
                format!("need {} doubles, have {out_cap}", img.len()),
            ));
        }
        if !img.is_empty() {
            if out.is_null() {
                return Err(null("out"));
            }
            std::slice::from_raw_parts_mut(out, img.len()).copy_from_slice(&img);
        }
        Ok(())
    })
}

/// Minimum of `||(A - I) t||` over the simplex of support `n`. When
/// `argmin` is not null it receives `n` doubles.
///
/// # Safety
/// Pointers must be valid; `argmin` null or room for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn wcfpp_min_displacement(
    map: *const WcfppMap,
    space: *const WcfppSpace,
    n: usize,
    value: *mut f64,
    argmin: *mut f64,
) -> WcfppStatus {
    guard(|| {
        let map = ref_arg(map, "map")?;
        let space = ref_arg(space, "space")?;
        let value = value.as_mut().ok_or_else(|| null("value"))?;
        let rep = min_displacement(&map.inner, &space.inner, n)?;
        *value = rep.best_value;
        if !argmin.is_null() {
            let dst = std::slice::from_raw_parts_mut(argmin, n);
            for (i, d) in dst.iter_mut().enumerate() {
                *d = rep.best_point.get(i);
            }
        }
        Ok(())
    })
}
