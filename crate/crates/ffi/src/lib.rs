//! C ABI over the loopbound engine.
//!
//! Parameter points and weight sets are opaque handles created by `lb_*_new`
//! or `lb_weights_*` and released by the matching `_free`. Every fallible
//! call returns an [`LbStatus`] and writes its result through an out pointer,
//! which is left untouched on failure. Panics never cross the boundary.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use loopbound::dhsys::{self, DhError};
use loopbound::params::{C2Params, GenOnParams, OnParams, ParamError};
use loopbound::reflect::{self, Catalog, ReflectionSystem};
use loopbound::weights::{self, Branch, Symbol, WeightSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbStatus {
    Ok = 0,
    NullPointer = 1,
    /// A parameter hits a vanishing denominator.
    Degenerate = 2,
    InvalidArgument = 3,
    RankDeficient = 4,
    Failed = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbBranch {
    Real = 0,
    Imaginary = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbSymbol {
    T = 0,
    U1 = 1,
    U2 = 2,
    V = 3,
    W1 = 4,
    W2 = 5,
    Beta1 = 6,
    Beta2 = 7,
    Beta3 = 8,
    Beta4 = 9,
}

/// Derived loop fugacities of a parameter point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LbFugacities {
    pub n: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub rho: f64,
}

/// Opaque O(n) parameter point.
pub struct LbOnParams(OnParams);

/// Opaque C₂⁽¹⁾ parameter point.
pub struct LbC2Params(C2Params);

/// Opaque weight set.
pub struct LbWeights(WeightSet);

impl From<LbBranch> for Branch {
    fn from(b: LbBranch) -> Self {
        match b {
            LbBranch::Real => Branch::Real,
            LbBranch::Imaginary => Branch::Imaginary,
        }
    }
}

impl From<Symbol> for LbSymbol {
    fn from(s: Symbol) -> Self {
        match s {
            Symbol::T => LbSymbol::T,
            Symbol::U1 => LbSymbol::U1,
            Symbol::U2 => LbSymbol::U2,
            Symbol::V => LbSymbol::V,
            Symbol::W1 => LbSymbol::W1,
            Symbol::W2 => LbSymbol::W2,
            Symbol::Beta1 => LbSymbol::Beta1,
            Symbol::Beta2 => LbSymbol::Beta2,
            Symbol::Beta3 => LbSymbol::Beta3,
            Symbol::Beta4 => LbSymbol::Beta4,
        }
    }
}

impl From<ParamError> for LbStatus {
    fn from(e: ParamError) -> Self {
        match e {
            ParamError::Degenerate { .. } => LbStatus::Degenerate,
            ParamError::NonFinite(_) => LbStatus::InvalidArgument,
        }
    }
}

impl From<DhError> for LbStatus {
    fn from(e: DhError) -> Self {
        match e {
            DhError::RankDeficient { .. } => LbStatus::RankDeficient,
            DhError::Param(p) => p.into(),
            DhError::NonFinite | DhError::LengthMismatch(..) | DhError::ZeroVectors => {
                LbStatus::InvalidArgument
            }
            _ => LbStatus::Failed,
        }
    }
}

impl From<reflect::ReflectError> for LbStatus {
    fn from(_: reflect::ReflectError) -> Self {
        LbStatus::Failed
    }
}

fn guard(f: impl FnOnce() -> Result<(), LbStatus>) -> LbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LbStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => LbStatus::Panic,
    }
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), LbStatus> {
    if out.is_null() {
        return Err(LbStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, LbStatus> {
    p.as_ref().ok_or(LbStatus::NullPointer)
}

/// Boxes `v` into `out`; checks the pointer first so nothing leaks.
unsafe fn put_boxed<T>(out: *mut *mut T, v: T) -> Result<(), LbStatus> {
    if out.is_null() {
        return Err(LbStatus::NullPointer);
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Short description of a status code, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lb_status_message(status: LbStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        LbStatus::Ok => b"ok\0",
        LbStatus::NullPointer => b"null pointer argument\0",
        LbStatus::Degenerate => b"parameter point hits a vanishing denominator\0",
        LbStatus::InvalidArgument => b"invalid argument\0",
        LbStatus::RankDeficient => b"linear system has unexpected rank\0",
        LbStatus::Failed => b"computation failed\0",
        LbStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lb_on_params_new(
    lambda: f64,
    lambda1: f64,
    x: f64,
    n2: f64,
    out: *mut *mut LbOnParams,
) -> LbStatus {
    guard(|| {
        let p = OnParams::new(lambda, lambda1, x, n2)?;
        put_boxed(out, LbOnParams(p))
    })
}

/// # Safety
/// `p` must come from [`lb_on_params_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lb_on_params_free(p: *mut LbOnParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_on_params_fugacities(
    p: *const LbOnParams,
    out: *mut LbFugacities,
) -> LbStatus {
    guard(|| {
        let p = &get(p)?.0;
        put(
            out,
            LbFugacities {
                n: p.n,
                n1: p.n1,
                n2: p.n2,
                n3: p.n3,
                rho: p.rho,
            },
        )
    })
}

/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lb_c2_params_new(
    lambda: f64,
    lambda1: f64,
    x: f64,
    n1: f64,
    out: *mut *mut LbC2Params,
) -> LbStatus {
    guard(|| {
        let p = C2Params::new(lambda, lambda1, x, n1)?;
        put_boxed(out, LbC2Params(p))
    })
}

/// # Safety
/// `p` must come from [`lb_c2_params_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lb_c2_params_free(p: *mut LbC2Params) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_c2_params_fugacities(
    p: *const LbC2Params,
    out: *mut LbFugacities,
) -> LbStatus {
    guard(|| {
        let p = &get(p)?.0;
        put(
            out,
            LbFugacities {
                n: p.n,
                n1: p.n1,
                n2: p.n2,
                n3: p.n3,
                rho: p.rho,
            },
        )
    })
}

/// Bulk O(n) weights (t, u1, u2, v, w1, w2).
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lb_weights_on_bulk(
    lambda: f64,
    x: f64,
    out: *mut *mut LbWeights,
) -> LbStatus {
    guard(|| {
        if !(lambda.is_finite() && x.is_finite()) {
            return Err(LbStatus::InvalidArgument);
        }
        put_boxed(out, LbWeights(weights::on_bulk_at(lambda, x)))
    })
}

/// Non-diagonal O(n) boundary weights (β1, β2, β3).
///
/// # Safety
/// `p` must be a live handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lb_weights_on_boundary(
    p: *const LbOnParams,
    branch: LbBranch,
    out: *mut *mut LbWeights,
) -> LbStatus {
    guard(|| {
        let p = &get(p)?.0;
        put_boxed(out, LbWeights(weights::on_boundary(p, branch.into())))
    })
}

/// C₂⁽¹⁾ bulk weights.
///
/// # Safety
/// `p` must be a live handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lb_weights_c2_bulk(
    p: *const LbC2Params,
    out: *mut *mut LbWeights,
) -> LbStatus {
    guard(|| {
        let p = &get(p)?.0;
        put_boxed(out, LbWeights(weights::c2_bulk(p)))
    })
}

/// C₂⁽¹⁾ boundary weights (β1..β4).
///
/// # Safety
/// `p` must be a live handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lb_weights_c2_boundary(
    p: *const LbC2Params,
    branch: LbBranch,
    out: *mut *mut LbWeights,
) -> LbStatus {
    guard(|| {
        let p = &get(p)?.0;
        put_boxed(out, LbWeights(weights::c2_boundary(p, branch.into())))
    })
}

/// One-parameter family of generalized O(n) boundary weights (β1..β4).
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lb_weights_generalized(
    lambda: f64,
    x: f64,
    k: f64,
    n1: f64,
    out: *mut *mut LbWeights,
) -> LbStatus {
    guard(|| {
        let g = GenOnParams::new(lambda, x, k, n1)?;
        put_boxed(out, LbWeights(weights::on_generalized_boundary(&g)))
    })
}

/// # Safety
/// `w` must come from an `lb_weights_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lb_weights_free(w: *mut LbWeights) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Number of entries; 0 for a null handle.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lb_weights_len(w: *const LbWeights) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

/// Entry `index` in symbol order.
///
/// # Safety
/// `w` must be a live handle; `symbol` and `value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_weights_get(
    w: *const LbWeights,
    index: usize,
    symbol: *mut LbSymbol,
    value: *mut f64,
) -> LbStatus {
    guard(|| {
        let w = &get(w)?.0;
        let (s, v) = w.iter().nth(index).ok_or(LbStatus::InvalidArgument)?;
        if symbol.is_null() || value.is_null() {
            return Err(LbStatus::NullPointer);
        }
        put(symbol, s.into())?;
        put(value, v)
    })
}

/// Largest relative residual of the three O(n) boundary forms of `branch`.
///
/// # Safety
/// `p` and `w` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_on_boundary_residual(
    p: *const LbOnParams,
    branch: LbBranch,
    w: *const LbWeights,
    out: *mut f64,
) -> LbStatus {
    guard(|| {
        let (p, w) = (&get(p)?.0, &get(w)?.0);
        let r = dhsys::on_boundary_system(p, branch.into()).max_residual(w)?;
        put(out, r)
    })
}

/// Largest relative residual of the five C₂⁽¹⁾ boundary forms of `branch`.
///
/// # Safety
/// `p` and `w` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_c2_boundary_residual(
    p: *const LbC2Params,
    branch: LbBranch,
    w: *const LbWeights,
    out: *mut f64,
) -> LbStatus {
    guard(|| {
        let (p, w) = (&get(p)?.0, &get(w)?.0);
        let r = dhsys::c2_boundary_system(p, branch.into()).max_residual(w)?;
        put(out, r)
    })
}

fn system(
    cell: &'static OnceLock<Option<ReflectionSystem>>,
    cat: fn() -> Catalog,
) -> Result<&'static ReflectionSystem, LbStatus> {
    cell.get_or_init(|| ReflectionSystem::new(cat()).ok())
        .as_ref()
        .ok_or(LbStatus::Failed)
}

static ON: OnceLock<Option<ReflectionSystem>> = OnceLock::new();
static C2: OnceLock<Option<ReflectionSystem>> = OnceLock::new();
static GEN: OnceLock<Option<ReflectionSystem>> = OnceLock::new();

/// Largest reflection-equation class residual with the closed-form O(n)
/// weights at spectral parameters `x` (from `p`) and `y`.
///
/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_on_reflection_residual(
    p: *const LbOnParams,
    y: f64,
    branch: LbBranch,
    out: *mut f64,
) -> LbStatus {
    guard(|| {
        let p = &get(p)?.0;
        let sys = system(&ON, Catalog::on)?;
        let r = sys.max_residual(&reflect::on_slot_weights(p, y, branch.into()), &p.into())?;
        put(out, r)
    })
}

/// As [`lb_on_reflection_residual`] for C₂⁽¹⁾.
///
/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_c2_reflection_residual(
    p: *const LbC2Params,
    y: f64,
    branch: LbBranch,
    out: *mut f64,
) -> LbStatus {
    guard(|| {
        let p = &get(p)?.0;
        let sys = system(&C2, Catalog::c2)?;
        let r = sys.max_residual(&reflect::c2_slot_weights(p, y, branch.into()), &p.into())?;
        put(out, r)
    })
}

/// As [`lb_on_reflection_residual`] for the generalized model with equal
/// boundary fugacities `n1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_generalized_reflection_residual(
    lambda: f64,
    x: f64,
    k: f64,
    n1: f64,
    y: f64,
    out: *mut f64,
) -> LbStatus {
    guard(|| {
        let g = GenOnParams::new(lambda, x, k, n1)?;
        let sys = system(&GEN, Catalog::on_generalized)?;
        let r = sys.max_residual(&reflect::gen_slot_weights(&g, y), &(&g).into())?;
        put(out, r)
    })
}

/// max|aᵢbⱼ − aⱼbᵢ| / (max|a|·max|b|) over two arrays of length `len`.
///
/// # Safety
/// `a` and `b` must point to `len` readable doubles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lb_projective_deviation(
    a: *const f64,
    b: *const f64,
    len: usize,
    out: *mut f64,
) -> LbStatus {
    guard(|| {
        if a.is_null() || b.is_null() {
            return Err(LbStatus::NullPointer);
        }
        let (a, b) = (
            std::slice::from_raw_parts(a, len),
            std::slice::from_raw_parts(b, len),
        );
        put(out, dhsys::projective_deviation(a, b)?)
    })
}
