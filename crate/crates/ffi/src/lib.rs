//! C ABI over the core library: opaque handles, integer status codes, caller-owned buffers.
//!
//! Every entry point returns an `FfrankStatus`; outputs go through pointers. Buffers are filled
//! only when large enough, and the required length is always written to `needed` when non-null,
//! so callers can query with a null buffer first. The message of the most recent failure on
//! the calling thread is available from `ffrank_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ffrank::characters::{jacobi_symbol, ResidueRing};
use ffrank::elliptic_l::{
    l_polynomial_ec, zero_power_sums, CurveRecord, ECLPolynomial, EllipticSurface, FieldCache, LConfig,
    DEFAULT_FIELD_BUDGET,
};
use ffrank::fourier_poisson::gauss_sums_quadratic_all;
use ffrank::{Error, PolyFq};

/// Status codes; 0 is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfrankStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidField = 4,
    InvalidArgument = 5,
    SingularCurve = 6,
    /// deg N_E < 4, so the L-function is not a polynomial of degree deg N_E − 4.
    NegativeLDegree = 7,
    DepthExceeded = 8,
    BudgetExceeded = 9,
    BufferTooSmall = 10,
    Inconsistent = 11,
    Panic = 12,
}

impl From<&Error> for FfrankStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } => FfrankStatus::Parse,
            Error::InvalidFieldOrder(_) | Error::ModulusMismatch(..) => FfrankStatus::InvalidField,
            Error::SingularCurve => FfrankStatus::SingularCurve,
            Error::NegativeLDegree(_) => FfrankStatus::NegativeLDegree,
            Error::DepthExceeded { .. } => FfrankStatus::DepthExceeded,
            Error::BudgetExceeded { .. } | Error::GroupTooLarge { .. } => FfrankStatus::BudgetExceeded,
            Error::Inconsistent(_) => FfrankStatus::Inconsistent,
            _ => FfrankStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(FfrankStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail((&e).into(), e.to_string())
    }
}

type FfiResult = Result<(), Fail>;

/// Runs `f`, recording failures and converting panics; panics never cross the boundary.
fn guard(f: impl FnOnce() -> FfiResult) -> FfrankStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FfrankStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            FfrankStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(FfrankStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(FfrankStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn poly(q: u32, p: *const c_char, what: &str) -> Result<PolyFq, Fail> {
    ffrank::fq_poly::field::check_field_order(q as u64)?;
    Ok(PolyFq::parse(q, text(p, what)?)?)
}

/// Copies `src` into `(buf, len)` when it fits; `needed` gets `src.len()` either way.
unsafe fn fill<T: Copy>(src: &[T], buf: *mut T, len: usize, needed: *mut usize) -> FfiResult {
    if !needed.is_null() {
        *needed = src.len();
    }
    if buf.is_null() || len < src.len() {
        if buf.is_null() && !needed.is_null() {
            return Ok(());
        }
        return Err(Fail(FfrankStatus::BufferTooSmall, format!("buffer holds {len}, need {}", src.len())));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// NUL-terminated copy; the required size includes the terminator.
unsafe fn fill_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> FfiResult {
    let mut bytes: Vec<c_char> = s.bytes().map(|b| b as c_char).collect();
    bytes.push(0);
    fill(&bytes, buf, len, needed)
}

/// Fiber tables for one field, shared read-only by every curve computed against it.
pub struct FfrankContext {
    cache: FieldCache,
}

/// One elliptic surface y² = x³ + A x + B with its L-polynomial.
pub struct FfrankCurve {
    surface: EllipticSurface,
    l: ECLPolynomial,
}

/// Human-readable name of a status code (static storage).
#[no_mangle]
pub extern "C" fn ffrank_status_name(status: FfrankStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        FfrankStatus::Ok => b"ok\0",
        FfrankStatus::NullArgument => b"null argument\0",
        FfrankStatus::InvalidUtf8 => b"invalid UTF-8\0",
        FfrankStatus::Parse => b"parse error\0",
        FfrankStatus::InvalidField => b"invalid field order\0",
        FfrankStatus::InvalidArgument => b"invalid argument\0",
        FfrankStatus::SingularCurve => b"singular curve\0",
        FfrankStatus::NegativeLDegree => b"conductor degree below 4\0",
        FfrankStatus::DepthExceeded => b"prime-table depth exceeded\0",
        FfrankStatus::BudgetExceeded => b"budget exceeded\0",
        FfrankStatus::BufferTooSmall => b"buffer too small\0",
        FfrankStatus::Inconsistent => b"internal consistency check failed\0",
        FfrankStatus::Panic => b"internal panic\0",
    };
    s.as_ptr() as *const c_char
}

/// Message of the last failure on this thread (empty if none).
///
/// # Safety
/// `buf` must be null or valid for `len` bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ffrank_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> FfrankStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match fill_str(&msg, buf, len, needed) {
        Ok(()) => FfrankStatus::Ok,
        Err(Fail(code, _)) => code,
    }
}

/// New context for F_q with fiber tables through extension degree `depth`
/// (0 picks the largest depth with q^depth within the default budget).
///
/// # Safety
/// `out` must be writable; on success it owns a handle released by `ffrank_context_free`.
#[no_mangle]
pub unsafe extern "C" fn ffrank_context_new(q: u32, depth: usize, out: *mut *mut FfrankContext) -> FfrankStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        ffrank::fq_poly::field::check_field_order(q as u64)?;
        let ceiling = FieldCache::default_depth(q, ffrank::elliptic_l::fibers::FIELD_CEILING);
        let depth = match depth {
            0 => FieldCache::default_depth(q, DEFAULT_FIELD_BUDGET),
            d if d > ceiling => {
                return Err(Fail(FfrankStatus::BudgetExceeded, format!("depth {d} exceeds {ceiling} for q = {q}")))
            }
            d => d,
        };
        let cache = FieldCache::new(q, depth)?;
        *out = Box::into_raw(Box::new(FfrankContext { cache }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must be null or a handle from `ffrank_context_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffrank_context_free(ctx: *mut FfrankContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Fiber-table depth of a context, or 0 for null.
///
/// # Safety
/// `ctx` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffrank_context_depth(ctx: *const FfrankContext) -> usize {
    ctx.as_ref().map_or(0, |c| c.cache.depth())
}

/// Builds the surface for A, B (canonical comma form, ascending coefficients) and its
/// L-polynomial. Fails with `SingularCurve` when Δ = 0 and `NegativeLDegree` for constant curves.
///
/// # Safety
/// `ctx` a live handle, `a`/`b` NUL-terminated strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffrank_curve_new(
    ctx: *const FfrankContext,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut FfrankCurve,
) -> FfrankStatus {
    guard(|| {
        let ctx = ctx.as_ref().ok_or_else(|| null("ctx"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let q = ctx.cache.q;
        let surface = EllipticSurface::new(&poly(q, a, "A")?, &poly(q, b, "B")?)?;
        let l = l_polynomial_ec(&surface, &ctx.cache, LConfig::new(ctx.cache.depth()))?;
        *out = Box::into_raw(Box::new(FfrankCurve { surface, l }));
        Ok(())
    })
}

/// # Safety
/// `curve` must be null or a handle from `ffrank_curve_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffrank_curve_free(curve: *mut FfrankCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Scalar invariants: deg N_E, N = deg L, ε ∈ {±1}, analytic rank. Any output may be null.
///
/// # Safety
/// `curve` a live handle; non-null outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ffrank_curve_invariants(
    curve: *const FfrankCurve,
    conductor_degree: *mut usize,
    l_degree: *mut usize,
    epsilon: *mut i32,
    analytic_rank: *mut usize,
) -> FfrankStatus {
    guard(|| {
        let c = curve.as_ref().ok_or_else(|| null("curve"))?;
        if let Some(p) = conductor_degree.as_mut() {
            *p = c.surface.conductor().degree;
        }
        if let Some(p) = l_degree.as_mut() {
            *p = c.l.degree();
        }
        if let Some(p) = epsilon.as_mut() {
            *p = c.l.epsilon as i32;
        }
        if let Some(p) = analytic_rank.as_mut() {
            *p = c.l.analytic_rank;
        }
        Ok(())
    })
}

/// Integer coefficients c_0..c_N.
///
/// # Safety
/// `curve` a live handle; `buf` null or valid for `len` values; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ffrank_curve_coefficients(
    curve: *const FfrankCurve,
    buf: *mut i64,
    len: usize,
    needed: *mut usize,
) -> FfrankStatus {
    guard(|| {
        let c = curve.as_ref().ok_or_else(|| null("curve"))?;
        fill(&c.l.coeffs, buf, len, needed)
    })
}

/// Zeros μ_i of L(u) = Π(1 − μ_i u) as interleaved (re, im) pairs; `len` and `needed` count doubles.
///
/// # Safety
/// As for `ffrank_curve_coefficients`.
#[no_mangle]
pub unsafe extern "C" fn ffrank_curve_zeros(
    curve: *const FfrankCurve,
    buf: *mut f64,
    len: usize,
    needed: *mut usize,
) -> FfrankStatus {
    guard(|| {
        let c = curve.as_ref().ok_or_else(|| null("curve"))?;
        let flat: Vec<f64> = c.l.zeros.iter().flat_map(|z| [z.re, z.im]).collect();
        fill(&flat, buf, len, needed)
    })
}

/// (1/n) Σ (μ_i/q)^n and the prime-side value it must equal, for 1 ≤ n ≤ table depth.
///
/// # Safety
/// `curve` a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ffrank_curve_power_sum(
    curve: *const FfrankCurve,
    n: usize,
    zero_side_re: *mut f64,
    zero_side_im: *mut f64,
    prime_side: *mut f64,
) -> FfrankStatus {
    guard(|| {
        let c = curve.as_ref().ok_or_else(|| null("curve"))?;
        if zero_side_re.is_null() || zero_side_im.is_null() || prime_side.is_null() {
            return Err(null("output"));
        }
        if n == 0 {
            return Err(Fail(FfrankStatus::InvalidArgument, "n must be at least 1".into()));
        }
        let check = zero_power_sums(&c.l, n)?;
        *zero_side_re = check.lhs.re;
        *zero_side_im = check.lhs.im;
        *prime_side = check.rhs_full;
        Ok(())
    })
}

/// JSON record: q, A, B, deg N_E, bad places, L, ε, analytic rank.
///
/// # Safety
/// `curve` a live handle; `buf` null or valid for `len` bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ffrank_curve_json(
    curve: *const FfrankCurve,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> FfrankStatus {
    guard(|| {
        let c = curve.as_ref().ok_or_else(|| null("curve"))?;
        let json = serde_json::to_string(&CurveRecord::new(&c.surface, &c.l))
            .map_err(|e| Fail(FfrankStatus::Inconsistent, e.to_string()))?;
        fill_str(&json, buf, len, needed)
    })
}

/// Quadratic symbol (f/d) ∈ {−1, 0, 1} for monic d of positive degree.
///
/// # Safety
/// `f`, `d` NUL-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffrank_jacobi_symbol(q: u32, f: *const c_char, d: *const c_char, out: *mut i32) -> FfrankStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = jacobi_symbol(&poly(q, f, "f")?, &poly(q, d, "d")?)? as i32;
        Ok(())
    })
}

/// Quadratic Gauss sum G(V, χ_P) = Σ_{a mod P} (a/P) e(aV/P) for monic irreducible P.
///
/// # Safety
/// `v`, `p` NUL-terminated strings; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ffrank_gauss_sum(
    q: u32,
    v: *const c_char,
    p: *const c_char,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FfrankStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return Err(null("output"));
        }
        let p = poly(q, p, "P")?;
        let v = poly(q, v, "V")?;
        let ring = ResidueRing::new(&p)?;
        let g = gauss_sums_quadratic_all(&p)?[ring.reduce(&v) as usize];
        *out_re = g.re;
        *out_im = g.im;
        Ok(())
    })
}
