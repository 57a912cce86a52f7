//! C ABI surface for the spdcone library.
//!
//! Every function returns a [`SpdcStatus`]; results travel through out
//! pointers. Handles are opaque and owned by the caller, released with
//! the matching `free` function. Matrices cross the boundary as
//! row-major arrays of `2 n^2` doubles, the real and imaginary part of
//! each entry interleaved, so entry `(i, j)` occupies slots
//! `2 (i n + j)` and `2 (i n + j) + 1`. On failure a human-readable
//! message is stored per thread and can be copied out with
//! [`spdc_last_error_message`]. Panics never cross the boundary; they
//! surface as [`SpdcStatus::Panic`].

use spdcone::opalg::{mat_exp, CMatrix};
use spdcone::project::{decompose_mvm, diag_decompose, project, ProjectOpts};
use spdcone::triple::{
    block_system, commutant_system, diagonal_system, is_triple_system, polynomial_system,
    scalar_system, TripleSystem,
};
use spdcone::{foliation, geometry, ConePoint, Error, UnitizedHermitian};
use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

/// Outcome of a call through the C interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpdcStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Two operands disagree in size.
    Dimension = 2,
    /// An operator that must be invertible is singular.
    Singular = 3,
    /// An input lies outside the domain of the operation.
    Domain = 4,
    /// An input is degenerate, for example a dependent basis.
    Degenerate = 5,
    /// An iteration failed to reach its tolerance.
    Convergence = 6,
    /// An index lies outside its valid range.
    Index = 7,
    /// A malformed request.
    Usage = 8,
    /// An internal panic was caught at the boundary.
    Panic = 9,
}

/// A Hermitian pair, the tangent values of the geometry.
pub struct SpdcPair(UnitizedHermitian);

/// A point of the open cone of positive pairs.
pub struct SpdcPoint(ConePoint);

/// A closed triple system, the tangent space of a worked submanifold.
pub struct SpdcSystem(TripleSystem);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

fn fail(status: SpdcStatus, msg: impl Into<String>) -> SpdcStatus {
    set_error(msg.into());
    status
}

fn status_for(e: &Error) -> SpdcStatus {
    match e {
        Error::Dimension { .. } => SpdcStatus::Dimension,
        Error::Singular(_) => SpdcStatus::Singular,
        Error::Domain(_) => SpdcStatus::Domain,
        Error::Degenerate(_) => SpdcStatus::Degenerate,
        Error::Convergence { .. } => SpdcStatus::Convergence,
        Error::Index(_) => SpdcStatus::Index,
        Error::Usage(_) => SpdcStatus::Usage,
    }
}

/// Lifts a library result into the status world, recording the message.
fn lift<T>(r: spdcone::Result<T>) -> Result<T, SpdcStatus> {
    r.map_err(|e| fail(status_for(&e), e.to_string()))
}

/// Runs a fallible body, converting panics into a status.
fn run(f: impl FnOnce() -> Result<(), SpdcStatus>) -> SpdcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpdcStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic without a message".into());
            fail(SpdcStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

/// Borrows a required input handle.
unsafe fn arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, SpdcStatus> {
    unsafe { p.as_ref() }.ok_or_else(|| fail(SpdcStatus::NullArgument, format!("{name} is null")))
}

/// Writes a value through a required out pointer.
unsafe fn put<T>(out: *mut T, name: &str, value: T) -> Result<(), SpdcStatus> {
    if out.is_null() {
        return Err(fail(SpdcStatus::NullArgument, format!("{name} is null")));
    }
    unsafe { out.write(value) };
    Ok(())
}

/// Reads `2 n^2` interleaved doubles into a complex matrix.
unsafe fn matrix_in(entries: *const f64, n: usize, name: &str) -> Result<CMatrix, SpdcStatus> {
    if entries.is_null() {
        return Err(fail(SpdcStatus::NullArgument, format!("{name} is null")));
    }
    let data = unsafe { slice::from_raw_parts(entries, 2 * n * n) };
    Ok(CMatrix::from_fn(n, n, |i, j| {
        num_complex::Complex64::new(data[2 * (i * n + j)], data[2 * (i * n + j) + 1])
    }))
}

/// Writes a complex matrix as `2 n^2` interleaved doubles.
unsafe fn matrix_out(out: *mut f64, mat: &CMatrix, name: &str) -> Result<(), SpdcStatus> {
    if out.is_null() {
        return Err(fail(SpdcStatus::NullArgument, format!("{name} is null")));
    }
    let n = mat.nrows();
    let data = unsafe { slice::from_raw_parts_mut(out, 2 * n * n) };
    for i in 0..n {
        for j in 0..n {
            data[2 * (i * n + j)] = mat[(i, j)].re;
            data[2 * (i * n + j) + 1] = mat[(i, j)].im;
        }
    }
    Ok(())
}

/// Collects an array of pair handles into owned values.
unsafe fn pairs_in(
    basis: *const *const SpdcPair,
    len: usize,
) -> Result<Vec<UnitizedHermitian>, SpdcStatus> {
    if basis.is_null() {
        return Err(fail(SpdcStatus::NullArgument, "basis is null"));
    }
    let handles = unsafe { slice::from_raw_parts(basis, len) };
    handles
        .iter()
        .enumerate()
        .map(|(i, &h)| unsafe { arg(h, &format!("basis[{i}]")) }.map(|p| p.0.clone()))
        .collect()
}

/// Copies the message of the most recent failure on this thread into
/// `buf` as a NUL-terminated string, truncating to `cap` bytes. Returns
/// the full message length in bytes, excluding the terminator; call
/// with a null buffer to size an allocation.
#[no_mangle]
pub unsafe extern "C" fn spdc_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let take = bytes.len().min(cap - 1);
            let dst = unsafe { slice::from_raw_parts_mut(buf as *mut u8, take + 1) };
            dst[..take].copy_from_slice(&bytes[..take]);
            dst[take] = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spdc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a Hermitian pair from a scalar and a row-major complex
/// matrix of `2 n^2` interleaved doubles. Fails unless the matrix is
/// Hermitian.
#[no_mangle]
pub unsafe extern "C" fn spdc_pair_new(
    n: usize,
    scalar: f64,
    entries: *const f64,
    out: *mut *mut SpdcPair,
) -> SpdcStatus {
    run(|| {
        let mat = unsafe { matrix_in(entries, n, "entries") }?;
        let pair = lift(UnitizedHermitian::new(scalar, mat))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPair(pair)))) }
    })
}

/// Releases a pair handle. A null handle is ignored.
#[no_mangle]
pub unsafe extern "C" fn spdc_pair_free(pair: *mut SpdcPair) {
    if !pair.is_null() {
        drop(unsafe { Box::from_raw(pair) });
    }
}

/// Matrix dimension of a pair.
#[no_mangle]
pub unsafe extern "C" fn spdc_pair_dim(pair: *const SpdcPair, out: *mut usize) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(pair, "pair") }?;
        unsafe { put(out, "out", p.0.dim()) }
    })
}

/// Copies the scalar coordinate and matrix block of a pair. The entry
/// buffer must hold `2 n^2` doubles.
#[no_mangle]
pub unsafe extern "C" fn spdc_pair_value(
    pair: *const SpdcPair,
    out_scalar: *mut f64,
    out_entries: *mut f64,
) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(pair, "pair") }?;
        unsafe { put(out_scalar, "out_scalar", p.0.scalar()) }?;
        unsafe { matrix_out(out_entries, p.0.hs(), "out_entries") }
    })
}

/// Hilbert-Schmidt norm of a pair.
#[no_mangle]
pub unsafe extern "C" fn spdc_pair_norm(pair: *const SpdcPair, out: *mut f64) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(pair, "pair") }?;
        unsafe { put(out, "out", p.0.hs_norm()) }
    })
}

/// Creates a cone point from a scalar and a Hermitian matrix, checking
/// that the pair is positive.
#[no_mangle]
pub unsafe extern "C" fn spdc_point_new(
    n: usize,
    scalar: f64,
    entries: *const f64,
    out: *mut *mut SpdcPoint,
) -> SpdcStatus {
    run(|| {
        let mat = unsafe { matrix_in(entries, n, "entries") }?;
        let pair = lift(UnitizedHermitian::new(scalar, mat))?;
        let point = lift(ConePoint::new(pair))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPoint(point)))) }
    })
}

/// Releases a point handle. A null handle is ignored.
#[no_mangle]
pub unsafe extern "C" fn spdc_point_free(point: *mut SpdcPoint) {
    if !point.is_null() {
        drop(unsafe { Box::from_raw(point) });
    }
}

/// Matrix dimension of a point.
#[no_mangle]
pub unsafe extern "C" fn spdc_point_dim(point: *const SpdcPoint, out: *mut usize) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(point, "point") }?;
        unsafe { put(out, "out", p.0.dim()) }
    })
}

/// Copies the scalar coordinate and matrix block of a point. The entry
/// buffer must hold `2 n^2` doubles.
#[no_mangle]
pub unsafe extern "C" fn spdc_point_value(
    point: *const SpdcPoint,
    out_scalar: *mut f64,
    out_entries: *mut f64,
) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(point, "point") }?;
        unsafe { put(out_scalar, "out_scalar", p.0.op().scalar()) }?;
        unsafe { matrix_out(out_entries, p.0.op().hs(), "out_entries") }
    })
}

/// Exponential of a pair, always a cone point.
#[no_mangle]
pub unsafe extern "C" fn spdc_point_exp(
    pair: *const SpdcPair,
    out: *mut *mut SpdcPoint,
) -> SpdcStatus {
    run(|| {
        let v = unsafe { arg(pair, "pair") }?;
        let point = mat_exp(&v.0);
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPoint(point)))) }
    })
}

/// Logarithm of a point, always a Hermitian pair.
#[no_mangle]
pub unsafe extern "C" fn spdc_point_log(
    point: *const SpdcPoint,
    out: *mut *mut SpdcPair,
) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(point, "point") }?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPair(p.0.log())))) }
    })
}

/// Geodesic distance between two points.
#[no_mangle]
pub unsafe extern "C" fn spdc_distance(
    a: *const SpdcPoint,
    b: *const SpdcPoint,
    out: *mut f64,
) -> SpdcStatus {
    run(|| {
        let d = lift(geometry::distance(
            &unsafe { arg(a, "a") }?.0,
            &unsafe { arg(b, "b") }?.0,
        ))?;
        unsafe { put(out, "out", d) }
    })
}

/// Riemannian inner product of two tangent pairs at a point.
#[no_mangle]
pub unsafe extern "C" fn spdc_metric(
    p: *const SpdcPoint,
    x: *const SpdcPair,
    y: *const SpdcPair,
    out: *mut f64,
) -> SpdcStatus {
    run(|| {
        let g = lift(geometry::metric_at(
            &unsafe { arg(p, "p") }?.0,
            &unsafe { arg(x, "x") }?.0,
            &unsafe { arg(y, "y") }?.0,
        ))?;
        unsafe { put(out, "out", g) }
    })
}

/// Riemannian exponential of a tangent pair at a point.
#[no_mangle]
pub unsafe extern "C" fn spdc_exp(
    p: *const SpdcPoint,
    v: *const SpdcPair,
    out: *mut *mut SpdcPoint,
) -> SpdcStatus {
    run(|| {
        let q = lift(geometry::exp_point(
            &unsafe { arg(p, "p") }?.0,
            &unsafe { arg(v, "v") }?.0,
        ))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPoint(q)))) }
    })
}

/// Riemannian logarithm of `q` at `p`.
#[no_mangle]
pub unsafe extern "C" fn spdc_log(
    p: *const SpdcPoint,
    q: *const SpdcPoint,
    out: *mut *mut SpdcPair,
) -> SpdcStatus {
    run(|| {
        let v = lift(geometry::log_point(
            &unsafe { arg(p, "p") }?.0,
            &unsafe { arg(q, "q") }?.0,
        ))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPair(v)))) }
    })
}

/// Point of the geodesic from `a` to `b` at parameter `t`.
#[no_mangle]
pub unsafe extern "C" fn spdc_geodesic(
    a: *const SpdcPoint,
    b: *const SpdcPoint,
    t: f64,
    out: *mut *mut SpdcPoint,
) -> SpdcStatus {
    run(|| {
        let c = lift(geometry::geodesic_eval(
            &unsafe { arg(a, "a") }?.0,
            &unsafe { arg(b, "b") }?.0,
            t,
        ))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPoint(c)))) }
    })
}

/// Parallel transport of `w` along the geodesic from `p` to `q`.
#[no_mangle]
pub unsafe extern "C" fn spdc_transport(
    p: *const SpdcPoint,
    q: *const SpdcPoint,
    w: *const SpdcPair,
    out: *mut *mut SpdcPair,
) -> SpdcStatus {
    run(|| {
        let moved = lift(geometry::parallel_transport(
            &unsafe { arg(p, "p") }?.0,
            &unsafe { arg(q, "q") }?.0,
            &unsafe { arg(w, "w") }?.0,
        ))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPair(moved)))) }
    })
}

/// Sectional curvature of the plane spanned by `x` and `y` at `p`.
#[no_mangle]
pub unsafe extern "C" fn spdc_sectional(
    p: *const SpdcPoint,
    x: *const SpdcPair,
    y: *const SpdcPair,
    out: *mut f64,
) -> SpdcStatus {
    run(|| {
        let k = lift(geometry::sectional(
            &unsafe { arg(p, "p") }?.0,
            &unsafe { arg(x, "x") }?.0,
            &unsafe { arg(y, "y") }?.0,
        ))?;
        unsafe { put(out, "out", k) }
    })
}

/// Geodesic symmetry of `q` through `p`.
#[no_mangle]
pub unsafe extern "C" fn spdc_symmetry(
    p: *const SpdcPoint,
    q: *const SpdcPoint,
    out: *mut *mut SpdcPoint,
) -> SpdcStatus {
    run(|| {
        let s = lift(geometry::symmetry(
            &unsafe { arg(p, "p") }?.0,
            &unsafe { arg(q, "q") }?.0,
        ))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPoint(s)))) }
    })
}

fn system_out(out: *mut *mut SpdcSystem, sys: TripleSystem) -> Result<(), SpdcStatus> {
    unsafe { put(out, "out", Box::into_raw(Box::new(SpdcSystem(sys)))) }
}

/// Diagonal pairs at dimension `n`.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_diagonal(n: usize, out: *mut *mut SpdcSystem) -> SpdcStatus {
    run(|| system_out(out, lift(diagonal_system(n))?))
}

/// Scalar multiples of the unit at dimension `n`.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_scalar(n: usize, out: *mut *mut SpdcSystem) -> SpdcStatus {
    run(|| system_out(out, lift(scalar_system(n))?))
}

/// Pairs supported on the top-left `k` by `k` corner at dimension `n`.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_block(
    n: usize,
    k: usize,
    out: *mut *mut SpdcSystem,
) -> SpdcStatus {
    run(|| system_out(out, lift(block_system(n, k))?))
}

/// Hermitian pairs commuting with the given pair.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_commutant(
    y: *const SpdcPair,
    out: *mut *mut SpdcSystem,
) -> SpdcStatus {
    run(|| {
        let generator = unsafe { arg(y, "y") }?;
        system_out(out, lift(commutant_system(&generator.0))?)
    })
}

/// The unital algebra generated by one Hermitian pair.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_polynomial(
    a: *const SpdcPair,
    out: *mut *mut SpdcSystem,
) -> SpdcStatus {
    run(|| {
        let generator = unsafe { arg(a, "a") }?;
        system_out(out, lift(polynomial_system(&generator.0))?)
    })
}

/// Span of the given pairs, which must be independent and closed under
/// double brackets.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_custom(
    basis: *const *const SpdcPair,
    len: usize,
    out: *mut *mut SpdcSystem,
) -> SpdcStatus {
    run(|| {
        let vectors = unsafe { pairs_in(basis, len) }?;
        system_out(out, lift(TripleSystem::new(vectors))?)
    })
}

/// Releases a system handle. A null handle is ignored.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_free(sys: *mut SpdcSystem) {
    if !sys.is_null() {
        drop(unsafe { Box::from_raw(sys) });
    }
}

/// Linear dimension of a system.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_dim(sys: *const SpdcSystem, out: *mut usize) -> SpdcStatus {
    run(|| {
        let m = unsafe { arg(sys, "sys") }?;
        unsafe { put(out, "out", m.0.dim()) }
    })
}

/// Matrix dimension of the ambient pairs of a system.
#[no_mangle]
pub unsafe extern "C" fn spdc_system_ambient_dim(
    sys: *const SpdcSystem,
    out: *mut usize,
) -> SpdcStatus {
    run(|| {
        let m = unsafe { arg(sys, "sys") }?;
        unsafe { put(out, "out", m.0.ambient_dim()) }
    })
}

/// Decides whether the span of the given pairs is closed under double
/// brackets at tolerance `tol`; also reports the worst residual.
#[no_mangle]
pub unsafe extern "C" fn spdc_triple_check(
    basis: *const *const SpdcPair,
    len: usize,
    tol: f64,
    out_closed: *mut bool,
    out_residual: *mut f64,
) -> SpdcStatus {
    run(|| {
        let vectors = unsafe { pairs_in(basis, len) }?;
        let (closed, residual) = lift(is_triple_system(&vectors, tol))?;
        unsafe { put(out_closed, "out_closed", closed) }?;
        unsafe { put(out_residual, "out_residual", residual) }
    })
}

/// Nearest point of the exponential image of `sys` to `p`. The foot is
/// required; the normal vector, iteration count and final residual are
/// copied only through non-null pointers.
#[no_mangle]
pub unsafe extern "C" fn spdc_project(
    sys: *const SpdcSystem,
    p: *const SpdcPoint,
    tol: f64,
    max_iter: usize,
    out_foot: *mut *mut SpdcPoint,
    out_normal: *mut *mut SpdcPair,
    out_iterations: *mut usize,
    out_residual: *mut f64,
) -> SpdcStatus {
    run(|| {
        let m = unsafe { arg(sys, "sys") }?;
        let target = unsafe { arg(p, "p") }?;
        let opts = ProjectOpts {
            tol,
            max_iter,
            init: None,
        };
        let res = lift(project(&m.0, &target.0, &opts))?;
        unsafe { put(out_foot, "out_foot", Box::into_raw(Box::new(SpdcPoint(res.foot)))) }?;
        if !out_normal.is_null() {
            unsafe { out_normal.write(Box::into_raw(Box::new(SpdcPair(res.normal)))) };
        }
        if !out_iterations.is_null() {
            unsafe { out_iterations.write(res.iterations) };
        }
        if !out_residual.is_null() {
            unsafe { out_residual.write(res.residual) };
        }
        Ok(())
    })
}

/// Two sided splitting `e^a = e^x e^v e^x` relative to a system: `x`
/// lies in the span and `v` is orthogonal to it.
#[no_mangle]
pub unsafe extern "C" fn spdc_decompose_mvm(
    sys: *const SpdcSystem,
    a: *const SpdcPair,
    out_x: *mut *mut SpdcPair,
    out_v: *mut *mut SpdcPair,
) -> SpdcStatus {
    run(|| {
        let m = unsafe { arg(sys, "sys") }?;
        let input = unsafe { arg(a, "a") }?;
        let (x, v) = lift(decompose_mvm(&m.0, &input.0))?;
        unsafe { put(out_x, "out_x", Box::into_raw(Box::new(SpdcPair(x)))) }?;
        unsafe { put(out_v, "out_v", Box::into_raw(Box::new(SpdcPair(v)))) }
    })
}

/// Diagonal splitting `lambda + a = D e^w D` of a shifted Hermitian
/// matrix. Takes and returns raw matrices of `2 n^2` interleaved
/// doubles; `out_d` receives the positive diagonal factor and `out_w`
/// the zero-diagonal exponent.
#[no_mangle]
pub unsafe extern "C" fn spdc_diag_decompose(
    n: usize,
    entries: *const f64,
    lambda: f64,
    out_d: *mut f64,
    out_w: *mut f64,
) -> SpdcStatus {
    run(|| {
        let a = unsafe { matrix_in(entries, n, "entries") }?;
        let (d, w) = lift(diag_decompose(&a, lambda))?;
        unsafe { matrix_out(out_d, &d, "out_d") }?;
        unsafe { matrix_out(out_w, &w, "out_w") }
    })
}

/// Scale coordinate of a point under the scalar foliation.
#[no_mangle]
pub unsafe extern "C" fn spdc_leaf_of(point: *const SpdcPoint, out: *mut f64) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(point, "point") }?;
        unsafe { put(out, "out", foliation::leaf_of(&p.0)) }
    })
}

/// Nearest point of the leaf with scale `lambda`.
#[no_mangle]
pub unsafe extern "C" fn spdc_leaf_project(
    point: *const SpdcPoint,
    lambda: f64,
    out: *mut *mut SpdcPoint,
) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(point, "point") }?;
        let moved = lift(foliation::leaf_project(&p.0, lambda))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPoint(moved)))) }
    })
}

/// Splits a point into its unit-leaf part and its scale.
#[no_mangle]
pub unsafe extern "C" fn spdc_split(
    point: *const SpdcPoint,
    out_leaf: *mut *mut SpdcPoint,
    out_lambda: *mut f64,
) -> SpdcStatus {
    run(|| {
        let p = unsafe { arg(point, "point") }?;
        let (s1, lambda) = foliation::split(&p.0);
        unsafe { put(out_leaf, "out_leaf", Box::into_raw(Box::new(SpdcPoint(s1)))) }?;
        unsafe { put(out_lambda, "out_lambda", lambda) }
    })
}

/// Rebuilds a point from its unit-leaf part and scale.
#[no_mangle]
pub unsafe extern "C" fn spdc_unsplit(
    leaf: *const SpdcPoint,
    lambda: f64,
    out: *mut *mut SpdcPoint,
) -> SpdcStatus {
    run(|| {
        let s1 = unsafe { arg(leaf, "leaf") }?;
        let p = lift(foliation::unsplit(&s1.0, lambda))?;
        unsafe { put(out, "out", Box::into_raw(Box::new(SpdcPoint(p)))) }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    /// Interleaved buffer for the matrix `[[a, c], [conj(c), b]]` with
    /// real diagonal and complex corner `c = cr + i ci`.
    fn herm2(a: f64, b: f64, cr: f64, ci: f64) -> [f64; 8] {
        [a, 0.0, cr, ci, cr, -ci, b, 0.0]
    }

    fn new_point(scalar: f64, entries: &[f64; 8]) -> *mut SpdcPoint {
        let mut out = ptr::null_mut();
        let status = unsafe { spdc_point_new(2, scalar, entries.as_ptr(), &mut out) };
        assert_eq!(status, SpdcStatus::Ok);
        out
    }

    fn last_error() -> String {
        let needed = unsafe { spdc_last_error_message(ptr::null_mut(), 0) };
        let mut buf = vec![0i8; needed + 1];
        unsafe { spdc_last_error_message(buf.as_mut_ptr() as *mut c_char, buf.len()) };
        buf.iter()
            .take_while(|&&b| b != 0)
            .map(|&b| b as u8 as char)
            .collect()
    }

    #[test]
    fn distance_from_identity_to_e_is_one() {
        let id = new_point(1.0, &herm2(0.0, 0.0, 0.0, 0.0));
        let e = new_point(std::f64::consts::E, &herm2(0.0, 0.0, 0.0, 0.0));
        let mut d = f64::NAN;
        let status = unsafe { spdc_distance(id, e, &mut d) };
        assert_eq!(status, SpdcStatus::Ok);
        assert!((d - 1.0).abs() < 1e-12);
        unsafe {
            spdc_point_free(id);
            spdc_point_free(e);
        }
    }

    #[test]
    fn null_arguments_are_reported() {
        let mut d = 0.0;
        let status = unsafe { spdc_distance(ptr::null(), ptr::null(), &mut d) };
        assert_eq!(status, SpdcStatus::NullArgument);
        assert!(last_error().contains("null"));
    }

    #[test]
    fn nonpositive_points_are_domain_errors() {
        let mut out = ptr::null_mut();
        let entries = herm2(-2.0, 0.0, 0.0, 0.0);
        let status = unsafe { spdc_point_new(2, 1.0, entries.as_ptr(), &mut out) };
        assert_eq!(status, SpdcStatus::Domain);
        assert!(!last_error().is_empty());
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut out = ptr::null_mut();
        let entries = [0.0, 0.0, 1.0, 0.0, 0.5, 0.0, 0.0, 0.0];
        let status = unsafe { spdc_pair_new(2, 0.0, entries.as_ptr(), &mut out) };
        assert_ne!(status, SpdcStatus::Ok);
    }

    #[test]
    fn exp_and_log_roundtrip_through_handles() {
        let mut pair = ptr::null_mut();
        let entries = herm2(0.3, -0.4, 0.2, 0.1);
        assert_eq!(
            unsafe { spdc_pair_new(2, 0.5, entries.as_ptr(), &mut pair) },
            SpdcStatus::Ok
        );
        let mut point = ptr::null_mut();
        assert_eq!(unsafe { spdc_point_exp(pair, &mut point) }, SpdcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(unsafe { spdc_point_log(point, &mut back) }, SpdcStatus::Ok);
        let mut scalar = f64::NAN;
        let mut got = [0.0; 8];
        assert_eq!(
            unsafe { spdc_pair_value(back, &mut scalar, got.as_mut_ptr()) },
            SpdcStatus::Ok
        );
        assert!((scalar - 0.5).abs() < 1e-12);
        for (a, b) in got.iter().zip(entries.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        unsafe {
            spdc_pair_free(pair);
            spdc_pair_free(back);
            spdc_point_free(point);
        }
    }

    #[test]
    fn projection_agrees_with_the_library() {
        let mut sys = ptr::null_mut();
        assert_eq!(unsafe { spdc_system_diagonal(2, &mut sys) }, SpdcStatus::Ok);
        let p = new_point(1.0, &herm2(0.5, -0.2, 0.4, 0.1));
        let mut foot = ptr::null_mut();
        let mut iterations = 0usize;
        let mut residual = f64::NAN;
        let status = unsafe {
            spdc_project(
                sys,
                p,
                1e-10,
                500,
                &mut foot,
                ptr::null_mut(),
                &mut iterations,
                &mut residual,
            )
        };
        assert_eq!(status, SpdcStatus::Ok);
        assert!(residual <= 1e-8);
        assert!(iterations <= 200);

        let m = diagonal_system(2).unwrap();
        let direct = project(
            &m,
            unsafe { &(*p).0 },
            &ProjectOpts::default(),
        )
        .unwrap();
        let mut gap = f64::NAN;
        let direct_foot = Box::into_raw(Box::new(SpdcPoint(direct.foot)));
        assert_eq!(unsafe { spdc_distance(foot, direct_foot, &mut gap) }, SpdcStatus::Ok);
        assert!(gap <= 1e-9);
        unsafe {
            spdc_point_free(foot);
            spdc_point_free(direct_foot);
            spdc_point_free(p);
            spdc_system_free(sys);
        }
    }

    #[test]
    fn diagonal_splitting_matches_the_closed_form() {
        let entries = herm2(0.0, 0.0, 0.6, 0.0);
        let mut d = [0.0; 8];
        let mut w = [0.0; 8];
        let status = unsafe {
            spdc_diag_decompose(2, entries.as_ptr(), 1.0, d.as_mut_ptr(), w.as_mut_ptr())
        };
        assert_eq!(status, SpdcStatus::Ok);
        assert!((d[0] * d[0] - 0.8).abs() < 1e-6);
        assert!((d[6] * d[6] - 0.8).abs() < 1e-6);
        assert!((w[2] - 0.6_f64.atanh()).abs() < 1e-6);
        assert!(w[0].abs() < 1e-8 && w[6].abs() < 1e-8);
    }

    #[test]
    fn custom_systems_and_closure_checks_work() {
        let unit = herm2(1.0, 1.0, 0.0, 0.0);
        let e11 = herm2(1.0, 0.0, 0.0, 0.0);
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(unsafe { spdc_pair_new(2, 1.0, unit.as_ptr(), &mut a) }, SpdcStatus::Ok);
        assert_eq!(unsafe { spdc_pair_new(2, 0.0, e11.as_ptr(), &mut b) }, SpdcStatus::Ok);
        let basis = [a as *const SpdcPair, b as *const SpdcPair];

        let mut closed = false;
        let mut residual = f64::NAN;
        let status = unsafe {
            spdc_triple_check(basis.as_ptr(), 2, 1e-9, &mut closed, &mut residual)
        };
        assert_eq!(status, SpdcStatus::Ok);
        assert!(closed);
        assert!(residual <= 1e-9);

        let mut sys = ptr::null_mut();
        assert_eq!(unsafe { spdc_system_custom(basis.as_ptr(), 2, &mut sys) }, SpdcStatus::Ok);
        let mut dim = 0usize;
        let mut ambient = 0usize;
        assert_eq!(unsafe { spdc_system_dim(sys, &mut dim) }, SpdcStatus::Ok);
        assert_eq!(unsafe { spdc_system_ambient_dim(sys, &mut ambient) }, SpdcStatus::Ok);
        assert_eq!(dim, 2);
        assert_eq!(ambient, 2);
        unsafe {
            spdc_pair_free(a);
            spdc_pair_free(b);
            spdc_system_free(sys);
        }
    }

    #[test]
    fn foliation_split_roundtrips() {
        let p = new_point(2.0, &herm2(0.5, -0.3, 0.2, -0.1));
        let mut leaf = ptr::null_mut();
        let mut lambda = f64::NAN;
        assert_eq!(unsafe { spdc_split(p, &mut leaf, &mut lambda) }, SpdcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(unsafe { spdc_unsplit(leaf, lambda, &mut back) }, SpdcStatus::Ok);
        let mut gap = f64::NAN;
        assert_eq!(unsafe { spdc_distance(p, back, &mut gap) }, SpdcStatus::Ok);
        assert!(gap <= 1e-10);

        let mut scale = f64::NAN;
        assert_eq!(unsafe { spdc_leaf_of(p, &mut scale) }, SpdcStatus::Ok);
        assert!((scale - lambda).abs() <= 1e-12);
        unsafe {
            spdc_point_free(p);
            spdc_point_free(leaf);
            spdc_point_free(back);
        }
    }

    #[test]
    fn sectional_curvature_is_nonpositive_through_the_interface() {
        let p = new_point(1.0, &herm2(0.2, -0.1, 0.3, 0.2));
        let mut x = ptr::null_mut();
        let mut y = ptr::null_mut();
        let ex = herm2(0.7, -0.2, 0.1, 0.4);
        let ey = herm2(-0.3, 0.5, 0.6, -0.2);
        assert_eq!(unsafe { spdc_pair_new(2, 0.4, ex.as_ptr(), &mut x) }, SpdcStatus::Ok);
        assert_eq!(unsafe { spdc_pair_new(2, -0.1, ey.as_ptr(), &mut y) }, SpdcStatus::Ok);
        let mut k = f64::NAN;
        assert_eq!(unsafe { spdc_sectional(p, x, y, &mut k) }, SpdcStatus::Ok);
        assert!(k <= 1e-12);
        unsafe {
            spdc_pair_free(x);
            spdc_pair_free(y);
            spdc_point_free(p);
        }
    }

    #[test]
    fn version_is_a_nul_terminated_string() {
        let ptr = spdc_version();
        assert!(!ptr.is_null());
        let s = unsafe { std::ffi::CStr::from_ptr(ptr) }.to_str().unwrap();
        assert_eq!(s, env!("CARGO_PKG_VERSION"));
    }
}
