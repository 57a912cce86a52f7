//! Spectral calculus on pairs: exponentials, logarithms, powers, the
//! derivative of the exponential, and polar factorization.

use super::{cplx, eig_hermitian, CMatrix, ConePoint, UnitizedHermitian, UnitizedOperator};
use crate::error::{Error, Result};
use nalgebra::DVector;


/// Applies a scalar function to a cone point through its cached spectral
/// decomposition, following the pair rule
/// `f(s + a) = f(s) + [f(s I + a) - f(s) I]`.
pub fn spd_apply(p: &ConePoint, f: impl Fn(f64) -> f64) -> UnitizedHermitian {
    p.apply_spectral(f)
}

/// Logarithm of a cone point as a Hermitian pair.
pub fn mat_log(p: &ConePoint) -> UnitizedHermitian {
    p.log()
}

/// Positive square root.
pub fn mat_sqrt(p: &ConePoint) -> ConePoint {
    p.sqrt()
}

/// Real power `p^t`.
pub fn mat_pow(p: &ConePoint, t: f64) -> ConePoint {
    p.pow(t)
}

/// Exponential of a Hermitian pair; always lands in the cone.
///
/// The eigensolve runs on the matrix part alone, since the materialized
/// matrix shares its eigenvectors and only shifts the spectrum by the
/// scalar coordinate.
pub fn mat_exp(x: &UnitizedHermitian) -> ConePoint {
    let eig = eig_hermitian(x.hs()).expect("hermitian pair must diagonalize");
    let vals: Vec<f64> = eig.values.iter().map(|d| (x.scalar() + d).exp()).collect();
    ConePoint::from_eig(x.scalar().exp(), vals, eig.vectors)
        .expect("exponential of a hermitian pair is positive")
}

/// Derivative of the exponential map, `d exp_x(y)`.
///
/// Computed by the block-triangular embedding: the exponential of the
/// `2n x 2n` matrix `[[X, Y], [0, X]]` carries `d exp_X(Y)` in its
/// upper-right block. The result is re-split into a pair by the scalar
/// rule with base coordinate `x.scalar`, so its scalar part is
/// `exp(x.scalar) * y.scalar`.
pub fn frechet_exp(x: &UnitizedHermitian, y: &UnitizedHermitian) -> Result<UnitizedHermitian> {
    let n = x.dim();
    if y.dim() != n {
        return Err(Error::Dimension {
            left: n,
            right: y.dim(),
        });
    }
    let xm = x.materialize();
    let ym = y.materialize();
    let mut block = CMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(&xm);
    block.view_mut((0, n), (n, n)).copy_from(&ym);
    block.view_mut((n, n), (n, n)).copy_from(&xm);
    let e = block.exp();
    let full = e.view((0, n), (n, n)).into_owned();
    let scalar = x.scalar().exp() * y.scalar();
    let hs = &full - CMatrix::identity(n, n) * cplx(scalar);
    // d exp of a Hermitian argument in a Hermitian direction is Hermitian;
    // symmetrize away the roundoff of the dense exponential.
    Ok(UnitizedHermitian::from_parts_unchecked(
        scalar,
        (&hs + hs.adjoint()) * cplx(0.5),
    ))
}

/// Polar factorization `g = |g| u` with `|g| = (g g*)^{1/2}` in the cone
/// and `u` unitary. Requires `g` invertible with nonzero scalar
/// coordinate, since the unitized inverse of `|g|` enters the unitary
/// factor.
pub fn polar(g: &UnitizedOperator) -> Result<(ConePoint, UnitizedOperator)> {
    let gg = (g * &g.adjoint()).to_hermitian(1e-10)?;
    let absval = ConePoint::certify(gg)?.sqrt();
    let u = &absval.inv().op().to_operator() * g;
    Ok((absval, u))
}

/// Exponential of a raw Hermitian matrix through the Jacobi eigensolver.
pub fn exp_hermitian_matrix(w: &CMatrix) -> Result<CMatrix> {
    hermitian_matrix_function(w, f64::exp)
}

/// Logarithm of a raw positive definite Hermitian matrix.
pub fn log_pd_matrix(m: &CMatrix) -> Result<CMatrix> {
    let eig = eig_hermitian(m)?;
    if eig.values.first().copied().unwrap_or(1.0) <= 0.0 {
        return Err(Error::Domain(
            "logarithm of a matrix with nonpositive spectrum".into(),
        ));
    }
    rebuild(&eig.vectors, &eig.values, f64::ln)
}

fn hermitian_matrix_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let eig = eig_hermitian(m)?;
    rebuild(&eig.vectors, &eig.values, f)
}

fn rebuild(vecs: &CMatrix, vals: &[f64], f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let n = vals.len();
    let diag = CMatrix::from_diagonal(&DVector::from_iterator(
        n,
        vals.iter().map(|&v| cplx(f(v))),
    ));
    let full = vecs * diag * vecs.adjoint();
    Ok((&full + full.adjoint()) * cplx(0.5))
}
