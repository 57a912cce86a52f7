//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Plane rotations are applied in row-cyclic order until the off-diagonal
//! Frobenius mass drops below `1e-14` times the norm of the input. Each
//! rotation zeroes one off-diagonal entry exactly and the off-diagonal
//! mass decreases monotonically, so a few sweeps suffice at the sizes
//! this crate targets.

use super::CMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Spectral decomposition `a = vectors * diag(values) * vectors^*`.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    /// Eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

/// Off-diagonal mass, relative to the input norm, at which sweeps stop.
const OFF_TOL: f64 = 1e-14;

/// Sweep budget; quadratic convergence makes this generous.
const MAX_SWEEPS: usize = 64;

fn off_mass(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalizes a complex Hermitian matrix. The input is symmetrized on
/// entry, so roundoff-level asymmetry is tolerated silently.
pub fn eig_hermitian(a: &CMatrix) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::Dimension {
            left: a.nrows(),
            right: a.ncols(),
        });
    }
    let n = a.nrows();
    let mut m = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut u = CMatrix::identity(n, n);
    let norm = m.norm();
    if n > 1 && norm > 0.0 {
        let stop = OFF_TOL * norm;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_mass(&m) < stop {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut u, p, q);
                }
            }
        }
        if !converged && off_mass(&m) >= stop {
            return Err(Error::Convergence {
                context: "jacobi eigensolver".into(),
                iterations: MAX_SWEEPS,
                residual: off_mass(&m) / norm,
                best: None,
            });
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values: Vec<f64> = idx.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vectors.set_column(col, &u.column(i));
    }
    Ok(HermitianEig { values, vectors })
}

/// One plane rotation zeroing the `(p, q)` entry: `m <- r^* m r` and
/// `u <- u r`, where `r` differs from the identity only in the `p, q`
/// plane.
fn rotate(m: &mut CMatrix, u: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let beta = apq.norm();
    if beta == 0.0 {
        return;
    }
    let phase = apq / beta;
    let alpha = m[(p, p)].re;
    let delta = m[(q, q)].re;
    let tau = (delta - alpha) / (2.0 * beta);
    // Smaller root of t^2 - 2 tau t - 1 = 0 keeps the rotation angle
    // below pi/4, which is what makes the sweep contraction monotone.
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let cs = Complex64::new(c, 0.0);
    let sp = phase * s;
    let spc = phase.conj() * s;
    let n = m.nrows();
    // Column update m <- m r.
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * cs + akq * spc;
        m[(k, q)] = akq * cs - akp * sp;
    }
    // Row update m <- r^* m.
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * cs + aqk * sp;
        m[(q, k)] = aqk * cs - apk * spc;
    }
    m[(p, q)] = Complex64::ZERO;
    m[(q, p)] = Complex64::ZERO;
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    // Accumulate the eigenvector basis.
    for k in 0..n {
        let ukp = u[(k, p)];
        let ukq = u[(k, q)];
        u[(k, p)] = ukp * cs + ukq * spc;
        u[(k, q)] = ukq * cs - ukp * sp;
    }
}
