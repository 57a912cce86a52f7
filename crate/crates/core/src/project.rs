//! Orthogonal projection onto convex submanifolds and the
//! factorizations built on top of it.
//!
//! For a triple system `m` the submanifold `M = exp(m)` admits a unique
//! nearest point `foot` to any `p`, joined to `p` by a geodesic that
//! meets `M` orthogonally. The minimizer is found by Riemannian
//! gradient descent on half the squared distance; everything else in
//! this module (the `e^x e^v e^x` splitting, the relative polar
//! factorization, diagonal and block decompositions, normal-bundle
//! coordinates) reduces to that projection plus pair arithmetic.

use crate::error::{Error, Result};
use crate::geometry::{distance, exp_point, log_point, norm_at};
use crate::opalg::{
    congruence, log_pd_matrix, mat_exp, mat_log, CMatrix, ConePoint,
    UnitizedHermitian, UnitizedOperator,
};
use crate::triple::{block_system, diagonal_system, project_tangent, TripleSystem};
use num_complex::Complex64;

/// Armijo sufficient-decrease constant.
const ARMIJO_C: f64 = 1e-4;

/// Step halvings tried before declaring the line search exhausted.
const MAX_BACKTRACK: usize = 45;

/// Gradient-norm scale below which an exhausted line search still
/// counts as converged; at that point squared-distance differences sit
/// under the floating-point resolution of the objective.
const STALL_ACCEPT: f64 = 1e-6;
const PLATEAU_WINDOW: usize = 40;

/// Square root of the largest sectional curvature magnitude, used to
/// bound the Hessian of half the squared distance from above.
const CURV_RATE: f64 = 0.353_553_390_593_273_8;

/// Multiple of machine epsilon under which squared-distance differences
/// no longer resolve an Armijo decrease of `c tau |grad|^2`.
const FLOOR_MULT: f64 = 100.0;

/// Options for the projection solver.
#[derive(Debug, Clone)]
pub struct ProjectOpts {
    /// Relative tolerance on the Riemannian gradient norm.
    pub tol: f64,
    /// Gradient steps allowed before giving up.
    pub max_iter: usize,
    /// Optional starting point; snapped onto the submanifold first.
    /// Defaults to the linearized projection `exp(P_m(log p))`, which
    /// is exact whenever everything commutes.
    pub init: Option<ConePoint>,
}

impl Default for ProjectOpts {
    fn default() -> Self {
        ProjectOpts {
            tol: 1e-10,
            max_iter: 500,
            init: None,
        }
    }
}

/// Outcome of a projection.
#[derive(Debug, Clone)]
pub struct ProjectionResult {
    /// Nearest point of the submanifold.
    pub foot: ConePoint,
    /// Normal vector at the foot with `Exp_foot(normal) = p`.
    pub normal: UnitizedHermitian,
    /// Gradient steps taken.
    pub iterations: usize,
    /// Final tangential gradient norm.
    pub residual: f64,
}

fn check_dim(m: &TripleSystem, d: usize) -> Result<()> {
    if m.ambient_dim() == d {
        Ok(())
    } else {
        Err(Error::Dimension {
            left: m.ambient_dim(),
            right: d,
        })
    }
}

/// Snaps a point onto `exp(m)` through the logarithm; exact for members.
fn anchor(m: &TripleSystem, q: &ConePoint) -> ConePoint {
    mat_exp(&m.project_span(&mat_log(q)))
}

/// Projects `p` onto `M = exp(m)`: minimizes `f(q) = dist(q, p)^2 / 2`
/// over `M` by gradient descent with Armijo backtracking. The gradient
/// at `q` is the negated tangential component of `Log_q(p)`, so the
/// iteration walks along submanifold geodesics towards the unique foot
/// of the perpendicular; convexity of `f` on `M` guarantees there is
/// nothing else to find.
pub fn project(m: &TripleSystem, p: &ConePoint, opts: &ProjectOpts) -> Result<ProjectionResult> {
    check_dim(m, p.dim())?;
    let mut q = match &opts.init {
        Some(start) => {
            check_dim(m, start.dim())?;
            anchor(m, start)
        }
        None => anchor(m, p),
    };
    let scale = 1.0 + distance(&q, p)?;
    let mut fq = {
        let d = distance(&q, p)?;
        0.5 * d * d
    };
    let mut iterations = 0usize;
    let mut best_gnorm = f64::INFINITY;
    let mut since_improvement = 0usize;
    loop {
        let lg = log_point(&q, p)?;
        let grad = project_tangent(m, &q, &lg)?;
        let gnorm = norm_at(&q, &grad)?;
        if gnorm <= opts.tol * scale {
            return Ok(ProjectionResult {
                normal: &lg - &grad,
                foot: q,
                iterations,
                residual: gnorm,
            });
        }
        // In the convergent regime the gradient norm halves every few
        // steps; a long stretch without halving means the objective has
        // reached its floating-point floor and further steps only stir
        // rounding noise.
        if gnorm <= 0.5 * best_gnorm {
            best_gnorm = gnorm;
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
        if since_improvement >= PLATEAU_WINDOW {
            if gnorm <= STALL_ACCEPT * scale {
                return Ok(ProjectionResult {
                    normal: &lg - &grad,
                    foot: q,
                    iterations,
                    residual: gnorm,
                });
            }
            return Err(Error::Convergence {
                context: "projection gradient stopped improving".into(),
                iterations,
                residual: gnorm,
                best: Some(Box::new(q)),
            });
        }
        if iterations >= opts.max_iter {
            return Err(Error::Convergence {
                context: "projection onto the submanifold".into(),
                iterations,
                residual: gnorm,
                best: Some(Box::new(q)),
            });
        }
        if gnorm * gnorm <= FLOOR_MULT * f64::EPSILON * (1.0 + fq) {
            // Differences of the objective can no longer certify an
            // Armijo decrease, but the gradient itself is still
            // computed far more accurately. Descend on its norm with a
            // stride matched to the comparison bound on the Hessian,
            // `L <= kd coth(kd)` at distance `d`.
            let d = (2.0 * fq).sqrt();
            let x = CURV_RATE * d;
            let lest = if x > 1e-8 { x / x.tanh() } else { 1.0 };
            let mut tau = 1.0 / lest;
            let mut accepted = None;
            for _ in 0..6 {
                let cand = anchor(m, &exp_point(&q, &grad.scale(tau))?);
                let lg_c = log_point(&cand, p)?;
                let grad_c = project_tangent(m, &cand, &lg_c)?;
                if norm_at(&cand, &grad_c)? < gnorm {
                    accepted = Some(cand);
                    break;
                }
                tau *= 0.25;
            }
            iterations += 1;
            match accepted {
                Some(cand) => {
                    let dd = distance(&cand, p)?;
                    fq = 0.5 * dd * dd;
                    q = cand;
                    continue;
                }
                None => {
                    // The gradient norm has reached its own floor.
                    if gnorm <= STALL_ACCEPT * scale {
                        return Ok(ProjectionResult {
                            normal: &lg - &grad,
                            foot: q,
                            iterations,
                            residual: gnorm,
                        });
                    }
                    return Err(Error::Convergence {
                        context: "projection line search stalled".into(),
                        iterations,
                        residual: gnorm,
                        best: Some(Box::new(q)),
                    });
                }
            }
        }
        let accepted = {
            let evaluate = |tau: f64| -> Result<(ConePoint, f64)> {
                let cand = anchor(m, &exp_point(&q, &grad.scale(tau))?);
                let d = distance(&cand, p)?;
                Ok((cand, 0.5 * d * d))
            };
            // Steepest descent with a unit stride oscillates across
            // narrow valleys while still shaving enough off the
            // objective to pass a sufficient-decrease test, so the
            // stride is always matched to the quadratic through f(0),
            // f'(0) and f(1): its minimizer is evaluated as well and
            // the lower of the two candidates wins.
            let (cand_unit, f_unit) = evaluate(1.0)?;
            let ray_curvature = 2.0 * (f_unit - fq + gnorm * gnorm);
            let star = if ray_curvature > f64::EPSILON * fq.max(1.0) {
                (gnorm * gnorm / ray_curvature).clamp(1e-3, 4.0)
            } else {
                4.0
            };
            let (mut tau, mut cand, mut fc) = (1.0, cand_unit, f_unit);
            if (star - 1.0).abs() > 0.1 {
                let (cand_star, f_star) = evaluate(star)?;
                if f_star < fc {
                    (tau, cand, fc) = (star, cand_star, f_star);
                }
            }
            let mut hit = None;
            for _ in 0..MAX_BACKTRACK {
                if fc <= fq - ARMIJO_C * tau * gnorm * gnorm {
                    hit = Some((cand, fc));
                    break;
                }
                tau *= 0.5;
                (cand, fc) = evaluate(tau)?;
            }
            hit
        };
        iterations += 1;
        if let Some((cand, fc)) = accepted {
            q = cand;
            fq = fc;
        } else {
            // The objective can no longer certify decrease in doubles.
            if gnorm <= STALL_ACCEPT * scale {
                return Ok(ProjectionResult {
                    normal: &lg - &grad,
                    foot: q,
                    iterations,
                    residual: gnorm,
                });
            }
            return Err(Error::Convergence {
                context: "projection line search stalled".into(),
                iterations,
                residual: gnorm,
                best: Some(Box::new(q)),
            });
        }
    }
}

/// Product `s p s` for Hermitian `s`, certified back onto the cone.
fn sandwich(s: &ConePoint, p: &ConePoint) -> Result<ConePoint> {
    ConePoint::certify(congruence(&s.op().to_operator(), p.op()))
}

/// Splits `e^a = e^x e^v e^x` with `x` in the span of `m` and `v`
/// orthogonal to it: `e^{2x}` is the projection of `e^a` onto `exp(m)`
/// and `v` is read off by conjugation.
pub fn decompose_mvm(
    m: &TripleSystem,
    a: &UnitizedHermitian,
) -> Result<(UnitizedHermitian, UnitizedHermitian)> {
    check_dim(m, a.dim())?;
    let p = mat_exp(a);
    let res = project(m, &p, &ProjectOpts::default())?;
    let x = res.foot.log().scale(0.5);
    let em = mat_exp(&x.scale(-1.0));
    let v = sandwich(&em, &p)?.log();
    Ok((x, v))
}

/// Relative polar factorization `g = e^x e^v u` with `x` in the span of
/// `m`, `v` orthogonal to it, and `u` unitary. Obtained from the `mvm`
/// splitting of `g g*` (which equals `e^x e^{2v} e^x`).
pub fn polar_relative(
    m: &TripleSystem,
    g: &UnitizedOperator,
) -> Result<(ConePoint, ConePoint, UnitizedOperator)> {
    check_dim(m, g.dim())?;
    g.inv()?;
    let gg = (g * &g.adjoint()).to_hermitian(1e-8)?;
    let ggp = ConePoint::certify(gg).map_err(|_| {
        Error::Singular("operator too close to singular for a polar factorization".into())
    })?;
    let (x, twice_v) = decompose_mvm(m, &ggp.log())?;
    let v = twice_v.scale(0.5);
    let ex = mat_exp(&x);
    let ev = mat_exp(&v);
    let u = &(&mat_exp(&v.scale(-1.0)).op().to_operator() * &ex.inv().op().to_operator()) * g;
    Ok((ex, ev, u))
}

fn hermitian_matrix_checked(a: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension {
            left: a.nrows(),
            right: a.ncols(),
        });
    }
    let skew = (a - a.adjoint()).norm();
    if skew > 1e-10 * (1.0 + a.norm()) {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian, skew norm {skew:.3e}"
        )));
    }
    Ok((a + a.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Factors `lambda I + a = D e^w D` with `D` positive diagonal and `w`
/// Hermitian with zero diagonal, by projecting onto the diagonal
/// submanifold. The scalar coordinate of the foot stays `lambda`
/// because normal vectors there have no scalar component.
pub fn diag_decompose(a: &CMatrix, lambda: f64) -> Result<(CMatrix, CMatrix)> {
    let sym = hermitian_matrix_checked(a)?;
    let n = sym.nrows();
    let eig = crate::opalg::eig_hermitian(&sym)?;
    let radius = eig.values.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    if lambda <= radius {
        return Err(Error::Domain(format!(
            "shift {lambda} does not dominate the spectral radius {radius:.6}"
        )));
    }
    let p = ConePoint::from_parts(lambda, sym)?;
    let m = diagonal_system(n)?;
    let res = project(&m, &p, &ProjectOpts::default())?;
    let foot_mat = res.foot.materialize();
    let mut d = CMatrix::zeros(n, n);
    let mut dinv = CMatrix::zeros(n, n);
    for i in 0..n {
        let entry = foot_mat[(i, i)].re;
        d[(i, i)] = Complex64::new(entry.sqrt(), 0.0);
        dinv[(i, i)] = Complex64::new(1.0 / entry.sqrt(), 0.0);
    }
    let target = &dinv * p.materialize() * &dinv;
    let w = log_pd_matrix(&target)?;
    Ok((d, w))
}

/// Normal-bundle coordinates of `p` relative to `M = exp(m)`: the foot
/// of the perpendicular together with the normal vector pointing back
/// at `p`. Inverse of [`e_map`].
pub fn nm_coords(m: &TripleSystem, p: &ConePoint) -> Result<(ConePoint, UnitizedHermitian)> {
    let res = project(m, p, &ProjectOpts::default())?;
    Ok((res.foot, res.normal))
}

/// Evaluates the normal exponential `E(q, v) = Exp_q(v)`; demands that
/// `v` is metrically normal to the submanifold at `q`.
pub fn e_map(m: &TripleSystem, q: &ConePoint, v: &UnitizedHermitian) -> Result<ConePoint> {
    check_dim(m, q.dim())?;
    check_dim(m, v.dim())?;
    let tang = project_tangent(m, q, v)?;
    if norm_at(q, &tang)? > 1e-8 * norm_at(q, v)?.max(1.0) {
        return Err(Error::Domain(
            "vector has a tangential component and is not normal".into(),
        ));
    }
    exp_point(q, v)
}

/// Outcome of the corner splitting of `e^b`.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    /// Hermitian logarithm of the top-left factor, `k` by `k`.
    pub a: CMatrix,
    /// Hermitian bottom-right block of the normal part.
    pub x: CMatrix,
    /// Off-diagonal coupling block, `(n - k)` by `k`.
    pub y: CMatrix,
}

/// Splits `e^b` as the product of a block-diagonal factor
/// `diag(e^A, I)` and the exponential of `diag(e^{-A}, I)` times the
/// Hermitian corner matrix `[0, Y*; Y, X]`, by projecting onto the
/// top-left block submanifold.
pub fn block_decompose(b: &CMatrix, k: usize) -> Result<BlockDecomposition> {
    let sym = hermitian_matrix_checked(b)?;
    let n = sym.nrows();
    if k == 0 || k >= n {
        return Err(Error::Index(format!(
            "corner size must satisfy 1 <= k < {n}, got {k}"
        )));
    }
    let p = mat_exp(&UnitizedHermitian::from_hs(sym)?);
    let t = block_system(n, k)?;
    let res = project(&t, &p, &ProjectOpts::default())?;
    let foot_mat = res.foot.materialize();
    let top = foot_mat.view((0, 0), (k, k)).into_owned();
    let a = log_pd_matrix(&top)?;
    let vmat = res.normal.materialize();
    let xr = vmat.view((k, k), (n - k, n - k)).into_owned();
    let x = (&xr + xr.adjoint()) * Complex64::new(0.5, 0.0);
    let y = vmat.view((k, 0), (n - k, k)).into_owned();
    Ok(BlockDecomposition { a, x, y })
}

/// Outcome of the scaled block polar factorization `g = lambda r e^v u`.
#[derive(Debug, Clone)]
pub struct BlockPolar {
    /// Positive scalar factor.
    pub lambda: f64,
    /// Positive `k` by `k` top-left factor; the full operator is
    /// `diag(r, I)`.
    pub r: CMatrix,
    /// Hermitian pair with zero scalar part and zero top-left block.
    pub v: UnitizedHermitian,
    /// Unitary remainder.
    pub u: UnitizedOperator,
}

/// Factors an invertible `g` as `lambda diag(R, I) e^v u` with `u`
/// unitary, through the `mvm` splitting of `g g*` relative to the
/// block-plus-scalar submanifold.
pub fn full_block_polar(g: &UnitizedOperator, k: usize) -> Result<BlockPolar> {
    let n = g.dim();
    if k == 0 || k >= n {
        return Err(Error::Index(format!(
            "corner size must satisfy 1 <= k < {n}, got {k}"
        )));
    }
    g.inv()?;
    let gg = (g * &g.adjoint()).to_hermitian(1e-8)?;
    let ggp = ConePoint::certify(gg).map_err(|_| {
        Error::Singular("operator too close to singular for a polar factorization".into())
    })?;
    let mut basis = block_system(n, k)?.basis().to_vec();
    basis.push(UnitizedHermitian::unit(n));
    let m = TripleSystem::new(basis)?;
    let (xpart, twice_v) = decompose_mvm(&m, &ggp.log())?;
    let v = twice_v.scale(0.5);
    let lambda = xpart.scalar().exp();
    let ex = mat_exp(&xpart);
    let r = (ex.materialize() * Complex64::new(1.0 / lambda, 0.0))
        .view((0, 0), (k, k))
        .into_owned();
    let u = &(&mat_exp(&v.scale(-1.0)).op().to_operator() * &ex.inv().op().to_operator()) * g;
    Ok(BlockPolar { lambda, r, v, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metric_at;
    use crate::opalg::exp_hermitian_matrix;
    use crate::triple::{contains_point, scalar_system, tangent_basis_at};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cm(n: usize, entries: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_row_iterator(n, n, entries.iter().map(|&(re, im)| Complex64::new(re, im)))
    }

    fn sigma1() -> CMatrix {
        cm(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
        let raw = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(
                scale * rng.random_range(-1.0..1.0),
                scale * rng.random_range(-1.0..1.0),
            )
        });
        (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0)
    }

    fn random_point(rng: &mut ChaCha8Rng, n: usize) -> ConePoint {
        mat_exp(
            &UnitizedHermitian::new(rng.random_range(-0.4..0.4), random_hermitian(rng, n, 0.6))
                .unwrap(),
        )
    }

    #[test]
    fn members_project_to_themselves_immediately() {
        let m = diagonal_system(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let p = m.random_point(&mut rng, 1.0);
        let res = project(&m, &p, &ProjectOpts::default()).unwrap();
        assert!(res.iterations <= 1);
        assert!(distance(&res.foot, &p).unwrap() < 1e-9);
        assert!(res.normal.hs_norm() < 1e-9);
    }

    #[test]
    fn scalar_manifold_keeps_only_the_scalar_coordinate() {
        let m = scalar_system(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let p = ConePoint::from_parts(3.0, random_hermitian(&mut rng, 3, 0.4)).unwrap();
        let res = project(&m, &p, &ProjectOpts::default()).unwrap();
        assert!(res.iterations <= 1);
        assert_relative_eq!(res.foot.scalar(), 3.0, epsilon = 1e-12);
        assert!(res.foot.hs().norm() < 1e-10);
    }

    #[test]
    fn diagonal_projection_matches_the_tanh_closed_form() {
        // p materializes I + 0.6 sigma1; the foot is 0.8 I and the
        // pulled-back normal is atanh(0.6) sigma1 = ln(2) sigma1.
        let m = diagonal_system(2).unwrap();
        let p = ConePoint::from_parts(1.0, sigma1() * Complex64::new(0.6, 0.0)).unwrap();
        let res = project(&m, &p, &ProjectOpts::default()).unwrap();
        assert_relative_eq!(res.foot.scalar(), 1.0, epsilon = 1e-10);
        let expected_hs = CMatrix::identity(2, 2) * Complex64::new(-0.2, 0.0);
        assert!((res.foot.hs() - expected_hs).norm() < 1e-9);
        let pulled = res.foot.conj_by_inv_sqrt(&res.normal);
        let expected = sigma1() * Complex64::new(2.0_f64.ln(), 0.0);
        assert!(pulled.scalar().abs() < 1e-9);
        assert!((pulled.hs() - expected).norm() < 1e-8);
    }

    #[test]
    fn projection_results_satisfy_their_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let m = diagonal_system(3).unwrap();
        let p = random_point(&mut rng, 3);
        let res = project(&m, &p, &ProjectOpts::default()).unwrap();
        let back = exp_point(&res.foot, &res.normal).unwrap();
        assert!(distance(&back, &p).unwrap() < 1e-7);
        assert!(contains_point(&m, &res.foot, 1e-7).unwrap());
        for b in tangent_basis_at(&m, &res.foot).unwrap() {
            assert!(metric_at(&res.foot, &res.normal, &b).unwrap().abs() < 1e-7);
        }
    }

    #[test]
    fn projection_is_a_contraction_and_restart_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let m = block_system(3, 2).unwrap();
        let p = random_point(&mut rng, 3);
        let q = random_point(&mut rng, 3);
        let fp = project(&m, &p, &ProjectOpts::default()).unwrap().foot;
        let fq = project(&m, &q, &ProjectOpts::default()).unwrap().foot;
        assert!(
            distance(&fp, &fq).unwrap() <= distance(&p, &q).unwrap() + 1e-8,
            "projection expanded the distance"
        );
        let restart = project(
            &m,
            &p,
            &ProjectOpts {
                init: Some(m.random_point(&mut rng, 1.0)),
                ..ProjectOpts::default()
            },
        )
        .unwrap();
        assert!(distance(&restart.foot, &fp).unwrap() < 1e-6);
    }

    #[test]
    fn mvm_splits_members_and_normals_trivially() {
        let m = diagonal_system(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let a_in = m.random_tangent(&mut rng, 1.0);
        let (x, v) = decompose_mvm(&m, &a_in).unwrap();
        assert!((&x.scale(2.0) - &a_in).hs_norm() < 1e-8);
        assert!(v.hs_norm() < 1e-8);
        // Purely off-diagonal directions are already normal at the
        // identity.
        let a_perp = UnitizedHermitian::from_hs(sigma1()).unwrap();
        let (x2, v2) = decompose_mvm(&m, &a_perp).unwrap();
        assert!(x2.hs_norm() < 1e-8);
        assert!((&v2 - &a_perp).hs_norm() < 1e-7);
    }

    #[test]
    fn mvm_reconstructs_the_exponential() {
        let m = diagonal_system(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let a = UnitizedHermitian::new(0.2, random_hermitian(&mut rng, 3, 0.5)).unwrap();
        let (x, v) = decompose_mvm(&m, &a).unwrap();
        assert!(m.span_residual(&x) < 1e-8);
        for b in m.ortho_basis() {
            assert!(v.hs_inner(b).abs() < 1e-8);
        }
        let ex = mat_exp(&x);
        let rebuilt = sandwich(&ex, &mat_exp(&v)).unwrap();
        assert!(distance(&rebuilt, &mat_exp(&a)).unwrap() < 1e-7);
    }

    #[test]
    fn relative_polar_of_special_inputs() {
        let m = diagonal_system(2).unwrap();
        // Unitary input: both positive factors collapse to the identity.
        let theta = 0.7_f64;
        let u_in = UnitizedOperator::new(
            Complex64::new(theta.cos(), theta.sin()),
            CMatrix::zeros(2, 2),
        )
        .unwrap();
        let (ex, ev, u) = polar_relative(&m, &u_in).unwrap();
        assert!(distance(&ex, &ConePoint::identity(2)).unwrap() < 1e-8);
        assert!(distance(&ev, &ConePoint::identity(2)).unwrap() < 1e-8);
        assert!((&u - &u_in).hs_norm() < 1e-8);
        // A member exponential comes back unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let x0 = m.random_tangent(&mut rng, 0.8);
        let g = mat_exp(&x0).op().to_operator();
        let (ex2, ev2, u2) = polar_relative(&m, &g).unwrap();
        assert!(distance(&ex2, &mat_exp(&x0)).unwrap() < 1e-7);
        assert!(distance(&ev2, &ConePoint::identity(2)).unwrap() < 1e-7);
        assert!((&u2 - &UnitizedOperator::unit(2)).hs_norm() < 1e-7);
    }

    #[test]
    fn relative_polar_reconstructs_and_is_unitary() {
        let m = diagonal_system(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        let g = UnitizedOperator::new(
            Complex64::new(1.2, 0.3),
            CMatrix::from_fn(3, 3, |_, _| {
                Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
            }),
        )
        .unwrap();
        let (ex, ev, u) = polar_relative(&m, &g).unwrap();
        let rebuilt = &(&ex.op().to_operator() * &ev.op().to_operator()) * &u;
        assert!((&rebuilt - &g).hs_norm() < 1e-7);
        let defect = &(&u * &u.adjoint()) - &UnitizedOperator::unit(3);
        assert!(defect.hs_norm() < 1e-9);
        // The first factor is diagonal: the factorization g = d e^w u.
        let exm = ex.materialize();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(exm[(i, j)].norm() < 1e-7);
                }
            }
        }
        assert!(polar_relative(&m, &UnitizedOperator::zero(3)).is_err());
    }

    #[test]
    fn diag_decompose_closed_form_and_reconstruction() {
        // a = 0: D is the square root of the shift, w vanishes.
        let (d0, w0) = diag_decompose(&CMatrix::zeros(2, 2), 4.0).unwrap();
        assert!((d0 - CMatrix::identity(2, 2) * Complex64::new(2.0, 0.0)).norm() < 1e-9);
        assert!(w0.norm() < 1e-9);
        // The tanh case: D^2 = 0.8 I and w = ln(2) sigma1.
        let a = sigma1() * Complex64::new(0.6, 0.0);
        let (d, w) = diag_decompose(&a, 1.0).unwrap();
        for i in 0..2 {
            assert_relative_eq!(d[(i, i)].re, 0.8_f64.sqrt(), epsilon = 1e-7);
        }
        assert!((w - sigma1() * Complex64::new(2.0_f64.ln(), 0.0)).norm() < 1e-6);
        // Shift below the spectral radius is rejected.
        assert!(diag_decompose(&a, 0.5).is_err());
        // Random instance: reconstruction and zero diagonal.
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        let h = random_hermitian(&mut rng, 4, 0.5);
        let (dr, wr) = diag_decompose(&h, 3.0).unwrap();
        for i in 0..4 {
            assert!(wr[(i, i)].norm() < 1e-8, "diagonal of w not zero");
        }
        let rebuilt = &dr * exp_hermitian_matrix(&wr).unwrap() * &dr;
        let target = CMatrix::identity(4, 4) * Complex64::new(3.0, 0.0) + &h;
        assert!((rebuilt - target).norm() < 1e-7);
    }

    #[test]
    fn normal_bundle_coordinates_roundtrip() {
        let m = diagonal_system(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let p = random_point(&mut rng, 3);
        let (q, v) = nm_coords(&m, &p).unwrap();
        let back = e_map(&m, &q, &v).unwrap();
        assert!(distance(&back, &p).unwrap() < 1e-7);
        // The other direction: start from explicit (q, v).
        let q2 = m.random_point(&mut rng, 0.8);
        let raw = UnitizedHermitian::new(0.1, random_hermitian(&mut rng, 3, 0.4)).unwrap();
        let v2 = &raw - &project_tangent(&m, &q2, &raw).unwrap();
        let point = e_map(&m, &q2, &v2).unwrap();
        let (q3, v3) = nm_coords(&m, &point).unwrap();
        assert!(distance(&q3, &q2).unwrap() < 1e-6);
        assert!((&v3 - &v2).hs_norm() < 1e-6);
        // Tangential vectors are refused.
        let tang = q2.conj_by_sqrt(&m.random_tangent(&mut rng, 0.5));
        assert!(matches!(e_map(&m, &q2, &tang), Err(Error::Domain(_))));
    }

    #[test]
    fn block_decompose_reconstructs_the_displayed_product() {
        // Already block diagonal: the corner parts vanish.
        let b0 = cm(
            3,
            &[
                (0.4, 0.0), (0.1, 0.2), (0.0, 0.0),
                (0.1, -0.2), (-0.3, 0.0), (0.0, 0.0),
                (0.0, 0.0), (0.0, 0.0), (0.0, 0.0),
            ],
        );
        let dec0 = block_decompose(&b0, 2).unwrap();
        assert!((&dec0.a - b0.view((0, 0), (2, 2)).into_owned()).norm() < 1e-7);
        assert!(dec0.x.norm() < 1e-7 && dec0.y.norm() < 1e-7);
        // Random Hermitian: verify the factored form by materializing
        // diag(e^A, I) exp(diag(e^{-A}, I) [0, Y*; Y, X]).
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let b = random_hermitian(&mut rng, 3, 0.5);
        let k = 1;
        let dec = block_decompose(&b, k).unwrap();
        let n = 3;
        let mut left = CMatrix::identity(n, n);
        let ea = exp_hermitian_matrix(&dec.a).unwrap();
        let eai = exp_hermitian_matrix(&(&dec.a * Complex64::new(-1.0, 0.0))).unwrap();
        let mut leftinv = CMatrix::identity(n, n);
        left.view_mut((0, 0), (k, k)).copy_from(&ea);
        leftinv.view_mut((0, 0), (k, k)).copy_from(&eai);
        let mut corner = CMatrix::zeros(n, n);
        corner.view_mut((k, 0), (n - k, k)).copy_from(&dec.y);
        corner
            .view_mut((0, k), (k, n - k))
            .copy_from(&dec.y.adjoint());
        corner.view_mut((k, k), (n - k, n - k)).copy_from(&dec.x);
        let inner = (&leftinv * &corner).exp();
        let rebuilt = &left * inner;
        let target = exp_hermitian_matrix(&b).unwrap();
        assert!((rebuilt - target).norm() < 1e-7);
        assert!(block_decompose(&b, 0).is_err());
        assert!(block_decompose(&b, 3).is_err());
    }

    #[test]
    fn full_block_polar_factors_and_normalizes() {
        // Unitary input.
        let theta = 0.4_f64;
        let u_in = UnitizedOperator::new(
            Complex64::new(theta.cos(), theta.sin()),
            CMatrix::zeros(3, 3),
        )
        .unwrap();
        let bp = full_block_polar(&u_in, 1).unwrap();
        assert_relative_eq!(bp.lambda, 1.0, epsilon = 1e-8);
        assert!((&bp.r - CMatrix::identity(1, 1)).norm() < 1e-8);
        assert!(bp.v.hs_norm() < 1e-7);
        assert!((&bp.u - &u_in).hs_norm() < 2e-7);
        // Scaled block input comes back as given.
        let a0 = cm(1, &[(0.3, 0.0)]);
        let mut big = CMatrix::zeros(3, 3);
        big.view_mut((0, 0), (1, 1))
            .copy_from(&exp_hermitian_matrix(&a0).unwrap());
        big[(1, 1)] = Complex64::new(1.0, 0.0);
        big[(2, 2)] = Complex64::new(1.0, 0.0);
        // Represent 2 diag(e^{a0}, I, I) as a pair operator.
        let gb = UnitizedOperator::new(
            Complex64::new(2.0, 0.0),
            (big - CMatrix::identity(3, 3)) * Complex64::new(2.0, 0.0),
        )
        .unwrap();
        let bp2 = full_block_polar(&gb, 1).unwrap();
        assert_relative_eq!(bp2.lambda, 2.0, epsilon = 1e-7);
        assert!((&bp2.r - exp_hermitian_matrix(&a0).unwrap()).norm() < 1e-7);
        assert!(bp2.v.hs_norm() < 1e-7);
        // Random invertible input: reconstruct lambda r e^v u.
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let g = UnitizedOperator::new(
            Complex64::new(1.1, -0.2),
            CMatrix::from_fn(3, 3, |_, _| {
                Complex64::new(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4))
            }),
        )
        .unwrap();
        let k = 1;
        let bp3 = full_block_polar(&g, k).unwrap();
        assert!(bp3.v.scalar().abs() < 1e-9);
        assert!(bp3.v.hs().view((0, 0), (k, k)).norm() < 1e-7);
        let mut rfull = CMatrix::identity(3, 3);
        rfull.view_mut((0, 0), (k, k)).copy_from(&bp3.r);
        let ev = exp_hermitian_matrix(&bp3.v.materialize()).unwrap();
        let rebuilt = rfull * ev * bp3.u.materialize() * Complex64::new(bp3.lambda, 0.0);
        assert!((rebuilt - g.materialize()).norm() < 1e-7);
        let defect = &(&bp3.u * &bp3.u.adjoint()) - &UnitizedOperator::unit(3);
        assert!(defect.hs_norm() < 1e-9);
    }
}
