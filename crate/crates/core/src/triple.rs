//! Lie triple systems and the geodesically convex submanifolds they
//! generate.
//!
//! A real subspace `m` of Hermitian pairs that is closed under the
//! double commutator `[[a, b], c]` exponentiates to a submanifold
//! `M = exp(m)` that contains every geodesic between its points. This
//! module builds such subspaces, checks closure numerically, projects
//! onto tangent and normal spaces along `M`, and assembles the bracket
//! algebra `g = m + [m, m]` that acts on `M`.

use crate::error::{Error, Result};
use crate::opalg::{
    commutator, eig_hermitian, mat_exp, mat_log, CMatrix, ConePoint,
    UnitizedHermitian, UnitizedOperator,
};
use num_complex::Complex64;
use rand::Rng;

/// Default closure tolerance for double-bracket residuals.
pub const CLOSURE_TOL: f64 = 1e-9;

/// Smallest admissible eigenvalue of the normalized Gram matrix.
const GRAM_TOL: f64 = 1e-10;

/// Relative cutoff below which a Gram-Schmidt remainder counts as zero.
const SPAN_TOL: f64 = 1e-10;

fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Double commutator `[[a, b], c]` of Hermitian pairs, itself Hermitian
/// with exactly zero scalar coordinate.
fn double_bracket(
    a: &UnitizedHermitian,
    b: &UnitizedHermitian,
    c: &UnitizedHermitian,
) -> UnitizedHermitian {
    let inner = commutator(&a.to_operator(), &b.to_operator());
    commutator(&inner, &c.to_operator()).hermitian_part()
}

/// Gram-Schmidt over Hermitian pairs under the ambient trace form, with
/// one reorthogonalization pass. Near-dependent directions are dropped.
fn orthonormalize(vectors: &[UnitizedHermitian]) -> Vec<UnitizedHermitian> {
    let mut basis: Vec<UnitizedHermitian> = Vec::new();
    for v in vectors {
        let scale = v.hs_norm();
        if scale <= 0.0 {
            continue;
        }
        let mut r = v.scale(1.0 / scale);
        for _ in 0..2 {
            for e in &basis {
                let c = r.hs_inner(e);
                r = &r - &e.scale(c);
            }
        }
        let norm = r.hs_norm();
        if norm > SPAN_TOL {
            basis.push(r.scale(1.0 / norm));
        }
    }
    basis
}

/// Smallest eigenvalue of the Gram matrix of the normalized input
/// vectors; near zero exactly when the family is linearly dependent.
fn gram_min_eig(vectors: &[UnitizedHermitian]) -> Result<f64> {
    let d = vectors.len();
    let mut normed = Vec::with_capacity(d);
    for v in vectors {
        let norm = v.hs_norm();
        if norm <= 0.0 {
            return Ok(0.0);
        }
        normed.push(v.scale(1.0 / norm));
    }
    let gram = CMatrix::from_fn(d, d, |i, j| cplx(normed[i].hs_inner(&normed[j])));
    let eig = eig_hermitian(&gram)?;
    Ok(eig.values.first().copied().unwrap_or(1.0))
}

/// A Lie triple system of Hermitian pairs, stored with both the
/// generating basis and an orthonormalized copy used for projections.
#[derive(Debug, Clone)]
pub struct TripleSystem {
    n: usize,
    basis: Vec<UnitizedHermitian>,
    ortho_basis: Vec<UnitizedHermitian>,
}

impl TripleSystem {
    /// Builds a triple system from independent generators, verifying
    /// both independence and double-bracket closure.
    pub fn new(vectors: Vec<UnitizedHermitian>) -> Result<Self> {
        let system = Self::span(vectors)?;
        let residual = system.closure_residual();
        if residual > CLOSURE_TOL {
            return Err(Error::Domain(format!(
                "double brackets leave the span, residual {residual:.3e}"
            )));
        }
        Ok(system)
    }

    /// Builds the subspace without the closure check. Used internally
    /// by closure probes that must be able to hold non-closed spans.
    fn span(vectors: Vec<UnitizedHermitian>) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::Degenerate("empty generating set".into()))?;
        let n = first.dim();
        for v in &vectors {
            if v.dim() != n {
                return Err(Error::Dimension {
                    left: n,
                    right: v.dim(),
                });
            }
        }
        if gram_min_eig(&vectors)? <= GRAM_TOL {
            return Err(Error::Degenerate(
                "generating set is linearly dependent".into(),
            ));
        }
        let ortho_basis = orthonormalize(&vectors);
        debug_assert_eq!(ortho_basis.len(), vectors.len());
        Ok(TripleSystem {
            n,
            basis: vectors,
            ortho_basis,
        })
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.ortho_basis.len()
    }

    /// Matrix dimension of the ambient pairs.
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// The generators as given.
    pub fn basis(&self) -> &[UnitizedHermitian] {
        &self.basis
    }

    /// Orthonormal basis of the span under the ambient trace form.
    pub fn ortho_basis(&self) -> &[UnitizedHermitian] {
        &self.ortho_basis
    }

    /// Orthogonal projection onto the span under the ambient form.
    pub fn project_span(&self, w: &UnitizedHermitian) -> UnitizedHermitian {
        let mut out = UnitizedHermitian::zero(self.n);
        for e in &self.ortho_basis {
            out = &out + &e.scale(w.hs_inner(e));
        }
        out
    }

    /// Distance of `w` from the span, relative to `max(1, norm of w)`.
    pub fn span_residual(&self, w: &UnitizedHermitian) -> f64 {
        (w - &self.project_span(w)).hs_norm() / w.hs_norm().max(1.0)
    }

    /// Largest relative double-bracket residual over all basis triples.
    pub fn closure_residual(&self) -> f64 {
        let d = self.ortho_basis.len();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..d {
                    let w = double_bracket(
                        &self.ortho_basis[i],
                        &self.ortho_basis[j],
                        &self.ortho_basis[k],
                    );
                    worst = worst.max(self.span_residual(&w));
                }
            }
        }
        worst
    }

    /// Random tangent vector in the span with the given norm bound,
    /// from uniform coefficients over the orthonormal basis.
    pub fn random_tangent<R: Rng>(&self, rng: &mut R, norm_bound: f64) -> UnitizedHermitian {
        let mut out = UnitizedHermitian::zero(self.n);
        for e in &self.ortho_basis {
            out = &out + &e.scale(rng.random_range(-1.0..1.0));
        }
        let norm = out.hs_norm();
        if norm > norm_bound {
            out.scale(norm_bound / norm)
        } else {
            out
        }
    }

    /// Random point of `exp(m)`, the exponential of a random tangent.
    pub fn random_point<R: Rng>(&self, rng: &mut R, norm_bound: f64) -> ConePoint {
        mat_exp(&self.random_tangent(rng, norm_bound))
    }
}

/// Checks whether the span of the given vectors is closed under double
/// brackets. Returns the verdict at tolerance `tol` together with the
/// largest relative residual found.
pub fn is_triple_system(vectors: &[UnitizedHermitian], tol: f64) -> Result<(bool, f64)> {
    let system = TripleSystem::span(vectors.to_vec())?;
    let residual = system.closure_residual();
    Ok((residual <= tol, residual))
}

/// Basis of the tangent space `T_pM = p^{1/2} m p^{1/2}` of `M = exp(m)`
/// at a point `p` of `M`. Membership of `p` is the caller's contract.
pub fn tangent_basis_at(m: &TripleSystem, p: &ConePoint) -> Result<Vec<UnitizedHermitian>> {
    if p.dim() != m.ambient_dim() {
        return Err(Error::Dimension {
            left: m.ambient_dim(),
            right: p.dim(),
        });
    }
    Ok(m.ortho_basis
        .iter()
        .map(|b| p.conj_by_sqrt(b))
        .collect())
}

/// Orthogonal projection of `w` onto `T_pM` under the metric at `p`,
/// computed by pulling back to the identity, projecting onto the span,
/// and pushing forward again.
pub fn project_tangent(
    m: &TripleSystem,
    p: &ConePoint,
    w: &UnitizedHermitian,
) -> Result<UnitizedHermitian> {
    if p.dim() != m.ambient_dim() || w.dim() != m.ambient_dim() {
        return Err(Error::Dimension {
            left: m.ambient_dim(),
            right: if p.dim() != m.ambient_dim() {
                p.dim()
            } else {
                w.dim()
            },
        });
    }
    let pulled = p.conj_by_inv_sqrt(w);
    Ok(p.conj_by_sqrt(&m.project_span(&pulled)))
}

/// Whether `p` belongs to `M = exp(m)`, decided by the span residual of
/// its logarithm at the identity.
pub fn contains_point(m: &TripleSystem, p: &ConePoint, tol: f64) -> Result<bool> {
    if p.dim() != m.ambient_dim() {
        return Err(Error::Dimension {
            left: m.ambient_dim(),
            right: p.dim(),
        });
    }
    Ok(m.span_residual(&mat_log(p)) <= tol)
}

/// The bracket algebra `g = m + k` with `k = [m, m]`, spanned by
/// skew-Hermitian pair operators.
#[derive(Debug, Clone)]
pub struct BracketAlgebra {
    /// Orthonormal basis of `k = [m, m]`, skew-Hermitian with zero
    /// scalar coordinate.
    pub k_basis: Vec<UnitizedOperator>,
    /// Dimension of `g = m + k` as a real vector space.
    pub g_dim: usize,
    /// Largest relative residual among the verified bracket relations.
    pub max_relation_residual: f64,
}

/// Real inner product on the space of pair operators.
fn op_inner(a: &UnitizedOperator, b: &UnitizedOperator) -> f64 {
    a.hs_inner_c(b).re
}

/// Gram-Schmidt extension of `basis` by `v`; returns true if `v` added
/// a new direction.
fn extend_op_basis(basis: &mut Vec<UnitizedOperator>, v: &UnitizedOperator) -> bool {
    let scale = v.hs_norm();
    // Brackets of orthonormal generators that only reach roundoff size
    // are zero in exact arithmetic (the span itself is accurate to a
    // conditioning multiple of machine precision); normalizing them
    // would inject a noise direction into the algebra.
    if scale <= 1e-8 {
        return false;
    }
    let mut r = v.scale_c(cplx(1.0 / scale));
    for _ in 0..2 {
        for e in basis.iter() {
            let c = op_inner(&r, e);
            r = &r - &e.scale_c(cplx(c));
        }
    }
    let norm = r.hs_norm();
    if norm > SPAN_TOL {
        basis.push(r.scale_c(cplx(1.0 / norm)));
        true
    } else {
        false
    }
}

fn op_span_residual(basis: &[UnitizedOperator], v: &UnitizedOperator) -> f64 {
    let mut r = v.clone();
    for e in basis {
        let c = op_inner(&r, e);
        r = &r - &e.scale_c(cplx(c));
    }
    r.hs_norm() / v.hs_norm().max(1.0)
}

/// Computes `k = [m, m]` and verifies the symmetric-pair relations
/// `[m, m] ⊆ k`, `[m, k] ⊆ m` and `[k, k] ⊆ k` numerically.
pub fn bracket_algebra(m: &TripleSystem) -> Result<BracketAlgebra> {
    let herm_ops: Vec<UnitizedOperator> =
        m.ortho_basis().iter().map(|b| b.to_operator()).collect();
    let mut k_basis: Vec<UnitizedOperator> = Vec::new();
    let mut brackets = Vec::new();
    for i in 0..herm_ops.len() {
        for j in (i + 1)..herm_ops.len() {
            let c = commutator(&herm_ops[i], &herm_ops[j]);
            extend_op_basis(&mut k_basis, &c);
            brackets.push(c);
        }
    }
    let mut worst = 0.0_f64;
    // [m, m] lands in k by construction; record the residual anyway.
    for c in &brackets {
        worst = worst.max(op_span_residual(&k_basis, c));
    }
    // [m, k] back into m: the commutator of Hermitian with skew is
    // Hermitian, so compare against the Hermitian span.
    for b in &herm_ops {
        for u in &k_basis {
            let c = commutator(b, u).hermitian_part();
            worst = worst.max(m.span_residual(&c));
        }
    }
    // [k, k] stays in k.
    for i in 0..k_basis.len() {
        for j in (i + 1)..k_basis.len() {
            let c = commutator(&k_basis[i], &k_basis[j]);
            worst = worst.max(op_span_residual(&k_basis, &c));
        }
    }
    if worst > CLOSURE_TOL {
        return Err(Error::Domain(format!(
            "bracket relations violated, residual {worst:.3e}"
        )));
    }
    Ok(BracketAlgebra {
        g_dim: m.dim() + k_basis.len(),
        k_basis,
        max_relation_residual: worst,
    })
}

/// Draws random `p, q` in `exp(m)` and measures how far `log(q p q)`
/// strays from the span. Closure of `M` under the map `(p, q) -> qpq`
/// predicts residuals at roundoff scale.
pub fn qpq_closure_check<R: Rng>(m: &TripleSystem, trials: usize, rng: &mut R) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let p = m.random_point(rng, 1.0);
        let q = m.random_point(rng, 1.0);
        let qo = q.op().to_operator();
        let prod = (&(&qo * &p.op().to_operator()) * &qo).hermitian_part();
        let point = ConePoint::certify(prod)?;
        worst = worst.max(m.span_residual(&mat_log(&point)));
    }
    Ok(worst)
}

/// Diagonal pairs: the scalar direction together with the matrix units
/// `E_ii`. Commutative, hence flat and trivially closed.
pub fn diagonal_system(n: usize) -> Result<TripleSystem> {
    let mut basis = vec![UnitizedHermitian::unit(n)];
    for i in 0..n {
        let mut e = CMatrix::zeros(n, n);
        e[(i, i)] = cplx(1.0);
        basis.push(UnitizedHermitian::from_hs(e)?);
    }
    TripleSystem::new(basis)
}

/// The scalar line: multiples of the unit alone.
pub fn scalar_system(n: usize) -> Result<TripleSystem> {
    TripleSystem::new(vec![UnitizedHermitian::unit(n)])
}

/// All Hermitian pairs commuting with `y`, built from the spectral
/// clusters of the matrix part of `y`. Pairs commute exactly when their
/// matrix parts do, so the scalar direction always belongs.
pub fn commutant_system(y: &UnitizedHermitian) -> Result<TripleSystem> {
    let n = y.dim();
    let eig = eig_hermitian(y.hs())?;
    let scale = eig
        .values
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    // Group eigenvalues into clusters; blocks over a cluster commute
    // with y regardless of the basis chosen inside the eigenspace.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for idx in 0..n {
        match clusters.last_mut() {
            Some(cluster)
                if (eig.values[idx] - eig.values[cluster[0]]).abs() <= 1e-10 * scale =>
            {
                cluster.push(idx);
            }
            _ => clusters.push(vec![idx]),
        }
    }
    let col = |i: usize| eig.vectors.column(i).into_owned();
    let mut basis = vec![UnitizedHermitian::unit(n)];
    for cluster in &clusters {
        for (a, &i) in cluster.iter().enumerate() {
            let ui = col(i);
            basis.push(UnitizedHermitian::from_hs(&ui * ui.adjoint())?);
            for &j in &cluster[a + 1..] {
                let uj = col(j);
                let cross = &ui * uj.adjoint();
                let sym = (&cross + cross.adjoint()) * cplx(0.5);
                let asym = (&cross - cross.adjoint()) * Complex64::new(0.0, 0.5);
                basis.push(UnitizedHermitian::from_hs(sym)?);
                basis.push(UnitizedHermitian::from_hs(asym)?);
            }
        }
    }
    TripleSystem::new(basis)
}

/// Hermitian pairs supported on the top-left `k` by `k` block, with
/// zero scalar coordinate. Exponentials are block matrices with an
/// identity lower-right corner.
pub fn block_system(n: usize, k: usize) -> Result<TripleSystem> {
    if k == 0 || k > n {
        return Err(Error::Index(format!(
            "block size {k} out of range for dimension {n}"
        )));
    }
    let mut basis = Vec::new();
    for i in 0..k {
        let mut e = CMatrix::zeros(n, n);
        e[(i, i)] = cplx(1.0);
        basis.push(UnitizedHermitian::from_hs(e)?);
        for j in (i + 1)..k {
            let mut s = CMatrix::zeros(n, n);
            s[(i, j)] = cplx(1.0);
            s[(j, i)] = cplx(1.0);
            basis.push(UnitizedHermitian::from_hs(s)?);
            let mut a = CMatrix::zeros(n, n);
            a[(i, j)] = Complex64::new(0.0, 1.0);
            a[(j, i)] = Complex64::new(0.0, -1.0);
            basis.push(UnitizedHermitian::from_hs(a)?);
        }
    }
    TripleSystem::new(basis)
}

/// The unital associative algebra generated by a single Hermitian pair:
/// the span of its powers, grown until the rank saturates. Commutative,
/// hence a triple system with vanishing brackets. The generators are
/// orthonormalized power by power, because the raw powers turn severely
/// ill conditioned long before the rank saturates.
pub fn polynomial_system(a: &UnitizedHermitian) -> Result<TripleSystem> {
    let n = a.dim();
    let mut basis = vec![UnitizedHermitian::unit(n)];
    let ao = a.to_operator();
    let mut power = ao.clone();
    // Pair powers live in a space of dimension at most n + 1.
    for _ in 0..=n {
        let h = power.hermitian_part();
        let mut r = h.scale(1.0 / h.hs_norm().max(1e-300));
        for _ in 0..2 {
            for e in &basis {
                let c = r.hs_inner(e);
                r = &r - &e.scale(c);
            }
        }
        let norm = r.hs_norm();
        if norm <= SPAN_TOL {
            break;
        }
        basis.push(r.scale(1.0 / norm));
        power = &power * &ao;
    }
    TripleSystem::new(basis)
}
