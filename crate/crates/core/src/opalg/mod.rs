//! Unitized operator pairs and the weighted trace inner product.
//!
//! Elements are stored as explicit pairs `(scalar, matrix)` standing for
//! `scalar * 1 + a`, where `1` is the unit adjoined to the algebra of
//! Hilbert-Schmidt matrices and `a` is the matrix part. At finite
//! truncation a materialized matrix admits many such splits (the matrix
//! part can absorb any multiple of the identity), so nothing here ever
//! collapses a pair to a single matrix. Every operation tracks both
//! coordinates and spectral calculus follows the rule
//! `f(s + a) = f(s) + [f(s I + a) - f(s) I]`.
//!
//! The inner product weights the matrix part by a factor of four:
//! `<s + a, t + b> = s * conj(t) + 4 tr(a b*)`, which makes the scalar
//! line orthogonal to the matrix block.

mod eig;
mod funcs;

pub use eig::{eig_hermitian, HermitianEig};
pub use funcs::{
    exp_hermitian_matrix, frechet_exp, log_pd_matrix, mat_exp, mat_log, mat_pow, mat_sqrt, polar,
    spd_apply,
};

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense complex matrix used for all matrix parts.
pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance for accepting a matrix as Hermitian (and a scalar
/// as real) when building Hermitian pairs from raw input.
pub const TOL_HERM: f64 = 1e-12;

/// Strict positivity threshold certified on cone membership.
pub const TOL_POS: f64 = 1e-12;

/// Condition number above which raw input is rejected rather than
/// silently losing digits. Applies to user-built points only; points
/// derived from certified ones skip the gate.
pub const MAX_CONDITION: f64 = 1e8;

pub(crate) fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `4 Re tr(a b*)` accumulated entrywise, without forming the product.
fn four_tr_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.re * y.re + x.im * y.im;
    }
    4.0 * acc
}

/// `4 tr(a b*)` accumulated entrywise.
fn four_tr(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y.conj();
    }
    acc * cplx(4.0)
}

fn assert_same_dim(a: usize, b: usize) {
    assert_eq!(a, b, "operand dimensions differ: {a} vs {b}");
}

/// Pair `scalar + hs` with a real scalar and a Hermitian matrix part.
///
/// These are the tangent vectors of the cone and the ambient Hermitian
/// elements. Construction symmetrizes the matrix part and rejects input
/// whose asymmetry exceeds [`TOL_HERM`] relative to its norm.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitizedHermitian {
    scalar: f64,
    hs: CMatrix,
}

impl UnitizedHermitian {
    /// Builds a Hermitian pair, symmetrizing roundoff-level asymmetry.
    pub fn new(scalar: f64, hs: CMatrix) -> Result<Self> {
        if !hs.is_square() {
            return Err(Error::Dimension {
                left: hs.nrows(),
                right: hs.ncols(),
            });
        }
        let skew = (&hs - hs.adjoint()).norm();
        let scale = hs.norm().max(1.0);
        if skew > TOL_HERM * 2.0 * scale {
            return Err(Error::Domain(format!(
                "matrix part is not Hermitian (asymmetry {:.3e} over norm {:.3e})",
                skew, scale
            )));
        }
        let sym = (&hs + hs.adjoint()) * cplx(0.5);
        Ok(Self { scalar, hs: sym })
    }

    /// Pair with zero scalar coordinate.
    pub fn from_hs(hs: CMatrix) -> Result<Self> {
        Self::new(0.0, hs)
    }

    /// The zero element of dimension `n`.
    pub fn zero(n: usize) -> Self {
        Self {
            scalar: 0.0,
            hs: CMatrix::zeros(n, n),
        }
    }

    /// The unit `1 + 0`, distinct from the pair `(0, I)`.
    pub fn unit(n: usize) -> Self {
        Self {
            scalar: 1.0,
            hs: CMatrix::zeros(n, n),
        }
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    pub fn hs(&self) -> &CMatrix {
        &self.hs
    }

    pub fn dim(&self) -> usize {
        self.hs.nrows()
    }

    /// Collapses the pair to the matrix `scalar * I + hs`.
    pub fn materialize(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::identity(n, n) * cplx(self.scalar) + &self.hs
    }

    /// Trace inner product `s t + 4 Re tr(a b)` of two Hermitian pairs.
    pub fn hs_inner(&self, other: &Self) -> f64 {
        assert_same_dim(self.dim(), other.dim());
        self.scalar * other.scalar + four_tr_re(&self.hs, &other.hs)
    }

    /// Norm induced by [`Self::hs_inner`].
    pub fn hs_norm(&self) -> f64 {
        self.hs_inner(self).max(0.0).sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            scalar: self.scalar * c,
            hs: &self.hs * cplx(c),
        }
    }

    pub fn to_operator(&self) -> UnitizedOperator {
        UnitizedOperator {
            scalar: cplx(self.scalar),
            mat: self.hs.clone(),
        }
    }

    /// Internal constructor for results that are Hermitian by derivation.
    pub(crate) fn from_parts_unchecked(scalar: f64, hs: CMatrix) -> Self {
        Self { scalar, hs }
    }
}

impl Add for &UnitizedHermitian {
    type Output = UnitizedHermitian;
    fn add(self, rhs: Self) -> UnitizedHermitian {
        assert_same_dim(self.dim(), rhs.dim());
        UnitizedHermitian {
            scalar: self.scalar + rhs.scalar,
            hs: &self.hs + &rhs.hs,
        }
    }
}

impl Sub for &UnitizedHermitian {
    type Output = UnitizedHermitian;
    fn sub(self, rhs: Self) -> UnitizedHermitian {
        assert_same_dim(self.dim(), rhs.dim());
        UnitizedHermitian {
            scalar: self.scalar - rhs.scalar,
            hs: &self.hs - &rhs.hs,
        }
    }
}

impl Neg for &UnitizedHermitian {
    type Output = UnitizedHermitian;
    fn neg(self) -> UnitizedHermitian {
        self.scale(-1.0)
    }
}

/// Pair `scalar + mat` with a complex scalar and an arbitrary matrix part.
///
/// Products, adjoints and inverses live here; Hermitian pairs convert via
/// [`UnitizedHermitian::to_operator`] and come back through
/// [`UnitizedOperator::to_hermitian`] or [`UnitizedOperator::hermitian_part`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnitizedOperator {
    scalar: Complex64,
    mat: CMatrix,
}

impl UnitizedOperator {
    pub fn new(scalar: Complex64, mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Dimension {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        Ok(Self { scalar, mat })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            scalar: Complex64::ZERO,
            mat: CMatrix::zeros(n, n),
        }
    }

    pub fn unit(n: usize) -> Self {
        Self {
            scalar: cplx(1.0),
            mat: CMatrix::zeros(n, n),
        }
    }

    pub fn scalar(&self) -> Complex64 {
        self.scalar
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn materialize(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::identity(n, n) * self.scalar + &self.mat
    }

    /// Conjugate transpose of both coordinates.
    pub fn adjoint(&self) -> Self {
        Self {
            scalar: self.scalar.conj(),
            mat: self.mat.adjoint(),
        }
    }

    /// Inverse in the unitized algebra. The scalar coordinate of the
    /// inverse is `1 / scalar`, so a zero scalar is rejected even when
    /// the materialized matrix happens to be invertible.
    pub fn inv(&self) -> Result<Self> {
        if self.scalar.norm() == 0.0 {
            return Err(Error::Singular(
                "pair with scalar coordinate 0 has no unitized inverse".into(),
            ));
        }
        let full_inv = self
            .materialize()
            .try_inverse()
            .ok_or_else(|| Error::Singular("materialized operator is not invertible".into()))?;
        let s_inv = cplx(1.0) / self.scalar;
        let n = self.dim();
        let mat = full_inv - CMatrix::identity(n, n) * s_inv;
        Ok(Self { scalar: s_inv, mat })
    }

    /// Sesquilinear trace form `s conj(t) + 4 tr(a b*)`.
    pub fn hs_inner_c(&self, other: &Self) -> Complex64 {
        assert_same_dim(self.dim(), other.dim());
        self.scalar * other.scalar.conj() + four_tr(&self.mat, &other.mat)
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_inner_c(self).re.max(0.0).sqrt()
    }

    pub fn scale_c(&self, c: Complex64) -> Self {
        Self {
            scalar: self.scalar * c,
            mat: &self.mat * c,
        }
    }

    /// Hermitian average `(g + g*) / 2`, used to strip roundoff from
    /// products that are Hermitian by derivation.
    pub fn hermitian_part(&self) -> UnitizedHermitian {
        UnitizedHermitian {
            scalar: self.scalar.re,
            hs: (&self.mat + self.mat.adjoint()) * cplx(0.5),
        }
    }

    /// Converts back to a Hermitian pair, rejecting input whose
    /// anti-Hermitian residue exceeds `tol` relative to its norm.
    pub fn to_hermitian(&self, tol: f64) -> Result<UnitizedHermitian> {
        let skew = (&self.mat - self.mat.adjoint()).norm();
        let scale = self.mat.norm().max(self.scalar.norm()).max(1.0);
        if skew > 2.0 * tol * scale || self.scalar.im.abs() > tol * scale {
            return Err(Error::Domain(format!(
                "operator is not Hermitian (matrix residue {:.3e}, scalar imag {:.3e})",
                skew, self.scalar.im
            )));
        }
        Ok(self.hermitian_part())
    }
}

impl From<&UnitizedHermitian> for UnitizedOperator {
    fn from(h: &UnitizedHermitian) -> Self {
        h.to_operator()
    }
}

impl Add for &UnitizedOperator {
    type Output = UnitizedOperator;
    fn add(self, rhs: Self) -> UnitizedOperator {
        assert_same_dim(self.dim(), rhs.dim());
        UnitizedOperator {
            scalar: self.scalar + rhs.scalar,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &UnitizedOperator {
    type Output = UnitizedOperator;
    fn sub(self, rhs: Self) -> UnitizedOperator {
        assert_same_dim(self.dim(), rhs.dim());
        UnitizedOperator {
            scalar: self.scalar - rhs.scalar,
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Neg for &UnitizedOperator {
    type Output = UnitizedOperator;
    fn neg(self) -> UnitizedOperator {
        self.scale_c(cplx(-1.0))
    }
}

/// Product in the unitized algebra:
/// `(s + a)(t + b) = s t + (s b + t a + a b)`.
impl Mul for &UnitizedOperator {
    type Output = UnitizedOperator;
    fn mul(self, rhs: Self) -> UnitizedOperator {
        assert_same_dim(self.dim(), rhs.dim());
        let mat = &rhs.mat * self.scalar + &self.mat * rhs.scalar + &self.mat * &rhs.mat;
        UnitizedOperator {
            scalar: self.scalar * rhs.scalar,
            mat,
        }
    }
}

/// Congruence `g x g*`, Hermitian whenever `x` is; the result is
/// symmetrized to remove roundoff.
pub fn congruence(g: &UnitizedOperator, x: &UnitizedHermitian) -> UnitizedHermitian {
    (&(g * &x.to_operator()) * &g.adjoint()).hermitian_part()
}

/// Commutator `[x, y] = x y - y x`. For two Hermitian pairs the result is
/// skew with scalar coordinate exactly zero.
pub fn commutator(x: &UnitizedOperator, y: &UnitizedOperator) -> UnitizedOperator {
    &(x * y) - &(y * x)
}

/// Point of the open cone of positive invertible unitized elements.
///
/// Construction certifies that the scalar coordinate and every eigenvalue
/// of the materialized matrix exceed [`TOL_POS`], and caches the spectral
/// decomposition so that repeated square roots, logarithms and powers of
/// the same point reuse one eigensolve.
#[derive(Clone, Debug)]
pub struct ConePoint {
    op: UnitizedHermitian,
    /// Eigenvalues of the materialized matrix, ascending.
    eigvals: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    eigvecs: CMatrix,
}

impl ConePoint {
    /// Certifies raw input, including the condition number gate.
    pub fn new(op: UnitizedHermitian) -> Result<Self> {
        let p = Self::certify(op)?;
        let cond = p.condition_number();
        if cond > MAX_CONDITION {
            return Err(Error::Domain(format!(
                "condition number {:.3e} exceeds the gate {:.1e}",
                cond, MAX_CONDITION
            )));
        }
        Ok(p)
    }

    /// Positivity certification without the condition gate. Used for
    /// points derived from certified ones (congruences, exponentials),
    /// where positivity holds by construction and only roundoff is at
    /// stake.
    pub(crate) fn certify(op: UnitizedHermitian) -> Result<Self> {
        if op.scalar <= TOL_POS {
            return Err(Error::Domain(format!(
                "scalar coordinate {:.3e} is not strictly positive",
                op.scalar
            )));
        }
        let eig = eig_hermitian(&op.hs)?;
        let vals: Vec<f64> = eig.values.iter().map(|d| op.scalar + d).collect();
        if vals.first().copied().unwrap_or(1.0) <= TOL_POS {
            return Err(Error::Domain(format!(
                "smallest eigenvalue {:.3e} is not strictly positive",
                vals.first().copied().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self {
            op,
            eigvals: vals,
            eigvecs: eig.vectors,
        })
    }

    pub fn from_parts(scalar: f64, hs: CMatrix) -> Result<Self> {
        Self::new(UnitizedHermitian::new(scalar, hs)?)
    }

    /// The basepoint `1` of dimension `n`.
    pub fn identity(n: usize) -> Self {
        Self {
            op: UnitizedHermitian::unit(n),
            eigvals: vec![1.0; n],
            eigvecs: CMatrix::identity(n, n),
        }
    }

    /// Rebuilds a point from spectral data already in hand, sorting the
    /// eigenvalues ascending and permuting columns to match.
    pub(crate) fn from_eig(scalar: f64, vals: Vec<f64>, vecs: CMatrix) -> Result<Self> {
        let n = vals.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        let sorted_vals: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
        if scalar <= TOL_POS || sorted_vals.first().copied().unwrap_or(1.0) <= TOL_POS {
            return Err(Error::Domain(
                "spectral data does not describe a positive point".into(),
            ));
        }
        let mut sorted_vecs = CMatrix::zeros(n, n);
        for (col, &i) in idx.iter().enumerate() {
            sorted_vecs.set_column(col, &vecs.column(i));
        }
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            sorted_vals.iter().map(|&v| cplx(v)),
        ));
        let full = &sorted_vecs * diag * sorted_vecs.adjoint();
        let hs = (&full + full.adjoint()) * cplx(0.5) - CMatrix::identity(n, n) * cplx(scalar);
        Ok(Self {
            op: UnitizedHermitian { scalar, hs },
            eigvals: sorted_vals,
            eigvecs: sorted_vecs,
        })
    }

    pub fn op(&self) -> &UnitizedHermitian {
        &self.op
    }

    pub fn scalar(&self) -> f64 {
        self.op.scalar
    }

    pub fn hs(&self) -> &CMatrix {
        &self.op.hs
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn materialize(&self) -> CMatrix {
        self.op.materialize()
    }

    /// Materialized spectrum, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigvals
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigvecs
    }

    pub fn condition_number(&self) -> f64 {
        let lo = self.eigvals.first().copied().unwrap_or(1.0);
        let hi = self.eigvals.last().copied().unwrap_or(1.0);
        hi / lo
    }

    /// Applies a scalar function through the cached spectral data,
    /// following the pair rule `f(s + a) = f(s) + [f(s I + a) - f(s) I]`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> UnitizedHermitian {
        let n = self.dim();
        let fs = f(self.scalar());
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.eigvals.iter().map(|&v| cplx(f(v))),
        ));
        let full = &self.eigvecs * diag * self.eigvecs.adjoint();
        let sym = (&full + full.adjoint()) * cplx(0.5);
        let hs = sym - CMatrix::identity(n, n) * cplx(fs);
        UnitizedHermitian { scalar: fs, hs }
    }

    /// Spectral map that is known to land back in the cone; reuses the
    /// cached eigenvectors instead of re-solving.
    fn apply_positive(&self, f: impl Fn(f64) -> f64) -> ConePoint {
        let vals: Vec<f64> = self.eigvals.iter().map(|&v| f(v)).collect();
        Self::from_eig(f(self.scalar()), vals, self.eigvecs.clone())
            .expect("positive spectral map left the cone")
    }

    /// Logarithm as a Hermitian pair; total because membership certifies
    /// a strictly positive scalar coordinate and spectrum.
    pub fn log(&self) -> UnitizedHermitian {
        self.apply_spectral(f64::ln)
    }

    /// Real power `p^t`.
    pub fn pow(&self, t: f64) -> ConePoint {
        self.apply_positive(|v| v.powf(t))
    }

    pub fn sqrt(&self) -> ConePoint {
        self.pow(0.5)
    }

    pub fn inv_sqrt(&self) -> ConePoint {
        self.pow(-0.5)
    }

    pub fn inv(&self) -> ConePoint {
        self.pow(-1.0)
    }

    /// Positive rescaling `c p`, reusing the cached spectral data.
    ///
    /// Panics if `c` is not strictly positive; rescaling by other
    /// factors leaves the cone.
    pub fn rescale(&self, c: f64) -> ConePoint {
        assert!(c > 0.0, "rescaling factor must be positive, got {c}");
        let vals: Vec<f64> = self.eigvals.iter().map(|&v| c * v).collect();
        Self::from_eig(c * self.scalar(), vals, self.eigvecs.clone())
            .expect("positive rescaling left the cone")
    }

    /// Congruence `p^{1/2} x p^{1/2}`.
    pub fn conj_by_sqrt(&self, x: &UnitizedHermitian) -> UnitizedHermitian {
        congruence(&self.sqrt().op.to_operator(), x)
    }

    /// Congruence `p^{-1/2} x p^{-1/2}`.
    pub fn conj_by_inv_sqrt(&self, x: &UnitizedHermitian) -> UnitizedHermitian {
        congruence(&self.inv_sqrt().op.to_operator(), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn cm(n: usize, entries: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_row_iterator(n, n, entries.iter().map(|&(re, im)| Complex64::new(re, im)))
    }

    fn e11() -> CMatrix {
        cm(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)])
    }

    fn sigma1() -> CMatrix {
        cm(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
    }

    #[test]
    fn inner_product_weights_matrix_part_by_four() {
        let x = UnitizedHermitian::from_hs(e11()).unwrap();
        assert_relative_eq!(x.hs_inner(&x), 4.0);
        let u = UnitizedHermitian::unit(2);
        assert_relative_eq!(u.hs_inner(&u), 1.0);
        // The scalar line is orthogonal to the matrix block.
        assert_relative_eq!(u.hs_inner(&x), 0.0);
    }

    #[test]
    fn unit_and_identity_matrix_are_distinct_pairs() {
        let u = UnitizedHermitian::unit(2);
        let i = UnitizedHermitian::from_hs(CMatrix::identity(2, 2)).unwrap();
        assert_ne!(u, i);
        assert_eq!(u.materialize(), i.materialize());
        assert_relative_eq!(i.hs_norm(), (8.0f64).sqrt());
    }

    #[test]
    fn pair_product_tracks_both_coordinates() {
        let a = UnitizedOperator::new(cplx(2.0), e11()).unwrap();
        let b = UnitizedOperator::new(cplx(3.0), sigma1()).unwrap();
        let ab = &a * &b;
        assert_eq!(ab.scalar(), cplx(6.0));
        // 2 * sigma1 + 3 * e11 + e11 * sigma1
        let expected = sigma1() * cplx(2.0)
            + e11() * cplx(3.0)
            + cm(2, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!((ab.mat() - expected).norm() < 1e-14);
    }

    #[test]
    fn inverse_requires_nonzero_scalar() {
        let g = UnitizedOperator::new(Complex64::ZERO, sigma1()).unwrap();
        assert!(matches!(g.inv(), Err(Error::Singular(_))));
    }

    #[test]
    fn inverse_round_trips() {
        let g = UnitizedOperator::new(cplx(1.5), sigma1() * cplx(0.25)).unwrap();
        let gi = g.inv().unwrap();
        let prod = &g * &gi;
        assert_relative_eq!(prod.scalar().re, 1.0, epsilon = 1e-14);
        assert!(prod.mat().norm() < 1e-14);
    }

    #[test]
    fn commutator_of_hermitians_has_zero_scalar() {
        let x = UnitizedHermitian::new(0.7, e11()).unwrap().to_operator();
        let y = UnitizedHermitian::new(-0.3, sigma1()).unwrap().to_operator();
        let k = commutator(&x, &y);
        assert_eq!(k.scalar(), Complex64::ZERO);
        // Skew part: [e11, sigma1].
        assert!((&k.mat().adjoint() + k.mat()).norm() < 1e-14);
    }

    #[test]
    fn cone_membership_checks_scalar_and_spectrum() {
        // Materialized 2I but scalar coordinate -1: rejected.
        let bad = UnitizedHermitian::new(-1.0, CMatrix::identity(2, 2) * cplx(3.0)).unwrap();
        assert!(ConePoint::new(bad).is_err());
        // Indefinite matrix part pulls an eigenvalue below zero.
        let bad2 = UnitizedHermitian::new(0.5, sigma1()).unwrap();
        assert!(ConePoint::new(bad2).is_err());
        let good = UnitizedHermitian::new(2.0, sigma1()).unwrap();
        assert!(ConePoint::new(good).is_ok());
    }

    #[test]
    fn condition_gate_applies_to_raw_input_only() {
        let spread = cm(
            2,
            &[(1e5, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0 + 1e-5, 0.0)],
        );
        let op = UnitizedHermitian::new(1.0, spread).unwrap();
        assert!(matches!(
            ConePoint::new(op.clone()),
            Err(Error::Domain(_))
        ));
        assert!(ConePoint::certify(op).is_ok());
    }

    #[test]
    fn spectral_calculus_follows_the_pair_rule() {
        let p = ConePoint::from_parts(2.0, sigma1()).unwrap();
        // Spectrum {1, 3}; scalar coordinate 2.
        let lg = p.log();
        assert_relative_eq!(lg.scalar(), 2.0f64.ln());
        let expected_hs = cm(
            2,
            &[
                (0.5 * 3.0f64.ln() - 2.0f64.ln(), 0.0),
                (0.5 * 3.0f64.ln(), 0.0),
                (0.5 * 3.0f64.ln(), 0.0),
                (0.5 * 3.0f64.ln() - 2.0f64.ln(), 0.0),
            ],
        );
        assert!((lg.hs() - expected_hs).norm() < 1e-12);
    }

    #[test]
    fn powers_reuse_spectral_data_and_stay_sorted() {
        let p = ConePoint::from_parts(2.0, sigma1()).unwrap();
        let q = p.pow(-1.0);
        // Spectrum {1/3, 1}, ascending.
        assert_relative_eq!(q.eigenvalues()[0], 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(q.eigenvalues()[1], 1.0, epsilon = 1e-12);
        assert!((q.materialize() * p.materialize() - CMatrix::identity(2, 2)).norm() < 1e-12);
        assert_relative_eq!(q.scalar(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn congruence_symmetrizes_roundoff() {
        let p = ConePoint::from_parts(1.0, sigma1() * cplx(0.5)).unwrap();
        let x = UnitizedHermitian::new(0.3, e11()).unwrap();
        let y = p.conj_by_inv_sqrt(&x);
        assert!((y.hs() - y.hs().adjoint()).norm() < 1e-15);
        // Round trip through the inverse congruence.
        let back = p.conj_by_sqrt(&y);
        assert!((&back - &x).hs_norm() < 1e-12);
    }
}
