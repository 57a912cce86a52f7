//! JSON wire format for pairs, points and manifold descriptors.
//!
//! Every value travels as `{"n": int, "scalar": [re, im],
//! "matrix": [[[re, im], ...], ...]}`. Hermitian values carry a real
//! scalar; raw matrices ride along with a zero scalar.

use crate::error::{Error, Result};
use crate::opalg::{CMatrix, ConePoint, UnitizedHermitian, UnitizedOperator};
use crate::triple::{
    block_system, commutant_system, diagonal_system, polynomial_system, scalar_system,
    TripleSystem,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A unitized value on the wire.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValueJson {
    /// Matrix dimension.
    pub n: usize,
    /// Scalar coordinate as `[re, im]`.
    pub scalar: [f64; 2],
    /// Row-major matrix block, entries as `[re, im]`.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl ValueJson {
    fn from_parts(n: usize, scalar: Complex64, mat: &CMatrix) -> Self {
        let matrix = (0..mat.nrows())
            .map(|i| {
                (0..mat.ncols())
                    .map(|j| [mat[(i, j)].re, mat[(i, j)].im])
                    .collect()
            })
            .collect();
        ValueJson {
            n,
            scalar: [scalar.re, scalar.im],
            matrix,
        }
    }

    pub fn from_operator(op: &UnitizedOperator) -> Self {
        Self::from_parts(op.dim(), op.scalar(), op.mat())
    }

    pub fn from_hermitian(h: &UnitizedHermitian) -> Self {
        Self::from_parts(h.dim(), Complex64::new(h.scalar(), 0.0), h.hs())
    }

    pub fn from_point(p: &ConePoint) -> Self {
        Self::from_hermitian(p.op())
    }

    /// Wraps a raw rectangular matrix with a zero scalar; `n` records
    /// the row count.
    pub fn from_matrix(mat: &CMatrix) -> Self {
        Self::from_parts(mat.nrows(), Complex64::new(0.0, 0.0), mat)
    }

    fn matrix_block(&self) -> Result<CMatrix> {
        let rows = self.matrix.len();
        if rows != self.n {
            return Err(Error::Usage(format!(
                "value declares n = {} but has {} matrix rows",
                self.n, rows
            )));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Usage(format!(
                    "matrix row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    self.n
                )));
            }
        }
        Ok(CMatrix::from_fn(self.n, self.n, |i, j| {
            Complex64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        }))
    }

    pub fn to_operator(&self) -> Result<UnitizedOperator> {
        UnitizedOperator::new(Complex64::new(self.scalar[0], self.scalar[1]), self.matrix_block()?)
    }

    pub fn to_hermitian(&self) -> Result<UnitizedHermitian> {
        if self.scalar[1].abs() > 1e-12 {
            return Err(Error::Usage(
                "Hermitian values need a real scalar coordinate".into(),
            ));
        }
        UnitizedHermitian::new(self.scalar[0], self.matrix_block()?)
    }

    pub fn to_point(&self) -> Result<ConePoint> {
        ConePoint::new(self.to_hermitian()?)
    }
}

/// Named manifold constructions accepted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ManifoldDescriptor {
    Diagonal { n: usize },
    Scalar { n: usize },
    Commutant { y: ValueJson },
    Block { n: usize, k: usize },
    Polynomial { a: ValueJson },
    Custom { basis: Vec<ValueJson> },
}

impl ManifoldDescriptor {
    /// The generating vectors, before any closure verification.
    pub fn generators(&self) -> Result<Vec<UnitizedHermitian>> {
        match self {
            ManifoldDescriptor::Diagonal { n } => Ok(diagonal_system(*n)?.basis().to_vec()),
            ManifoldDescriptor::Scalar { n } => Ok(scalar_system(*n)?.basis().to_vec()),
            ManifoldDescriptor::Commutant { y } => {
                Ok(commutant_system(&y.to_hermitian()?)?.basis().to_vec())
            }
            ManifoldDescriptor::Block { n, k } => Ok(block_system(*n, *k)?.basis().to_vec()),
            ManifoldDescriptor::Polynomial { a } => {
                Ok(polynomial_system(&a.to_hermitian()?)?.basis().to_vec())
            }
            ManifoldDescriptor::Custom { basis } => {
                basis.iter().map(|v| v.to_hermitian()).collect()
            }
        }
    }

    /// Builds the described system, enforcing closure.
    pub fn build(&self) -> Result<TripleSystem> {
        TripleSystem::new(self.generators()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::mat_exp;

    #[test]
    fn values_roundtrip_through_json_text() {
        let h = UnitizedHermitian::new(
            0.25,
            CMatrix::from_row_iterator(
                2,
                2,
                [
                    Complex64::new(0.5, 0.0),
                    Complex64::new(0.1, -0.3),
                    Complex64::new(0.1, 0.3),
                    Complex64::new(-0.2, 0.0),
                ],
            ),
        )
        .unwrap();
        let text = serde_json::to_string(&ValueJson::from_hermitian(&h)).unwrap();
        let parsed: ValueJson = serde_json::from_str(&text).unwrap();
        let back = parsed.to_hermitian().unwrap();
        assert!((&back - &h).hs_norm() < 1e-15);
        let p = mat_exp(&h);
        let ptext = serde_json::to_string(&ValueJson::from_point(&p)).unwrap();
        let pparsed: ValueJson = serde_json::from_str(&ptext).unwrap();
        assert!((pparsed.to_point().unwrap().op() - p.op()).hs_norm() < 1e-12);
    }

    #[test]
    fn malformed_values_are_rejected() {
        let bad = ValueJson {
            n: 2,
            scalar: [1.0, 0.0],
            matrix: vec![vec![[0.0, 0.0]; 2]; 3],
        };
        assert!(matches!(bad.to_hermitian(), Err(Error::Usage(_))));
        let complex_scalar = ValueJson {
            n: 1,
            scalar: [1.0, 0.5],
            matrix: vec![vec![[0.0, 0.0]]],
        };
        assert!(complex_scalar.to_hermitian().is_err());
        assert!(complex_scalar.to_operator().is_ok());
    }

    #[test]
    fn descriptors_build_their_systems() {
        let text = r#"{"kind": "diagonal", "n": 3}"#;
        let desc: ManifoldDescriptor = serde_json::from_str(text).unwrap();
        assert_eq!(desc.build().unwrap().dim(), 4);
        let blk: ManifoldDescriptor =
            serde_json::from_str(r#"{"kind": "block", "n": 3, "k": 2}"#).unwrap();
        assert_eq!(blk.build().unwrap().dim(), 4);
        let custom: ManifoldDescriptor = serde_json::from_str(
            r#"{"kind": "custom", "basis": [{"n": 1, "scalar": [1.0, 0.0], "matrix": [[[0.0, 0.0]]]}]}"#,
        )
        .unwrap();
        assert_eq!(custom.build().unwrap().dim(), 1);
    }
}
