//! The codimension-one foliation of the cone by the scalar coordinate,
//! and the isometric splitting into a leaf times the scalar line.
//!
//! Because points carry their scalar coordinate explicitly, membership
//! in a leaf is syntactic and the leaf projection is a plain rescaling.
//! The scalar line is metrically a copy of the reals under the
//! logarithm, and the cone splits as an exact metric product.

use crate::error::{Error, Result};
use crate::opalg::ConePoint;

/// A point tagged with the leaf it lives on.
#[derive(Debug, Clone)]
pub struct LeafPoint {
    leaf: f64,
    point: ConePoint,
}

impl LeafPoint {
    /// Tags a point with its own leaf; always consistent.
    pub fn new(point: ConePoint) -> Self {
        LeafPoint {
            leaf: point.scalar(),
            point,
        }
    }

    /// The leaf coordinate.
    pub fn leaf(&self) -> f64 {
        self.leaf
    }

    /// The underlying point.
    pub fn point(&self) -> &ConePoint {
        &self.point
    }
}

/// Leaf coordinate of a point: its scalar part. Constant along
/// geodesics whose endpoints share it.
pub fn leaf_of(p: &ConePoint) -> f64 {
    p.scalar()
}

/// Projection onto the leaf with coordinate `lambda`: the rescaling
/// `(lambda / leaf_of(p)) p`. Between two fixed leaves this map is an
/// isometric bijection, and along vertical geodesics it implements
/// parallel translation.
pub fn leaf_project(p: &ConePoint, lambda: f64) -> Result<ConePoint> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "leaf coordinate must be positive and finite, got {lambda}"
        )));
    }
    Ok(p.rescale(lambda / p.scalar()))
}

/// Splits a point into its unit-leaf representative and its leaf
/// coordinate. Inverse of [`unsplit`].
pub fn split(p: &ConePoint) -> (ConePoint, f64) {
    let lambda = p.scalar();
    (p.rescale(1.0 / lambda), lambda)
}

/// Reassembles a point from a unit-leaf representative and a leaf
/// coordinate.
pub fn unsplit(s1: &ConePoint, lambda: f64) -> Result<ConePoint> {
    if (s1.scalar() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "representative must lie on the unit leaf, scalar is {}",
            s1.scalar()
        )));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "leaf coordinate must be positive and finite, got {lambda}"
        )));
    }
    Ok(s1.rescale(lambda))
}

/// Distance on the scalar line: the absolute logarithm of the ratio.
/// This is also the distance between the leaves as subsets.
pub fn lambda_distance(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::Domain(format!(
            "leaf coordinates must be positive, got {alpha} and {beta}"
        )));
    }
    Ok((alpha / beta).ln().abs())
}
