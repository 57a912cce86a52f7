//! Riemannian geometry of the cone of positive invertible unitized
//! Hilbert-Schmidt operators, at finite matrix truncation.
//!
//! The cone carries the trace metric `<x, y>_p = <p^{-1/2} x p^{-1/2},
//! p^{-1/2} y p^{-1/2}>`, built on the weighted trace form of
//! [`opalg`]. On top of it sit closed geodesics and curvature
//! ([`geometry`]), Lie triple systems and their exponential submanifolds
//! ([`triple`]), metric projections and operator decompositions
//! ([`project`]), the foliation by scalar coordinate ([`foliation`]),
//! and a randomized property harness plus the CLI ([`harness`]).

pub mod error;
pub mod foliation;
pub mod geometry;
pub mod harness;
pub mod opalg;
pub mod project;
pub mod triple;

pub use error::{Error, Result};
pub use opalg::{CMatrix, ConePoint, UnitizedHermitian, UnitizedOperator};
