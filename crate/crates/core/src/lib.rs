//! Exact computation of Newton-Okounkov bodies on surfaces and Mori dream
//! threefolds from numerical data.
//!
//! Everything is exact rational arithmetic. The [`geometry`] layer provides
//! linear algebra, hulls and cones; [`surface`] does Zariski decompositions
//! and surface polygons; [`threefold`] assembles three-dimensional bodies
//! slice by slice from Mori chamber data; [`models`] builds the standard
//! examples and [`oracle`] enumerates sections on toric blow-ups of `P^3`
//! as an independent check.

pub mod geometry;
pub mod models;
pub mod oracle;
pub mod surface;
pub mod threefold;

pub use geometry::cone::{cone_contains, dual_description, ray_exit, PolyhedralCone};
pub use geometry::linalg::{solve_linear, QMatrix, QVector};
pub use geometry::pl::PiecewiseLinear;
pub use geometry::polygon::{convex_hull_2d, Polygon2};
pub use geometry::polytope::{convex_hull_3d, polytope_volume, Facet, Polytope3};
pub use geometry::rational::Rational;

use thiserror::Error as ThisError;

/// Every failure the library can report. Messages name the offending
/// chamber, curve or constraint.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("base not in cone")]
    BaseNotInCone,
    #[error("not pseudo-effective: {0}")]
    NotPseudoEffective(String),
    #[error("not effective: {0}")]
    NotEffective(String),
    #[error("segment must start in the big cone")]
    NotBig,
    #[error("model inconsistent: {0}")]
    ModelInconsistent(String),
    #[error("inadmissible flag curve: {0}")]
    InadmissibleFlagCurve(String),
    #[error("flag meets SQM indeterminacy in chamber {chamber}: slice formula not valid")]
    Admissibility { chamber: String },
    #[error("empty slice: t = {0} outside the admissible range")]
    EmptySlice(String),
    #[error("chamber data incomplete: {0}")]
    ChamberDataIncomplete(String),
    #[error("non-convex slice family: model data inconsistent ({0})")]
    AuditFailure(String),
    #[error("translation law violated: model data inconsistent ({0})")]
    TranslationLaw(String),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unavailable: {0}")]
    Unavailable(String),
}

impl Error {
    /// Admissibility failures are reported separately from validation.
    pub fn is_admissibility(&self) -> bool {
        matches!(self, Error::Admissibility { .. })
    }
}
