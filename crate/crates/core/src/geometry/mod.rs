//! Exact rational geometry: scalars, vectors and matrices, planar and
//! spatial hulls, polyhedral cones and piecewise-linear functions.

pub mod cone;
pub mod linalg;
pub mod pl;
pub mod polygon;
pub mod polytope;
pub mod rational;
