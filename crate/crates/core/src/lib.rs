//! Exact computations for toric deformations of tangent bundles: fans,
//! divisor classes, polymology rings, instanton sectors, correlators and
//! quantum sheaf cohomology relations.

pub mod cone;
pub mod fan;
pub mod linalg;
pub mod poly;
pub mod lattice;
pub mod quantum;
pub mod deformation;
pub mod instanton;
