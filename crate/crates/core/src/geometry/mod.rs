//! Isometries, half-spaces, tolerances and bounded Voronoi cells.

mod cell;
mod halfspace;
mod isometry;
pub mod linalg;
pub mod simplex;
mod tolerance;

pub use cell::{
    build_cell, facet_test, polygon_area, polyhedron_vertices, CellFacet, CellPolytope,
    FacetStatus, FacetTest,
};
pub use halfspace::HalfSpace;
pub use isometry::{Isometry, Isometry2, Isometry3, Point, Point2, Point3};
pub use tolerance::TolerancePolicy;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("linear part is not orthogonal (defect {defect:e})")]
    NotOrthogonal { defect: f64 },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("half-space normal is zero or non-finite")]
    DegenerateHalfSpace,
    #[error("points coincide within tolerance")]
    CoincidentPoints,
    #[error("site {0} duplicates an earlier site")]
    DuplicateSite(usize),
    #[error("facet region is unbounded; supply bounding half-spaces")]
    Unbounded,
    #[error("cell center is not strictly inside the bounding half-spaces")]
    EmptyInterior,
    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),
    #[error("linear program failed: {0}")]
    Lp(String),
}
