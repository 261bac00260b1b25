//! Planar crystallographic groups, planar Voronoi cells, overlap counts
//! between two orbits, and influence regions of fundamental subdomains.

mod cell;
mod export;
mod group;
mod influence;
pub mod polygon;
mod probe;

pub use cell::{area_tolerance, overlap_count, overlaps, planar_cell, Overlap};
pub use export::{influence_json, influence_svg};
pub use group::{NormalizerCoset, PlanarGroupSpec, PlanarType};
pub use influence::{
    base_extended_region, base_label, coset_label, default_motions, dominated_region,
    extended_region, influence_region, reduced_influence_region, sample_points,
    separated_by_normalizer, witnessed_influence_region, ExtendedRegion, InfluenceRegion,
    SubdomainLabel,
};
pub use probe::{randomized_bound_probe, ProbeMode, ProbeReport};

use crate::geometry::{GeometryError, Isometry2, Point2};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum PlanarError {
    #[error("unsupported planar group type `{0}`")]
    UnsupportedType(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("point ({}, {}) has a non-trivial stabilizer", point.x, point.y)]
    Stabilizer {
        point: Point2,
        element: Box<Isometry2>,
    },
    #[error("cell not certified up to candidate radius {radius}")]
    NotCertified { radius: f64 },
    #[error("extended region reaches the motion window (half-width {half_width})")]
    WindowExhausted { half_width: f64 },
    #[error("point ({}, {}) lies on a subdomain boundary", .0.x, .0.y)]
    OnBoundary(Point2),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
