//! Neighbor enumeration for Voronoi stereohedra of 3D groups.

mod enumerate;
mod export;
mod signature;

pub use enumerate::{
    candidate_set, default_helix_box, enumerate_neighbors, EnumerateOptions, MarginalPolicy,
    Neighbor, NeighborReport, RunStats,
};
pub use export::{export_cell, report_from_json, ExportFormat};
pub use signature::{neighbor_height_signature, HeightSign, HeightSignature};

use crate::geometry::GeometryError;
use crate::groups3d::GroupError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum StereoError {
    #[error("candidate radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("no orbit points within radius {radius}")]
    EmptyCandidates { radius: f64 },
    #[error("degenerate base point: {marginal} orbit points touch the cell without a facet ({facets} facets)")]
    Degenerate { marginal: usize, facets: usize },
    #[error("neighbor set not certified after {rounds} rounds (last radius {radius})")]
    NotCertified { rounds: u32, radius: f64 },
    #[error("export failed: {0}")]
    Export(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
