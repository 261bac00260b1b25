//! Space groups with a vertical axis: catalog, orbits, bands and stabilizers.

mod catalog;
mod group;
mod orbit;

pub use catalog::{Catalog, CatalogEntry, BUILTIN_CATALOG};
pub use group::{CosetRep, GroupSpec};
pub use orbit::{Band, OrbitPoint};

use crate::expr::ExprError;
use crate::geometry::GeometryError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("unknown group `{name}` (known: {known})")]
    UnknownGroup { name: String, known: String },
    #[error("group {group} needs parameter `{param}`")]
    MissingParam { group: String, param: String },
    #[error("bad parameter `{param}`: {msg}")]
    BadParam { param: String, msg: String },
    #[error("catalog line {line}: {msg}")]
    Catalog { line: usize, msg: String },
    #[error("inconsistent group data: {0}")]
    Inconsistent(String),
    #[error("base point has a nontrivial stabilizer (coset {coset}, word {word:?})")]
    NontrivialStabilizer { coset: usize, word: Vec<i32> },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
