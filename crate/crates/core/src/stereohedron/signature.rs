use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Neighbor, NeighborReport};
use crate::geometry::Point3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HeightSign {
    #[serde(rename = "+")]
    Above,
    #[serde(rename = "-")]
    Below,
    #[serde(rename = "0")]
    Level,
}

/// Neighbors grouped by their vertical projection: each slot is one
/// projected orbit position, holding the signs of the neighbors above,
/// below or level with the base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightSignature {
    pub slots: BTreeMap<String, Vec<HeightSign>>,
    pub above: usize,
    pub below: usize,
    pub level: usize,
}

/// Builds the height signature of a neighbor report.
pub fn neighbor_height_signature(report: &NeighborReport) -> HeightSignature {
    signature_of(
        &report.base,
        &report.neighbors,
        1e-7 * report.circumradius.max(1.0),
    )
}

pub(crate) fn signature_of(base: &Point3, neighbors: &[Neighbor], tol: f64) -> HeightSignature {
    let mut centers: Vec<nalgebra::Vector2<f64>> = Vec::new();
    let mut slots: BTreeMap<String, Vec<HeightSign>> = BTreeMap::new();
    let (mut above, mut below, mut level) = (0, 0, 0);
    for nb in neighbors {
        let d = nb.point.coords.xy() - base.xy();
        let idx = match centers.iter().position(|c| (c - d).norm() <= tol) {
            Some(i) => i,
            None => {
                centers.push(d);
                centers.len() - 1
            }
        };
        let c = centers[idx];
        let key = format!("({}, {})", fmt_coord(c.x), fmt_coord(c.y));
        let dz = nb.point.coords.z - base.z;
        let sign = if dz > tol {
            above += 1;
            HeightSign::Above
        } else if dz < -tol {
            below += 1;
            HeightSign::Below
        } else {
            level += 1;
            HeightSign::Level
        };
        let entry = slots.entry(key).or_default();
        entry.push(sign);
        entry.sort();
    }
    HeightSignature {
        slots,
        above,
        below,
        level,
    }
}

fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0.000000".into()
    } else {
        s
    }
}
