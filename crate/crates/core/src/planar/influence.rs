use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polygon::{self, HalfPlane};
use super::{PlanarError, PlanarGroupSpec, PlanarType};
use crate::geometry::{Isometry2, Point2};

/// Motions considered for the extended region reach this many lattice steps.
const MOTION_STEPS: f64 = 3.0;

/// A tile `n(D)` of the subdomain tiling, `n` in `N0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubdomainLabel {
    pub coset: String,
    pub translate: Isometry2,
    pub polygon: Vec<Point2>,
}

impl SubdomainLabel {
    pub fn centroid(&self) -> Point2 {
        polygon::centroid(&self.polygon)
    }
}

/// Union of convex pieces containing every cell `Vor(G0 Q)(Q)`, `Q` in the subdomain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedRegion {
    pub pieces: Vec<Vec<Point2>>,
}

impl ExtendedRegion {
    pub fn area(&self) -> f64 {
        self.pieces.iter().map(|p| polygon::area(p)).sum()
    }

    pub fn transformed(&self, m: &Isometry2) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| polygon::ccw(p.iter().map(|x| m.apply(x)).collect()))
                .collect(),
        }
    }

    /// Whether `x` lies in the region, allowing `tol` outside it.
    pub fn contains(&self, x: &Point2, tol: f64) -> bool {
        self.pieces
            .iter()
            .any(|p| polygon::inner_distance(p, x) >= -tol)
    }

    pub fn overlaps(&self, other: &Self, min_area: f64) -> bool {
        self.pieces.iter().any(|a| {
            let (ca, ra) = (
                polygon::centroid(a),
                polygon::bounding_radius(a, &polygon::centroid(a)),
            );
            other.pieces.iter().any(|b| {
                let cb = polygon::centroid(b);
                if (ca - cb).norm() > ra + polygon::bounding_radius(b, &cb) {
                    return false;
                }
                polygon::area(&polygon::intersect(a, b)) > min_area
            })
        })
    }

    pub fn reach(&self, center: &Point2) -> f64 {
        self.pieces
            .iter()
            .map(|p| polygon::bounding_radius(p, center))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceRegion {
    pub group: PlanarType,
    pub base_subdomain: SubdomainLabel,
    pub members: Vec<SubdomainLabel>,
    pub counts_by_coset: BTreeMap<String, usize>,
    pub extended: ExtendedRegion,
    /// Members dropped by the normalizer argument; empty for unreduced regions.
    pub removed: Vec<SubdomainLabel>,
}

impl InfluenceRegion {
    pub fn count(&self, coset: &str) -> usize {
        self.counts_by_coset.get(coset).copied().unwrap_or(0)
    }

    pub fn max_count(&self) -> usize {
        self.counts_by_coset.values().copied().max().unwrap_or(0)
    }

    pub fn contains_tile(&self, tile: &SubdomainLabel, tol: f64) -> bool {
        let c = tile.centroid();
        self.members
            .iter()
            .any(|m| (m.centroid() - c).norm() <= tol)
    }

    /// Members form one edge-connected patch.
    pub fn is_connected(&self, tol: f64) -> bool {
        let n = self.members.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && share_edge(&self.members[i].polygon, &self.members[j].polygon, tol) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn share_edge(a: &[Point2], b: &[Point2], tol: f64) -> bool {
    a.iter()
        .filter(|x| b.iter().any(|y| (*x - y).norm() <= tol))
        .count()
        >= 2
}

fn label(g: &PlanarGroupSpec, k: usize, n: Isometry2) -> SubdomainLabel {
    SubdomainLabel {
        coset: g.cosets[k].label.clone(),
        translate: n,
        polygon: polygon::ccw(g.subdomain.iter().map(|x| n.apply(x)).collect()),
    }
}

pub fn base_label(g: &PlanarGroupSpec) -> SubdomainLabel {
    label(g, 0, Isometry2::identity())
}

/// Half-planes whose intersection is the set of points closer to `m(Q)` than
/// to `Q` for every `Q` in `poly`. Vertices fixed by `m` give no constraint.
pub fn dominated_region(poly: &[Point2], m: &Isometry2, tol: f64) -> Vec<HalfPlane> {
    poly.iter()
        .filter(|v| (m.apply(v) - *v).norm() > tol)
        .map(|v| HalfPlane::closer_to(&m.apply(v), v))
        .collect()
}

/// Non-identity elements of `G0` moving the subdomain within a few lattice steps.
pub fn default_motions(g: &PlanarGroupSpec, steps: f64) -> Vec<Isometry2> {
    let c = g.subdomain_centroid();
    g.elements_near(&c, &c, steps * g.max_lattice_length())
        .into_iter()
        .filter(|m| !m.is_identity(g.tol.tol_slack))
        .collect()
}

/// Superset of the extended region of tile `d`: the window minus every region
/// dominated by a motion, computed from the tile's vertices.
pub fn extended_region(
    g: &PlanarGroupSpec,
    d: &SubdomainLabel,
    motions: &[Isometry2],
) -> Result<ExtendedRegion, PlanarError> {
    extended_region_in(g, d, motions, MOTION_STEPS)
}

fn extended_region_in(
    g: &PlanarGroupSpec,
    d: &SubdomainLabel,
    motions: &[Isometry2],
    steps: f64,
) -> Result<ExtendedRegion, PlanarError> {
    let c = d.centroid();
    let half = steps * g.max_lattice_length();
    let window = vec![
        c + Point2::new(-half, -half),
        c + Point2::new(half, -half),
        c + Point2::new(half, half),
        c + Point2::new(-half, half),
    ];
    let min_area = polygon::area(&d.polygon) * 1e-9;
    let mut pieces = vec![window.clone()];
    for m in motions {
        let hs = dominated_region(&d.polygon, m, g.tol.tol_vertex);
        if hs.is_empty() {
            continue;
        }
        pieces = pieces
            .iter()
            .flat_map(|p| polygon::subtract(p, &hs, min_area))
            .collect();
    }
    let border = polygon::edges(&window);
    let touches = pieces.iter().flatten().any(|x| {
        border
            .iter()
            .any(|h| h.value(x).abs() / h.normal.norm() <= g.tol.tol_vertex)
    });
    if touches {
        return Err(PlanarError::WindowExhausted { half_width: half });
    }
    Ok(ExtendedRegion { pieces })
}

/// Extended region of the base subdomain, widening the motion window once if needed.
pub fn base_extended_region(g: &PlanarGroupSpec) -> Result<ExtendedRegion, PlanarError> {
    let d = base_label(g);
    match extended_region_in(g, &d, &default_motions(g, MOTION_STEPS), MOTION_STEPS) {
        Err(PlanarError::WindowExhausted { .. }) => {
            log::debug!("extended region reached the window; retrying with a wider one");
            let steps = 2.0 * MOTION_STEPS;
            extended_region_in(g, &d, &default_motions(g, steps), steps)
        }
        other => other,
    }
}

/// Tiles `n(D)` whose extended region overlaps that of `D`.
pub fn influence_region(g: &PlanarGroupSpec) -> Result<InfluenceRegion, PlanarError> {
    let ext = base_extended_region(g)?;
    let base = base_label(g);
    let c = base.centroid();
    let reach = 2.0 * ext.reach(&c) + g.tol.tol_vertex;
    let min_area = polygon::area(&g.subdomain) * 1e-9;
    let mut candidates = g.normalizer_elements_near(&c, &c, reach);
    candidates.sort_by(|a, b| {
        let (pa, pb) = (a.1.apply(&c), b.1.apply(&c));
        (pa - c)
            .norm()
            .total_cmp(&(pb - c).norm())
            .then(pa.x.total_cmp(&pb.x))
            .then(pa.y.total_cmp(&pb.y))
    });
    let members: Vec<SubdomainLabel> = candidates
        .par_iter()
        .filter(|(_, n)| ext.transformed(n).overlaps(&ext, min_area))
        .map(|(k, n)| label(g, *k, *n))
        .collect();
    Ok(assemble(g, base, members, ext, Vec::new()))
}

fn assemble(
    g: &PlanarGroupSpec,
    base: SubdomainLabel,
    members: Vec<SubdomainLabel>,
    extended: ExtendedRegion,
    removed: Vec<SubdomainLabel>,
) -> InfluenceRegion {
    let mut counts_by_coset: BTreeMap<String, usize> =
        g.cosets.iter().map(|c| (c.label.clone(), 0)).collect();
    for m in &members {
        *counts_by_coset.entry(m.coset.clone()).or_default() += 1;
    }
    InfluenceRegion {
        group: g.kind,
        base_subdomain: base,
        members,
        counts_by_coset,
        extended,
        removed,
    }
}

/// Whether the cell of every `P` in `D` is disjoint from the cell of `n(P)`.
///
/// For `h` in `G0`, the cell of `P` lies on `P`'s side of the bisector of `P`
/// and `h(P)`, and the cell of `n(P)` on the image side under `n`. When `n`
/// reverses the bisector normal for every `P` (always for a half-turn, and for
/// a reflection when `h` moves along its axis normal) and the two half-planes
/// are disjoint at every vertex of `D`, they are disjoint on all of `D`.
pub fn separated_by_normalizer(g: &PlanarGroupSpec, n: &Isometry2, tol: f64) -> bool {
    let flip = n.linear + nalgebra::Matrix2::identity();
    let d = &g.subdomain;
    let c = g.subdomain_centroid();
    let target = n.apply(&c);
    let reach =
        2.0 * (polygon::bounding_radius(d, &c) + g.max_lattice_length()) + (target - c).norm();
    g.elements_near(&c, &c, reach).iter().any(|h| {
        if h.is_identity(g.tol.tol_slack) {
            return false;
        }
        let m = h.linear - nalgebra::Matrix2::identity();
        if (flip * m).amax() > 1e-9 || (flip * h.translation).amax() > 1e-9 {
            return false;
        }
        d.iter().all(|p| {
            let hp = h.apply(p);
            (hp - p).dot(&n.translation) - hp.norm_squared() + p.norm_squared() >= -tol
        })
    })
}

/// Influence region minus the tiles excluded by [`separated_by_normalizer`].
pub fn reduced_influence_region(g: &PlanarGroupSpec) -> Result<InfluenceRegion, PlanarError> {
    if !matches!(g.kind, PlanarType::Pg | PlanarType::PggSquare) {
        return Err(PlanarError::UnsupportedType(format!(
            "{} has no reduced influence region",
            g.kind
        )));
    }
    let full = influence_region(g)?;
    let tol = g.tol.tol_vertex * g.tol.scale;
    let (removed, kept): (Vec<_>, Vec<_>) = full
        .members
        .into_iter()
        .partition(|m| separated_by_normalizer(g, &m.translate, tol));
    Ok(assemble(
        g,
        full.base_subdomain,
        kept,
        full.extended,
        removed,
    ))
}

/// Points of a convex polygon on a barycentric grid of each fan triangle,
/// `samples` per side, kept off the boundary.
pub fn sample_points(poly: &[Point2], samples: usize) -> Vec<Point2> {
    let n = samples.max(1);
    let mut out = Vec::new();
    for k in 1..poly.len().saturating_sub(1) {
        let (a, b, c) = (poly[0], poly[k], poly[k + 1]);
        for i in 0..n {
            for j in 0..n {
                let (s, t) = (
                    (i as f64 + 1.0 / 3.0) / n as f64,
                    (j as f64 + 1.0 / 3.0) / n as f64,
                );
                let (s, t) = if s + t > 1.0 {
                    (1.0 - s, 1.0 - t)
                } else {
                    (s, t)
                };
                out.push(a * (1.0 - s - t) + b * s + c * t);
            }
        }
    }
    out
}

/// Tiles `n(D)` of the reduced region for which some sampled `P` in `D` has a
/// cell overlapping the cell of `n(P)` with positive area.
///
/// Every member carries a witness, so its counts are lower bounds for the
/// normalizer-related overlap problem; `removed` holds the rest of the
/// influence region, either excluded or unwitnessed at this sampling.
pub fn witnessed_influence_region(
    g: &PlanarGroupSpec,
    samples: usize,
) -> Result<InfluenceRegion, PlanarError> {
    let reduced = match reduced_influence_region(g) {
        Ok(r) => r,
        Err(PlanarError::UnsupportedType(_)) => influence_region(g)?,
        Err(e) => return Err(e),
    };
    let cells: Vec<Vec<Point2>> = sample_points(&g.subdomain, samples)
        .par_iter()
        .filter_map(|p| super::planar_cell(g, p).ok().map(|c| c.polygon()))
        .collect();
    let min_area = super::area_tolerance(g);
    let (kept, mut removed): (Vec<_>, Vec<_>) = reduced.members.into_iter().partition(|m| {
        cells.par_iter().any(|a| {
            let b = polygon::ccw(a.iter().map(|x| m.translate.apply(x)).collect());
            polygon::area(&polygon::intersect(a, &b)) > min_area
        })
    });
    removed.extend(reduced.removed);
    Ok(assemble(
        g,
        reduced.base_subdomain,
        kept,
        reduced.extended,
        removed,
    ))
}

/// The tile containing `pt` in its interior.
pub fn coset_label(g: &PlanarGroupSpec, pt: &Point2) -> Result<SubdomainLabel, PlanarError> {
    let c = g.subdomain_centroid();
    let reach = polygon::bounding_radius(&g.subdomain, &c) + g.tol.tol_vertex;
    for (k, n) in g.normalizer_elements_near(&c, pt, reach) {
        let tile = label(g, k, n);
        let depth = polygon::inner_distance(&tile.polygon, pt);
        if depth > g.tol.tol_vertex {
            return Ok(tile);
        }
        if depth >= -g.tol.tol_vertex {
            return Err(PlanarError::OnBoundary(*pt));
        }
    }
    Err(PlanarError::OnBoundary(*pt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_extended_region_is_four_triangles() {
        let g = PlanarGroupSpec::new(PlanarType::P3);
        let ext = base_extended_region(&g).unwrap();
        assert!((ext.area() - 4.0 * polygon::area(&g.subdomain)).abs() < 1e-9);
    }

    #[test]
    fn coset_label_of_interior_and_boundary() {
        let g = PlanarGroupSpec::new(PlanarType::Pg);
        let inside = coset_label(&g, &Point2::new(0.1, 0.07)).unwrap();
        assert_eq!(inside.coset, "A");
        assert!(matches!(
            coset_label(&g, &Point2::new(0.25, 0.07)),
            Err(PlanarError::OnBoundary(_))
        ));
    }

    #[test]
    fn samples_stay_inside() {
        let g = PlanarGroupSpec::new(PlanarType::PggSquare);
        let pts = sample_points(&g.subdomain, 5);
        assert_eq!(pts.len(), 25);
        assert!(pts
            .iter()
            .all(|p| polygon::inner_distance(&g.subdomain, p) > 0.0));
    }
}
