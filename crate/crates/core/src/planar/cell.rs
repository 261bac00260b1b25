use serde::{Deserialize, Serialize};

use super::polygon;
use super::{PlanarError, PlanarGroupSpec};
use crate::geometry::{build_cell, CellPolytope, HalfSpace, Isometry2, Point2};

const MAX_DOUBLINGS: u32 = 8;

/// Voronoi cell of `base` in its `G0`-orbit, certified by doubling the
/// candidate radius until it exceeds twice the circumradius.
pub fn planar_cell(g: &PlanarGroupSpec, base: &Point2) -> Result<CellPolytope<2>, PlanarError> {
    if let Some(h) = g.stabilizer(base) {
        return Err(PlanarError::Stabilizer {
            point: *base,
            element: Box::new(h),
        });
    }
    let mut radius = 2.0 * g.max_lattice_length();
    for _ in 0..=MAX_DOUBLINGS {
        let sites: Vec<Point2> = g
            .elements_near(base, base, radius)
            .iter()
            .map(|e| e.apply(base))
            .filter(|s| (s - base).norm() > g.tol.tol_dedupe)
            .collect();
        let lo = base - Point2::repeat(radius);
        let hi = base + Point2::repeat(radius);
        let cell = build_cell(base, &sites, &HalfSpace::boxed(&lo, &hi), &g.tol)?
            .with_certified_radius(radius);
        if cell.is_certified() {
            return Ok(cell);
        }
        radius *= 2.0;
    }
    Err(PlanarError::NotCertified { radius })
}

pub(crate) fn cell_polygon(cell: &CellPolytope<2>) -> Vec<Point2> {
    cell.polygon()
}

fn transform(poly: &[Point2], m: &Isometry2) -> Vec<Point2> {
    polygon::ccw(poly.iter().map(|x| m.apply(x)).collect())
}

/// One cell of the second orbit overlapping the base cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub element: Isometry2,
    pub site: Point2,
    pub area: f64,
}

/// Area below which two cells are considered to only touch.
pub fn area_tolerance(g: &PlanarGroupSpec) -> f64 {
    g.tol.tol_vertex * g.tol.scale
}

/// Cells of `Vor(G0 q)` whose interiors meet the interior of the cell of `p` in `Vor(G0 p)`.
pub fn overlaps(g: &PlanarGroupSpec, p: &Point2, q: &Point2) -> Result<Vec<Overlap>, PlanarError> {
    let cp = planar_cell(g, p)?;
    let cq = planar_cell(g, q)?;
    let poly_p = cell_polygon(&cp);
    let poly_q = cell_polygon(&cq);
    let reach = cp.circumradius + cq.circumradius + g.tol.tol_vertex;
    let min_area = area_tolerance(g);
    let mut out: Vec<Overlap> = Vec::new();
    for e in g.elements_near(q, p, reach) {
        let site = e.apply(q);
        if out
            .iter()
            .any(|o| (o.site - site).norm() <= g.tol.tol_dedupe)
        {
            continue;
        }
        let area = polygon::area(&polygon::intersect(&poly_p, &transform(&poly_q, &e)));
        if area > min_area {
            out.push(Overlap {
                element: e,
                site,
                area,
            });
        }
    }
    Ok(out)
}

pub fn overlap_count(g: &PlanarGroupSpec, p: &Point2, q: &Point2) -> Result<usize, PlanarError> {
    Ok(overlaps(g, p, q)?.len())
}
