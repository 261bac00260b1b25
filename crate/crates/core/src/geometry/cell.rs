use itertools::Itertools;
use nalgebra::{SMatrix, SVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg;
use super::simplex::{maximize, LpOutcome};
use super::{GeometryError, HalfSpace, Point, TolerancePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FacetStatus {
    Facet,
    Marginal,
    Redundant,
}

/// Result of testing whether the bisector of `p` and `q` supports a facet.
///
/// `slack` is the largest distance, over points of the bisector inside every
/// other constraint, to the nearest competing constraint. It is positive for
/// facets, negative for redundant bisectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FacetTest<const D: usize> {
    pub status: FacetStatus,
    pub slack: f64,
    pub witness: Point<D>,
}

/// Classifies the bisector of `p` and `q` against the sites `others` and the
/// bounding half-spaces.
pub fn facet_test<const D: usize>(
    p: &Point<D>,
    q: &Point<D>,
    others: &[Point<D>],
    bounds: &[HalfSpace<D>],
    tol: &TolerancePolicy,
) -> Result<FacetTest<D>, GeometryError> {
    let normal = q - p;
    if normal.norm() <= tol.tol_dedupe {
        return Err(GeometryError::CoincidentPoints);
    }
    let basis = complement_basis(&normal);
    let mid = (p + q) * 0.5;
    let mut rows = Vec::with_capacity(others.len() + bounds.len());
    let mut rhs = Vec::with_capacity(others.len() + bounds.len());
    let mut push = |h: HalfSpace<D>| {
        let h = h.normalized();
        let mut row: Vec<f64> = basis.iter().map(|u| h.normal.dot(u)).collect();
        row.push(1.0);
        rows.push(row);
        rhs.push(h.offset - h.normal.dot(&mid));
    };
    for r in others {
        if (r - p).norm() <= tol.tol_dedupe {
            return Err(GeometryError::CoincidentPoints);
        }
        if (r - q).norm() <= tol.tol_dedupe {
            continue;
        }
        push(HalfSpace::bisector(p, r, tol.tol_dedupe)?);
    }
    for b in bounds {
        push(*b);
    }
    if rows.is_empty() {
        return Err(GeometryError::Unbounded);
    }
    let mut objective = vec![0.0; D];
    objective[D - 1] = 1.0;
    let mut start = vec![0.0; D];
    start[D - 1] = rhs.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    match maximize(&objective, &rows, &rhs, &start)? {
        LpOutcome::Unbounded => Err(GeometryError::Unbounded),
        LpOutcome::Optimal { value, point } => {
            let mut witness = mid;
            for (k, u) in basis.iter().enumerate() {
                witness += u * point[k];
            }
            let status = if value > tol.tol_slack {
                FacetStatus::Facet
            } else if value >= -tol.tol_slack {
                FacetStatus::Marginal
            } else {
                FacetStatus::Redundant
            };
            Ok(FacetTest {
                status,
                slack: value,
                witness,
            })
        }
    }
}

/// Orthonormal basis of the hyperplane orthogonal to `n`.
fn complement_basis<const D: usize>(n: &SVector<f64, D>) -> Vec<SVector<f64, D>> {
    let nh = n.normalize();
    let mut order: Vec<usize> = (0..D).collect();
    order.sort_by(|&a, &b| nh[a].abs().total_cmp(&nh[b].abs()));
    let mut basis: Vec<SVector<f64, D>> = Vec::with_capacity(D - 1);
    for &i in &order {
        if basis.len() == D - 1 {
            break;
        }
        let mut v = SVector::<f64, D>::zeros();
        v[i] = 1.0;
        v -= nh * nh.dot(&v);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let len = v.norm();
        if len > 1e-6 {
            basis.push(v / len);
        }
    }
    basis
}

/// One facet of a cell: the bisector with orbit site `site`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFacet<const D: usize> {
    pub site: usize,
    pub halfspace: HalfSpace<D>,
    pub slack: f64,
    /// Vertex indices, counter-clockwise seen from outside in 3D.
    pub vertices: Vec<usize>,
}

/// Bounded Voronoi cell of `center` with respect to a finite site list,
/// clipped to a bounding box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellPolytope<const D: usize> {
    pub center: Point<D>,
    pub vertices: Vec<Point<D>>,
    pub facets: Vec<CellFacet<D>>,
    /// Faces lying on the bounding box; non-empty means the box cut the cell.
    pub box_faces: Vec<CellFacet<D>>,
    /// Sites whose bisector touches the cell without supporting a facet.
    pub marginal: Vec<usize>,
    pub circumradius: f64,
    /// Radius around the center within which the site list is known to be complete.
    pub certified_radius: f64,
}

impl<const D: usize> CellPolytope<D> {
    pub fn with_certified_radius(mut self, r: f64) -> Self {
        self.certified_radius = r;
        self
    }

    pub fn truncated(&self) -> bool {
        !self.box_faces.is_empty()
    }

    /// The cell is exact when every site that could contribute a facet lies
    /// within the certified radius.
    pub fn is_certified(&self) -> bool {
        !self.truncated() && self.certified_radius >= 2.0 * self.circumradius
    }

    pub fn facet_sites(&self) -> Vec<usize> {
        self.facets.iter().map(|f| f.site).collect()
    }

    /// Area in 2D, volume in 3D.
    pub fn measure(&self) -> f64 {
        match D {
            2 => polygon_area(&self.polygon()),
            3 => {
                let mut vol = 0.0;
                for f in self.facets.iter().chain(&self.box_faces) {
                    let v = &f.vertices;
                    for k in 1..v.len().saturating_sub(1) {
                        let a = self.vertices[v[0]] - self.center;
                        let b = self.vertices[v[k]] - self.center;
                        let c = self.vertices[v[k + 1]] - self.center;
                        vol += det3(&a, &b, &c) / 6.0;
                    }
                }
                vol
            }
            _ => f64::NAN,
        }
    }

    /// Counter-clockwise vertex loop of a planar cell.
    pub fn polygon(&self) -> Vec<SVector<f64, 2>> {
        assert_eq!(D, 2, "polygon() is only defined for planar cells");
        let mut pts: Vec<SVector<f64, 2>> = self
            .vertices
            .iter()
            .map(|v| SVector::<f64, 2>::new(v[0], v[1]))
            .collect();
        let c = SVector::<f64, 2>::new(self.center[0], self.center[1]);
        pts.sort_by(|a, b| {
            let ta = (a.y - c.y).atan2(a.x - c.x);
            let tb = (b.y - c.y).atan2(b.x - c.x);
            ta.total_cmp(&tb)
        });
        pts
    }
}

fn det3<const D: usize>(a: &SVector<f64, D>, b: &SVector<f64, D>, c: &SVector<f64, D>) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

pub fn polygon_area(poly: &[SVector<f64, 2>]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    (0..n)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            a.x * b.y - a.y * b.x
        })
        .sum::<f64>()
        * 0.5
}

/// Builds the Voronoi cell of `p` among `sites`, clipped to `bounds`.
///
/// Sites that can reach the cell are classified with [`facet_test`]; the
/// rest are redundant. Marginal sites are reported but do not become facets.
pub fn build_cell<const D: usize>(
    p: &Point<D>,
    sites: &[Point<D>],
    bounds: &[HalfSpace<D>],
    tol: &TolerancePolicy,
) -> Result<CellPolytope<D>, GeometryError> {
    for b in bounds {
        if b.signed_distance(p) >= -tol.tol_slack {
            return Err(GeometryError::EmptyInterior);
        }
    }
    if sites.iter().any(|s| (s - p).norm() <= tol.tol_dedupe) {
        return Err(GeometryError::CoincidentPoints);
    }
    if let Some(i) = first_duplicate(sites, tol.tol_dedupe) {
        return Err(GeometryError::DuplicateSite(i));
    }
    let relevant = relevant_sites(p, sites, bounds, tol)?;
    let kept: Vec<Point<D>> = relevant.iter().map(|&i| sites[i]).collect();
    let tests: Vec<FacetTest<D>> = (0..kept.len())
        .into_par_iter()
        .map(|i| facet_test_indexed(p, &kept, i, bounds, tol))
        .collect::<Result<_, _>>()?;

    let mut planes: Vec<(Option<usize>, HalfSpace<D>, f64)> = Vec::new();
    let mut marginal = Vec::new();
    for (&i, t) in relevant.iter().zip(&tests) {
        match t.status {
            FacetStatus::Facet => planes.push((
                Some(i),
                HalfSpace::bisector(p, &sites[i], tol.tol_dedupe)?.normalized(),
                t.slack,
            )),
            FacetStatus::Marginal => marginal.push(i),
            FacetStatus::Redundant => {}
        }
    }
    for b in bounds {
        planes.push((None, b.normalized(), f64::NAN));
    }

    let vertices = enumerate_vertices(&planes, tol);
    let mut facets = Vec::new();
    let mut box_faces = Vec::new();
    for (site, h, slack) in &planes {
        let on: Vec<usize> = (0..vertices.len())
            .filter(|&k| h.signed_distance(&vertices[k]).abs() <= tol.tol_vertex)
            .collect();
        let face = CellFacet {
            site: site.unwrap_or(usize::MAX),
            halfspace: *h,
            slack: *slack,
            vertices: order_face(&vertices, on, &h.normal),
        };
        match site {
            Some(_) => {
                if face.vertices.len() < D {
                    log::warn!(
                        "facet with site {} has only {} vertices",
                        face.site,
                        face.vertices.len()
                    );
                }
                facets.push(face)
            }
            None if face.vertices.len() >= D => box_faces.push(face),
            None => {}
        }
    }
    let circumradius = vertices.iter().map(|v| (v - p).norm()).fold(0.0, f64::max);
    Ok(CellPolytope {
        center: *p,
        vertices,
        facets,
        box_faces,
        marginal,
        circumradius,
        certified_radius: 0.0,
    })
}

/// Sites below this count are tested directly without a distance prefilter.
const PREFILTER_MIN: usize = 96;
const PREFILTER_NEAREST: usize = 48;

/// Indices of the sites that can touch the cell. The cell of the nearest
/// sites contains the full cell, so a site farther than twice its
/// circumradius has its bisector strictly outside.
fn relevant_sites<const D: usize>(
    p: &Point<D>,
    sites: &[Point<D>],
    bounds: &[HalfSpace<D>],
    tol: &TolerancePolicy,
) -> Result<Vec<usize>, GeometryError> {
    if sites.len() < PREFILTER_MIN {
        return Ok((0..sites.len()).collect());
    }
    let mut order: Vec<usize> = (0..sites.len()).collect();
    order.sort_by(|&a, &b| (sites[a] - p).norm().total_cmp(&(sites[b] - p).norm()));
    let nearest: Vec<Point<D>> = order[..PREFILTER_NEAREST]
        .iter()
        .map(|&i| sites[i])
        .collect();
    let outer = build_cell(p, &nearest, bounds, tol)?;
    if outer.vertices.is_empty() {
        return Ok((0..sites.len()).collect());
    }
    let reach = 2.0 * (outer.circumradius + tol.tol_slack + tol.tol_vertex) * (1.0 + 1e-9);
    Ok((0..sites.len())
        .filter(|&i| (sites[i] - p).norm() <= reach)
        .collect())
}

/// Index of a site within `tol` of an earlier site, found by sweeping the
/// sites in order of their first coordinate.
fn first_duplicate<const D: usize>(sites: &[Point<D>], tol: f64) -> Option<usize> {
    let mut order: Vec<usize> = (0..sites.len()).collect();
    order.sort_by(|&a, &b| sites[a][0].total_cmp(&sites[b][0]));
    let mut found: Option<usize> = None;
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if sites[b][0] - sites[a][0] > tol {
                break;
            }
            if (sites[a] - sites[b]).norm() <= tol {
                let later = a.max(b);
                found = Some(found.map_or(later, |f| f.min(later)));
            }
        }
    }
    found
}

fn facet_test_indexed<const D: usize>(
    p: &Point<D>,
    sites: &[Point<D>],
    idx: usize,
    bounds: &[HalfSpace<D>],
    tol: &TolerancePolicy,
) -> Result<FacetTest<D>, GeometryError> {
    let others: Vec<Point<D>> = sites
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != idx)
        .map(|(_, s)| *s)
        .collect();
    facet_test(p, &sites[idx], &others, bounds, tol)
}

/// Vertices of the polytope cut out by `planes`: every D-subset is
/// intersected and kept when it satisfies all planes.
/// Vertices of the intersection of `halfspaces`, which may be unbounded.
pub fn polyhedron_vertices<const D: usize>(
    halfspaces: &[HalfSpace<D>],
    tol: &TolerancePolicy,
) -> Vec<Point<D>> {
    let planes: Vec<(Option<usize>, HalfSpace<D>, f64)> = halfspaces
        .iter()
        .map(|h| (None, h.normalized(), f64::NAN))
        .collect();
    enumerate_vertices(&planes, tol)
}

fn enumerate_vertices<const D: usize>(
    planes: &[(Option<usize>, HalfSpace<D>, f64)],
    tol: &TolerancePolicy,
) -> Vec<Point<D>> {
    let found: Vec<Point<D>> = (0..planes.len())
        .combinations(D)
        .par_bridge()
        .filter_map(|combo| {
            let mut a = SMatrix::<f64, D, D>::zeros();
            let mut b = SVector::<f64, D>::zeros();
            for (r, &k) in combo.iter().enumerate() {
                a.set_row(r, &planes[k].1.normal.transpose());
                b[r] = planes[k].1.offset;
            }
            let (x, _) = linalg::solve(a, b, tol.tol_pivot())?;
            planes
                .iter()
                .all(|(_, h, _)| h.signed_distance(&x) <= tol.tol_vertex)
                .then_some(x)
        })
        .collect();
    let mut sorted = found;
    sorted.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out: Vec<Point<D>> = Vec::new();
    for v in sorted {
        if !out.iter().any(|u| (u - v).norm() <= tol.tol_vertex) {
            out.push(v);
        }
    }
    out
}

fn order_face<const D: usize>(
    vertices: &[Point<D>],
    mut ids: Vec<usize>,
    normal: &SVector<f64, D>,
) -> Vec<usize> {
    if D != 3 || ids.len() < 3 {
        ids.sort_unstable();
        return ids;
    }
    let n = normal.normalize();
    let c = ids.iter().map(|&k| vertices[k]).sum::<Point<D>>() / ids.len() as f64;
    let u = (vertices[ids[0]] - c).normalize();
    let w = SVector::<f64, D>::from_fn(|i, _| {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        n[a] * u[b] - n[b] * u[a]
    });
    ids.sort_by(|&a, &b| {
        let da = vertices[a] - c;
        let db = vertices[b] - c;
        da.dot(&w)
            .atan2(da.dot(&u))
            .total_cmp(&db.dot(&w).atan2(db.dot(&u)))
    });
    ids
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point2, Point3};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::for_scale(1.0).unwrap()
    }

    fn cubic_sites() -> Vec<Point3> {
        let mut s = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                for k in -1..=1 {
                    if (i, j, k) != (0, 0, 0) {
                        s.push(Point3::new(i as f64, j as f64, k as f64));
                    }
                }
            }
        }
        s
    }

    #[test]
    fn cubic_lattice_cell_is_unit_cube() {
        let bounds = HalfSpace::boxed(&Point3::new(-3.0, -3.0, -3.0), &Point3::new(3.0, 3.0, 3.0));
        let cell = build_cell(&Point3::zeros(), &cubic_sites(), &bounds, &tol()).unwrap();
        assert_eq!(cell.facets.len(), 6);
        assert_eq!(cell.vertices.len(), 8);
        assert!((cell.measure() - 1.0).abs() < 1e-12);
        assert!(cell.box_faces.is_empty());
        assert!((cell.circumradius - 0.75f64.sqrt()).abs() < 1e-12);
        // Edge and corner neighbours only touch the cube.
        assert_eq!(cell.marginal.len(), 20);
    }

    #[test]
    fn face_orientation_is_outward() {
        let bounds = HalfSpace::boxed(&Point3::new(-3.0, -3.0, -3.0), &Point3::new(3.0, 3.0, 3.0));
        let cell = build_cell(&Point3::zeros(), &cubic_sites(), &bounds, &tol()).unwrap();
        for f in &cell.facets {
            let v = &f.vertices;
            let a = cell.vertices[v[1]] - cell.vertices[v[0]];
            let b = cell.vertices[v[2]] - cell.vertices[v[0]];
            assert!(a.cross(&b).dot(&f.halfspace.normal) > 0.0);
        }
    }

    #[test]
    fn hexagonal_planar_cell() {
        let s3 = 3f64.sqrt() / 2.0;
        let sites: Vec<Point2> = [
            (1.0, 0.0),
            (0.5, s3),
            (-0.5, s3),
            (-1.0, 0.0),
            (-0.5, -s3),
            (0.5, -s3),
            (2.0, 0.0),
        ]
        .iter()
        .map(|&(x, y)| Point2::new(x, y))
        .collect();
        let bounds = HalfSpace::boxed(&Point2::new(-5.0, -5.0), &Point2::new(5.0, 5.0));
        let cell = build_cell(&Point2::zeros(), &sites, &bounds, &tol()).unwrap();
        assert_eq!(cell.facets.len(), 6);
        assert!((cell.measure() - s3).abs() < 1e-12);
        assert!(cell.marginal.is_empty());
    }

    #[test]
    fn box_truncation_is_reported() {
        let sites = vec![Point3::new(1.0, 0.0, 0.0)];
        let bounds = HalfSpace::boxed(&Point3::new(-1.0, -1.0, -1.0), &Point3::new(1.0, 1.0, 1.0));
        let cell = build_cell(&Point3::zeros(), &sites, &bounds, &tol()).unwrap();
        assert_eq!(cell.facets.len(), 1);
        assert!(cell.truncated());
        assert!(!cell.with_certified_radius(100.0).is_certified());
    }

    #[test]
    fn facet_test_classifies() {
        let p = Point2::zeros();
        let bounds = HalfSpace::boxed(&Point2::new(-5.0, -5.0), &Point2::new(5.0, 5.0));
        let others = vec![Point2::new(1.0, 0.0)];
        let far = facet_test(&p, &Point2::new(3.0, 0.0), &others, &bounds, &tol()).unwrap();
        assert_eq!(far.status, FacetStatus::Redundant);
        let near = facet_test(&p, &Point2::new(0.0, 1.0), &others, &bounds, &tol()).unwrap();
        assert_eq!(near.status, FacetStatus::Facet);
        let touching = facet_test(
            &p,
            &Point2::new(2.0, 0.0),
            &[Point2::new(1.0, 1.0), Point2::new(1.0, -1.0)],
            &bounds,
            &tol(),
        )
        .unwrap();
        assert_eq!(touching.status, FacetStatus::Marginal);
    }

    #[test]
    fn unbounded_without_box() {
        let r = facet_test(&Point2::zeros(), &Point2::new(1.0, 0.0), &[], &[], &tol());
        assert!(matches!(r, Err(GeometryError::Unbounded)));
    }

    #[test]
    fn center_outside_box_rejected() {
        let bounds = HalfSpace::boxed(&Point2::new(1.0, 1.0), &Point2::new(2.0, 2.0));
        let r = build_cell(&Point2::zeros(), &[Point2::new(1.0, 0.0)], &bounds, &tol());
        assert!(matches!(r, Err(GeometryError::EmptyInterior)));
    }
}
