use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::signature::signature_of;
use super::{HeightSignature, StereoError};
use crate::geometry::{
    build_cell, polyhedron_vertices, CellPolytope, HalfSpace, Point3, TolerancePolicy,
};
use crate::groups3d::{GroupSpec, OrbitPoint};

/// What to do with orbit points whose bisector touches the cell in a set of
/// measure zero (a vertex or an edge) without supporting a facet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginalPolicy {
    /// Refuse to answer; the base point is degenerate.
    #[default]
    Reject,
    /// Count touching points as neighbors.
    CountContacts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerateOptions {
    pub tolerance: Option<TolerancePolicy>,
    pub max_doublings: u32,
    pub marginal: MarginalPolicy,
    /// Starting candidate radius; defaults to twice the shortest horizontal translation.
    pub initial_radius: Option<f64>,
    /// Half-width of the horizontal bounding square for helix groups.
    pub helix_box: Option<f64>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            tolerance: None,
            max_doublings: 8,
            marginal: MarginalPolicy::Reject,
            initial_radius: None,
            helix_box: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub point: OrbitPoint,
    pub halfspace: HalfSpace<3>,
    pub slack: f64,
    /// True for a touching point counted under [`MarginalPolicy::CountContacts`].
    pub contact: bool,
}

impl Neighbor {
    pub fn dz(&self, base: &Point3) -> f64 {
        self.point.coords.z - base.z
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub rounds: u32,
    pub candidates: usize,
    pub lp_solves: usize,
}

/// Neighbors of the base point and its Voronoi cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborReport {
    pub group: String,
    pub params: BTreeMap<String, f64>,
    pub base: Point3,
    pub marginal_policy: MarginalPolicy,
    pub neighbors: Vec<Neighbor>,
    pub facet_count: usize,
    pub contact_count: usize,
    pub certified: bool,
    /// Candidate radius of the final round. For helix groups, whose whole
    /// orbit within the band is examined, the half-width of the bounding square.
    pub certified_radius: f64,
    pub circumradius: f64,
    pub min_slack: f64,
    pub signature: HeightSignature,
    /// The cell; facet `site` fields index into `neighbors`.
    pub cell: CellPolytope<3>,
    pub stats: RunStats,
}

/// Orbit points other than `base` within horizontal distance `radius` and
/// inside the band.
pub fn candidate_set(
    g: &GroupSpec,
    base: &Point3,
    radius: f64,
) -> Result<Vec<OrbitPoint>, StereoError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(StereoError::InvalidRadius(radius));
    }
    let band = g.band_of(base);
    let lo = Point3::new(base.x - radius, base.y - radius, base.z - band.half_width);
    let hi = Point3::new(base.x + radius, base.y + radius, base.z + band.half_width);
    let tol = g.tol.tol_dedupe;
    let out: Vec<OrbitPoint> = g
        .orbit_in_box(base, &lo, &hi)
        .into_iter()
        .filter(|p| !p.is_base())
        .filter(|p| {
            (p.coords.xy() - base.xy()).norm() <= radius + tol && band.contains(p.coords.z, tol)
        })
        .collect();
    if out.is_empty() {
        return Err(StereoError::EmptyCandidates { radius });
    }
    Ok(out)
}

/// Default horizontal half-width of the bounding square for helix groups,
/// sized from the farthest tangent-sphere centre of a helix through the base.
pub fn default_helix_box(g: &GroupSpec, base: &Point3) -> f64 {
    let h = g.vertical.norm();
    let a = g.aspects as f64;
    let r = base.xy().norm().max(g.tol.tol_slack);
    3.0 * (a * h * h / (4.0 * PI * PI * r) + r + h)
}

/// Half-width of a bounding square that strictly contains every vertex of the
/// unbounded cell of a helix-group orbit point. The cell is pointed, so each
/// of its facets has a vertex inside such a square.
fn vertex_helix_box(
    g: &GroupSpec,
    base: &Point3,
    tol: &TolerancePolicy,
) -> Result<f64, StereoError> {
    let default = default_helix_box(g, base);
    let candidates = candidate_set(g, base, 4.0 * (default + base.xy().norm()))?;
    let bisectors: Vec<HalfSpace<3>> = candidates
        .iter()
        .map(|c| HalfSpace::bisector(base, &c.coords, tol.tol_dedupe))
        .collect::<Result<_, _>>()?;
    let reach = polyhedron_vertices(&bisectors, tol)
        .iter()
        .map(|v| (v.xy() - base.xy()).abs().max())
        .fold(0.0, f64::max);
    Ok(default.max(2.0 * reach + tol.scale))
}

/// Enumerates the Voronoi neighbors of `base` in its orbit under `g`.
///
/// For groups with horizontal translations the candidate radius is doubled
/// until it is at least twice the cell's circumradius and the neighbor set
/// did not change in the last doubling. Helix groups have unbounded cells:
/// the whole orbit inside the band is used and the bounding square is
/// doubled until the neighbor set is stable.
pub fn enumerate_neighbors(
    g: &GroupSpec,
    base: &Point3,
    opts: &EnumerateOptions,
) -> Result<NeighborReport, StereoError> {
    g.stabilizer_check(base)?;
    let tol = opts.tolerance.unwrap_or(g.tol);
    let band = g.band_of(base);
    let mut lp_solves = 0;
    let mut previous: Option<Vec<(usize, Vec<i64>)>> = None;

    let (mut radius, helix) = match (g.horizontal_min, opts.helix_box) {
        (Some(t), _) => (opts.initial_radius.unwrap_or(2.0 * t), false),
        (None, Some(b)) => (b, true),
        (None, None) => (vertex_helix_box(g, base, &tol)?, true),
    };
    if !(radius.is_finite() && radius > 0.0) {
        return Err(StereoError::InvalidRadius(radius));
    }
    for round in 0..=opts.max_doublings {
        let candidates = if helix {
            let reach = radius + base.xy().norm();
            candidate_set(g, base, reach * 4.0)?
        } else {
            candidate_set(g, base, radius)?
        };
        let sites: Vec<Point3> = candidates.iter().map(|c| c.coords).collect();
        let lo = Point3::new(base.x - radius, base.y - radius, base.z - band.half_width);
        let hi = Point3::new(base.x + radius, base.y + radius, base.z + band.half_width);
        let cell = build_cell(base, &sites, &HalfSpace::boxed(&lo, &hi), &tol)?
            .with_certified_radius(radius);
        lp_solves += sites.len();
        log::debug!(
            "round {round}: radius {radius}, {} candidates, {} facets, {} marginal, circumradius {}",
            sites.len(),
            cell.facets.len(),
            cell.marginal.len(),
            cell.circumradius
        );
        if !cell.marginal.is_empty() && opts.marginal == MarginalPolicy::Reject {
            return Err(StereoError::Degenerate {
                marginal: cell.marginal.len(),
                facets: cell.facets.len(),
            });
        }
        let mut chosen: Vec<(usize, bool)> = cell.facets.iter().map(|f| (f.site, false)).collect();
        chosen.extend(cell.marginal.iter().map(|&i| (i, true)));
        chosen.sort_unstable();
        let keys: Vec<(usize, Vec<i64>)> = chosen
            .iter()
            .map(|&(i, _)| (candidates[i].coset, candidates[i].lattice.clone()))
            .collect();
        let done = if helix {
            previous.as_ref() == Some(&keys)
        } else {
            !cell.truncated()
                && radius >= 2.0 * cell.circumradius
                && previous.as_ref() == Some(&keys)
        };
        if done {
            return Ok(assemble(
                g,
                base,
                opts.marginal,
                &candidates,
                &chosen,
                cell,
                round,
                lp_solves,
                &tol,
            ));
        }
        previous = Some(keys);
        radius *= 2.0;
    }
    Err(StereoError::NotCertified {
        rounds: opts.max_doublings + 1,
        radius: radius / 2.0,
    })
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    g: &GroupSpec,
    base: &Point3,
    policy: MarginalPolicy,
    candidates: &[OrbitPoint],
    chosen: &[(usize, bool)],
    mut cell: CellPolytope<3>,
    round: u32,
    lp_solves: usize,
    tol: &TolerancePolicy,
) -> NeighborReport {
    let slack_of: BTreeMap<usize, f64> = cell.facets.iter().map(|f| (f.site, f.slack)).collect();
    let mut index = BTreeMap::new();
    let neighbors: Vec<Neighbor> = chosen
        .iter()
        .enumerate()
        .map(|(k, &(i, contact))| {
            index.insert(i, k);
            let q = candidates[i].coords;
            Neighbor {
                point: candidates[i].clone(),
                halfspace: HalfSpace::bisector(base, &q, tol.tol_dedupe)
                    .expect("distinct sites")
                    .normalized(),
                slack: slack_of.get(&i).copied().unwrap_or(0.0),
                contact,
            }
        })
        .collect();
    for f in &mut cell.facets {
        f.site = index[&f.site];
    }
    cell.marginal = cell.marginal.iter().map(|i| index[i]).collect();
    let contact_count = neighbors.iter().filter(|n| n.contact).count();
    let min_slack = cell
        .facets
        .iter()
        .map(|f| f.slack)
        .fold(f64::INFINITY, f64::min);
    let signature = signature_of(base, &neighbors, 1e-7 * cell.circumradius.max(1.0));
    NeighborReport {
        group: g.name.clone(),
        params: g.params.clone(),
        base: *base,
        marginal_policy: policy,
        facet_count: neighbors.len(),
        contact_count,
        neighbors,
        certified: true,
        certified_radius: cell.certified_radius,
        circumradius: cell.circumradius,
        min_slack,
        signature,
        cell,
        stats: RunStats {
            rounds: round + 1,
            candidates: candidates.len(),
            lp_solves,
        },
    }
}
