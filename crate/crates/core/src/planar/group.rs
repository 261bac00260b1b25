use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use super::polygon::{self, ccw};
use super::PlanarError;
use crate::geometry::{Isometry2, Point2, TolerancePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanarType {
    P1,
    P1Square,
    P1Triangular,
    P2,
    P2Rect,
    P3,
    Pg,
    Pgg,
    PggSquare,
}

impl PlanarType {
    pub const ALL: [PlanarType; 9] = [
        PlanarType::P1,
        PlanarType::P1Square,
        PlanarType::P1Triangular,
        PlanarType::P2,
        PlanarType::P2Rect,
        PlanarType::P3,
        PlanarType::Pg,
        PlanarType::Pgg,
        PlanarType::PggSquare,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PlanarType::P1 => "p1",
            PlanarType::P1Square => "p1-square",
            PlanarType::P1Triangular => "p1-triangular",
            PlanarType::P2 => "p2",
            PlanarType::P2Rect => "p2-rect",
            PlanarType::P3 => "p3",
            PlanarType::Pg => "pg",
            PlanarType::Pgg => "pgg",
            PlanarType::PggSquare => "pgg-square",
        }
    }

    /// Family name without the lattice shape.
    pub fn family(&self) -> &'static str {
        match self {
            PlanarType::P1 | PlanarType::P1Square | PlanarType::P1Triangular => "p1",
            PlanarType::P2 | PlanarType::P2Rect => "p2",
            PlanarType::P3 => "p3",
            PlanarType::Pg => "pg",
            PlanarType::Pgg | PlanarType::PggSquare => "pgg",
        }
    }

    /// Largest number of cells of one orbit that a cell of another orbit can overlap.
    pub fn overlap_cap(&self) -> usize {
        match self.family() {
            "p1" | "p3" => 4,
            "p2" | "pg" => 7,
            _ => 11,
        }
    }
}

impl fmt::Display for PlanarType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlanarType {
    type Err = PlanarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| PlanarError::UnsupportedType(s.to_string()))
    }
}

/// One class of `N0 / G0`, represented by an isometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizerCoset {
    pub label: String,
    pub rep: Isometry2,
}

/// A planar crystallographic group `G0`, an enlarged group `N0` normalizing it,
/// and a fundamental domain `D` of `N0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarGroupSpec {
    pub kind: PlanarType,
    pub lattice: [Vector2<f64>; 2],
    /// Representatives of `G0` modulo its lattice; the first is the identity.
    pub point_ops: Vec<Isometry2>,
    /// Representatives of `N0 / G0`; the first is the identity.
    pub cosets: Vec<NormalizerCoset>,
    /// Counter-clockwise vertices of `D`.
    pub subdomain: Vec<Point2>,
    pub tol: TolerancePolicy,
}

fn rot(angle: f64) -> Isometry2 {
    Isometry2::rotation(angle, Point2::zeros())
}

fn affine(m: [[f64; 2]; 2], t: [f64; 2]) -> Isometry2 {
    Isometry2 {
        linear: Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]),
        translation: Vector2::new(t[0], t[1]),
    }
}

fn shift(x: f64, y: f64) -> Isometry2 {
    Isometry2::translation(Vector2::new(x, y))
}

fn coset(label: &str, rep: Isometry2) -> NormalizerCoset {
    NormalizerCoset {
        label: label.to_string(),
        rep,
    }
}

fn parallelogram(u: Vector2<f64>, v: Vector2<f64>) -> Vec<Point2> {
    vec![Point2::zeros(), u, u + v, v]
}

fn rect(w: f64, h: f64) -> Vec<Point2> {
    vec![
        Point2::zeros(),
        Point2::new(w, 0.0),
        Point2::new(w, h),
        Point2::new(0.0, h),
    ]
}

impl PlanarGroupSpec {
    /// Group of the given type with its default shape; `scale` is the length
    /// of the first lattice vector.
    pub fn new(kind: PlanarType) -> Self {
        Self::with_scale(kind, 1.0).expect("unit scale is valid")
    }

    pub fn with_scale(kind: PlanarType, scale: f64) -> Result<Self, PlanarError> {
        Self::with_shape(kind, scale, None)
    }

    /// Group with first lattice vector of length `scale` and, for the
    /// rectangular types, second lattice vector of length `ratio * scale`.
    pub fn with_shape(
        kind: PlanarType,
        scale: f64,
        ratio: Option<f64>,
    ) -> Result<Self, PlanarError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(PlanarError::InvalidParam(format!("scale {scale}")));
        }
        if let Some(r) = ratio {
            if !matches!(kind, PlanarType::P2Rect | PlanarType::Pg | PlanarType::Pgg) {
                return Err(PlanarError::InvalidParam(format!(
                    "{kind} has a fixed lattice shape"
                )));
            }
            if !(r.is_finite() && r > 0.0) {
                return Err(PlanarError::InvalidParam(format!("ratio {r}")));
            }
        }
        let s = scale;
        let id = Isometry2::identity();
        let half = rot(PI);
        let (u, v, ops, cosets, d): (
            Vector2<f64>,
            Vector2<f64>,
            Vec<Isometry2>,
            Vec<NormalizerCoset>,
            Vec<Point2>,
        ) = match kind {
            PlanarType::P1 => {
                let (u, v) = (Vector2::new(s, 0.0), Vector2::new(0.31 * s, 1.07 * s));
                (u, v, vec![id], vec![coset("A", id)], parallelogram(u, v))
            }
            PlanarType::P1Square => {
                let (u, v) = (Vector2::new(s, 0.0), Vector2::new(0.0, s));
                (u, v, vec![id], vec![coset("A", id)], parallelogram(u, v))
            }
            PlanarType::P1Triangular => {
                let (u, v) = (
                    Vector2::new(s, 0.0),
                    Vector2::new(0.5 * s, 0.75f64.sqrt() * s),
                );
                (u, v, vec![id], vec![coset("A", id)], parallelogram(u, v))
            }
            PlanarType::P2 => {
                let (u, v) = (Vector2::new(s, 0.0), Vector2::new(0.31 * s, 1.07 * s));
                (
                    u,
                    v,
                    vec![id, half],
                    vec![coset("A", id)],
                    parallelogram(u, v * 0.5),
                )
            }
            PlanarType::P2Rect => {
                let (a, b) = (s, ratio.unwrap_or(0.7) * s);
                let mirror = affine([[-1.0, 0.0], [0.0, 1.0]], [0.0, 0.0]);
                (
                    Vector2::new(a, 0.0),
                    Vector2::new(0.0, b),
                    vec![id, half],
                    vec![coset("W", id), coset("B", mirror)],
                    rect(a / 2.0, b / 2.0),
                )
            }
            PlanarType::P3 => {
                let (u, v) = (
                    Vector2::new(s, 0.0),
                    Vector2::new(0.5 * s, 0.75f64.sqrt() * s),
                );
                (
                    u,
                    v,
                    vec![id, rot(2.0 * PI / 3.0), rot(4.0 * PI / 3.0)],
                    vec![coset("W", id), coset("B", half)],
                    vec![Point2::zeros(), (u + v) / 3.0, (2.0 * v - u) / 3.0],
                )
            }
            PlanarType::Pg => {
                let (a, b) = (s, ratio.unwrap_or(0.8) * s);
                let glide = affine([[1.0, 0.0], [0.0, -1.0]], [a / 2.0, 0.0]);
                let mirror = affine([[-1.0, 0.0], [0.0, 1.0]], [0.0, 0.0]);
                let c = shift(a / 2.0, 0.0);
                let up = shift(0.0, b / 2.0);
                let cosets = vec![
                    coset("A", id),
                    coset("B", mirror),
                    coset("C", c),
                    coset("D", c.compose(&mirror)),
                    coset("E", up.compose(&c)),
                    coset("F", up.compose(&c).compose(&mirror)),
                    coset("G", up),
                    coset("H", up.compose(&mirror)),
                ];
                (
                    Vector2::new(a, 0.0),
                    Vector2::new(0.0, b),
                    vec![id, glide],
                    cosets,
                    rect(a / 4.0, b / 4.0),
                )
            }
            PlanarType::Pgg | PlanarType::PggSquare => {
                let (a, b) = if kind == PlanarType::Pgg {
                    (s, ratio.unwrap_or(0.8) * s)
                } else {
                    (s, s)
                };
                let ops = vec![
                    id,
                    half,
                    affine([[1.0, 0.0], [0.0, -1.0]], [a / 2.0, b / 2.0]),
                    affine([[-1.0, 0.0], [0.0, 1.0]], [a / 2.0, b / 2.0]),
                ];
                let t = [
                    shift(0.0, 0.0),
                    shift(a / 2.0, 0.0),
                    shift(0.0, b / 2.0),
                    shift(a / 2.0, b / 2.0),
                ];
                let (cosets, d) = if kind == PlanarType::Pgg {
                    let c = ["A", "B", "C", "D"]
                        .iter()
                        .zip(t)
                        .map(|(l, r)| coset(l, r))
                        .collect();
                    (c, rect(a / 4.0, b / 4.0))
                } else {
                    let quarter = rot(PI / 2.0);
                    let order = [0, 2, 3, 1];
                    let mut c: Vec<NormalizerCoset> = ["A", "B", "C", "D"]
                        .iter()
                        .zip(order)
                        .map(|(l, k)| coset(l, t[k]))
                        .collect();
                    for (l, k) in ["A'", "B'", "C'", "D'"].iter().zip(order) {
                        c.push(coset(l, quarter.compose(&t[k])));
                    }
                    (
                        c,
                        vec![
                            Point2::zeros(),
                            Point2::new(a / 4.0, 0.0),
                            Point2::new(a / 4.0, a / 4.0),
                        ],
                    )
                };
                (Vector2::new(a, 0.0), Vector2::new(0.0, b), ops, cosets, d)
            }
        };
        Ok(Self {
            kind,
            lattice: [u, v],
            point_ops: ops,
            cosets,
            subdomain: ccw(d),
            tol: TolerancePolicy::for_scale(s)?,
        })
    }

    pub fn parse(name: &str) -> Result<Self, PlanarError> {
        Ok(Self::new(name.parse()?))
    }

    pub fn has_normalizer(&self) -> bool {
        self.cosets.len() > 1
    }

    pub fn lattice_matrix(&self) -> Matrix2<f64> {
        Matrix2::from_columns(&self.lattice)
    }

    /// Lattice coordinates of `x`.
    pub fn lattice_coords(&self, x: &Point2) -> Vector2<f64> {
        self.lattice_matrix()
            .try_inverse()
            .expect("lattice is non-degenerate")
            * x
    }

    /// Shortest distance between parallel lattice lines.
    pub fn min_height(&self) -> f64 {
        let [u, v] = self.lattice;
        let area = (u.x * v.y - u.y * v.x).abs();
        (area / u.norm()).min(area / v.norm())
    }

    pub fn max_lattice_length(&self) -> f64 {
        self.lattice[0].norm().max(self.lattice[1].norm())
    }

    pub fn cell_area(&self) -> f64 {
        let [u, v] = self.lattice;
        (u.x * v.y - u.y * v.x).abs()
    }

    pub fn subdomain_centroid(&self) -> Point2 {
        polygon::centroid(&self.subdomain)
    }

    /// Lattice translations whose images of `center` fall within `radius` of `target`.
    fn translations_near(
        &self,
        center: &Point2,
        target: &Point2,
        radius: f64,
    ) -> Vec<Vector2<f64>> {
        let c = self.lattice_coords(&(target - center));
        let reach = (radius / self.min_height()).ceil() as i64 + 1;
        let (ci, cj) = (c.x.round() as i64, c.y.round() as i64);
        let mut out = Vec::new();
        for i in ci - reach..=ci + reach {
            for j in cj - reach..=cj + reach {
                let t = self.lattice[0] * i as f64 + self.lattice[1] * j as f64;
                if (center + t - target).norm() <= radius {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Elements `g` of `G0` with `g(anchor)` within `radius` of `target`.
    pub fn elements_near(&self, anchor: &Point2, target: &Point2, radius: f64) -> Vec<Isometry2> {
        let mut out = Vec::new();
        for op in &self.point_ops {
            let img = op.apply(anchor);
            for t in self.translations_near(&img, target, radius) {
                out.push(Isometry2::translation(t).compose(op));
            }
        }
        out
    }

    /// Elements `n` of `N0` with `n(anchor)` within `radius` of `target`,
    /// paired with their coset index.
    pub fn normalizer_elements_near(
        &self,
        anchor: &Point2,
        target: &Point2,
        radius: f64,
    ) -> Vec<(usize, Isometry2)> {
        let mut out = Vec::new();
        for (k, c) in self.cosets.iter().enumerate() {
            let a = c.rep.apply(anchor);
            for g in self.elements_near(&a, target, radius) {
                out.push((k, g.compose(&c.rep)));
            }
        }
        out
    }

    /// `G0` element fixing `p` other than the identity, if any.
    pub fn stabilizer(&self, p: &Point2) -> Option<Isometry2> {
        self.elements_near(p, p, self.tol.tol_slack)
            .into_iter()
            .find(|g| !g.is_identity(self.tol.tol_slack))
    }

    /// Coset index of an element of `N0`.
    pub fn coset_of(&self, n: &Isometry2) -> Option<usize> {
        let probe = self.subdomain_centroid();
        let target = n.apply(&probe);
        self.normalizer_elements_near(&probe, &target, self.tol.tol_vertex)
            .into_iter()
            .find(|(_, m)| m.approx_eq(n, 1e-9, self.tol.tol_vertex))
            .map(|(k, _)| k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdomains_tile_by_area() {
        for kind in PlanarType::ALL {
            let g = PlanarGroupSpec::new(kind);
            let per_cell = g.point_ops.len() * g.cosets.len();
            let want = g.cell_area() / per_cell as f64;
            assert!((polygon::area(&g.subdomain) - want).abs() < 1e-12, "{kind}");
        }
    }

    #[test]
    fn normalizer_preserves_group() {
        for kind in PlanarType::ALL {
            let g = PlanarGroupSpec::new(kind);
            let probe = Point2::new(0.123, 0.0456);
            for c in &g.cosets {
                for op in &g.point_ops {
                    let conj = c.rep.compose(op).compose(&c.rep.invert());
                    let img = conj.apply(&probe);
                    let found = g
                        .elements_near(&probe, &img, 1e-9)
                        .iter()
                        .any(|h| h.approx_eq(&conj, 1e-9, 1e-9));
                    assert!(found, "{kind} coset {}", c.label);
                }
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "pgg-square".parse::<PlanarType>().unwrap(),
            PlanarType::PggSquare
        );
        assert!(matches!(
            "p6".parse::<PlanarType>(),
            Err(PlanarError::UnsupportedType(_))
        ));
    }
}
