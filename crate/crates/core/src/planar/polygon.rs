//! Convex polygon helpers: clipping, intersection and set difference.

use crate::geometry::{polygon_area, Point2};

/// Closed half-plane `normal · x <= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal: Point2,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Point2, offset: f64) -> Self {
        Self { normal, offset }
    }

    /// Points at least as close to `p` as to `q`.
    pub fn closer_to(p: &Point2, q: &Point2) -> Self {
        Self::new(2.0 * (q - p), q.norm_squared() - p.norm_squared())
    }

    pub fn value(&self, x: &Point2) -> f64 {
        self.normal.dot(x) - self.offset
    }

    pub fn complement(&self) -> Self {
        Self::new(-self.normal, -self.offset)
    }
}

/// Sutherland-Hodgman clip of a convex polygon by one half-plane.
pub fn clip(poly: &[Point2], h: &HalfPlane) -> Vec<Point2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (fa, fb) = (h.value(&a), h.value(&b));
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            out.push(a + (b - a) * (fa / (fa - fb)));
        }
    }
    dedup(out)
}

/// Drops consecutive vertices closer than a relative epsilon.
fn dedup(poly: Vec<Point2>) -> Vec<Point2> {
    let close = |a: &Point2, b: &Point2| (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()));
    let mut out: Vec<Point2> = Vec::with_capacity(poly.len());
    for p in poly {
        if out.last().is_none_or(|q| !close(q, &p)) {
            out.push(p);
        }
    }
    while out.len() > 1 && close(&out[0], out.last().unwrap()) {
        out.pop();
    }
    out
}

pub fn clip_all(poly: &[Point2], hs: &[HalfPlane]) -> Vec<Point2> {
    hs.iter().fold(poly.to_vec(), |acc, h| {
        if acc.is_empty() {
            acc
        } else {
            clip(&acc, h)
        }
    })
}

/// Edge half-planes of a counter-clockwise convex polygon.
pub fn edges(poly: &[Point2]) -> Vec<HalfPlane> {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let normal = Point2::new(b.y - a.y, a.x - b.x);
            HalfPlane::new(normal, normal.dot(&a))
        })
        .collect()
}

pub fn intersect(a: &[Point2], b: &[Point2]) -> Vec<Point2> {
    clip_all(a, &edges(b))
}

pub fn area(poly: &[Point2]) -> f64 {
    polygon_area(poly).abs()
}

pub fn centroid(poly: &[Point2]) -> Point2 {
    poly.iter().sum::<Point2>() / poly.len() as f64
}

/// Counter-clockwise orientation.
pub fn ccw(mut poly: Vec<Point2>) -> Vec<Point2> {
    if polygon_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

/// `piece \ ∩ hs` as disjoint convex pieces of area above `min_area`.
pub fn subtract(piece: &[Point2], hs: &[HalfPlane], min_area: f64) -> Vec<Vec<Point2>> {
    let mut out = Vec::new();
    let mut rest = piece.to_vec();
    for h in hs {
        let outside = clip(&rest, &h.complement());
        if area(&outside) > min_area {
            out.push(outside);
        }
        rest = clip(&rest, h);
        if area(&rest) <= min_area {
            return out;
        }
    }
    out
}

/// Distance from `x` to the boundary of a counter-clockwise convex polygon;
/// negative outside.
pub fn inner_distance(poly: &[Point2], x: &Point2) -> f64 {
    edges(poly)
        .iter()
        .filter(|h| h.normal.norm() > 1e-14)
        .map(|h| -h.value(x) / h.normal.norm())
        .fold(f64::INFINITY, f64::min)
}

pub fn bounding_radius(poly: &[Point2], center: &Point2) -> f64 {
    poly.iter().map(|v| (v - center).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(lo: f64, hi: f64) -> Vec<Point2> {
        vec![
            Point2::new(lo, lo),
            Point2::new(hi, lo),
            Point2::new(hi, hi),
            Point2::new(lo, hi),
        ]
    }

    #[test]
    fn intersection_of_squares() {
        let p = intersect(&square(0.0, 2.0), &square(1.0, 3.0));
        assert!((area(&p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn difference_areas_add_up() {
        let outer = square(0.0, 4.0);
        let inner = edges(&square(1.0, 2.0));
        let pieces = subtract(&outer, &inner, 1e-12);
        let total: f64 = pieces.iter().map(|p| area(p)).sum();
        assert!((total - 15.0).abs() < 1e-12);
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                assert!(area(&intersect(a, b)) < 1e-12);
            }
        }
    }

    #[test]
    fn inner_distance_sign() {
        let s = square(0.0, 1.0);
        assert!((inner_distance(&s, &Point2::new(0.5, 0.25)) - 0.25).abs() < 1e-12);
        assert!(inner_distance(&s, &Point2::new(1.5, 0.5)) < 0.0);
    }
}
