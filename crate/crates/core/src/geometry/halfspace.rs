use nalgebra::SVector;
use serde::{Deserialize, Serialize};

use super::{GeometryError, Isometry, Point};

/// Closed half-space `{x : normal · x <= offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace<const D: usize> {
    pub normal: SVector<f64, D>,
    pub offset: f64,
}

impl<const D: usize> HalfSpace<D> {
    pub fn new(normal: SVector<f64, D>, offset: f64) -> Result<Self, GeometryError> {
        let n = normal.norm();
        if !(n.is_finite() && n > 0.0 && offset.is_finite()) {
            return Err(GeometryError::DegenerateHalfSpace);
        }
        Ok(Self { normal, offset })
    }

    /// Points at least as close to `p` as to `q`.
    pub fn bisector(p: &Point<D>, q: &Point<D>, tol_dedupe: f64) -> Result<Self, GeometryError> {
        let d = q - p;
        if d.norm() <= tol_dedupe {
            return Err(GeometryError::CoincidentPoints);
        }
        let mid = (p + q) * 0.5;
        Ok(Self {
            normal: d,
            offset: d.dot(&mid),
        })
    }

    /// Same half-space with a unit normal.
    pub fn normalized(&self) -> Self {
        let n = self.normal.norm();
        Self {
            normal: self.normal / n,
            offset: self.offset / n,
        }
    }

    /// Signed Euclidean distance, negative inside.
    pub fn signed_distance(&self, x: &Point<D>) -> f64 {
        (self.normal.dot(x) - self.offset) / self.normal.norm()
    }

    pub fn contains(&self, x: &Point<D>, tol: f64) -> bool {
        self.signed_distance(x) <= tol
    }

    /// Image of the half-space under `m`.
    pub fn transformed(&self, m: &Isometry<D>) -> Self {
        let normal = m.apply_vector(&self.normal);
        Self {
            normal,
            offset: self.offset + normal.dot(&m.translation),
        }
    }

    /// Axis-aligned box `lo <= x <= hi` as 2D half-spaces.
    pub fn boxed(lo: &Point<D>, hi: &Point<D>) -> Vec<Self> {
        let mut out = Vec::with_capacity(2 * D);
        for i in 0..D {
            let mut e = SVector::<f64, D>::zeros();
            e[i] = 1.0;
            out.push(Self {
                normal: e,
                offset: hi[i],
            });
            out.push(Self {
                normal: -e,
                offset: -lo[i],
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Isometry3, Point3};

    #[test]
    fn bisector_contains_near_point() {
        let p = Point3::new(0.0, 0.0, 0.0);
        let q = Point3::new(2.0, 0.0, 0.0);
        let h = HalfSpace::bisector(&p, &q, 1e-9).unwrap();
        assert!(h.contains(&p, 0.0));
        assert!(!h.contains(&q, 0.0));
        assert!(h.signed_distance(&Point3::new(1.0, 5.0, -3.0)).abs() < 1e-15);
    }

    #[test]
    fn coincident_points_rejected() {
        let p = Point3::new(1.0, 2.0, 3.0);
        assert!(matches!(
            HalfSpace::bisector(&p, &p, 1e-9),
            Err(GeometryError::CoincidentPoints)
        ));
    }

    #[test]
    fn transform_matches_point_images() {
        let p = Point3::new(0.2, 0.1, -0.4);
        let q = Point3::new(1.0, -1.5, 0.3);
        let m = Isometry3::screw_z(0.7, 2.0);
        let h = HalfSpace::bisector(&p, &q, 1e-9).unwrap().transformed(&m);
        let h2 = HalfSpace::bisector(&m.apply(&p), &m.apply(&q), 1e-9).unwrap();
        let x = Point3::new(3.0, 1.0, 2.0);
        assert!((h.signed_distance(&x) - h2.signed_distance(&x)).abs() < 1e-12);
    }
}
