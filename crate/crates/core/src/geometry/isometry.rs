use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use super::GeometryError;

pub type Point<const D: usize> = SVector<f64, D>;
pub type Point2 = Point<2>;
pub type Point3 = Point<3>;

/// Affine isometry `x -> linear * x + translation` of Euclidean `D`-space.
///
/// The dimension is a type parameter, so composing maps of different
/// dimension does not type-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry<const D: usize> {
    pub linear: SMatrix<f64, D, D>,
    pub translation: SVector<f64, D>,
}

pub type Isometry2 = Isometry<2>;
pub type Isometry3 = Isometry<3>;

impl<const D: usize> Isometry<D> {
    /// Builds an isometry, checking that `linear` is orthogonal to within `tol_orth`.
    pub fn new(
        linear: SMatrix<f64, D, D>,
        translation: SVector<f64, D>,
        tol_orth: f64,
    ) -> Result<Self, GeometryError> {
        let defect = (linear.transpose() * linear - SMatrix::<f64, D, D>::identity()).amax();
        if !defect.is_finite() || defect > tol_orth {
            return Err(GeometryError::NotOrthogonal { defect });
        }
        if translation.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self {
            linear,
            translation,
        })
    }

    pub fn identity() -> Self {
        Self {
            linear: SMatrix::identity(),
            translation: SVector::zeros(),
        }
    }

    pub fn translation(v: SVector<f64, D>) -> Self {
        Self {
            linear: SMatrix::identity(),
            translation: v,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            linear: self.linear * other.linear,
            translation: self.linear * other.translation + self.translation,
        }
    }

    pub fn apply(&self, p: &Point<D>) -> Point<D> {
        self.linear * p + self.translation
    }

    /// Applies only the linear part, as for direction vectors.
    pub fn apply_vector(&self, v: &SVector<f64, D>) -> SVector<f64, D> {
        self.linear * v
    }

    pub fn invert(&self) -> Self {
        let lt = self.linear.transpose();
        Self {
            linear: lt,
            translation: -(lt * self.translation),
        }
    }

    pub fn det(&self) -> f64 {
        super::linalg::determinant(&self.linear)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.linear_is_identity(tol) && self.translation.amax() <= tol
    }

    pub fn linear_is_identity(&self, tol: f64) -> bool {
        (self.linear - SMatrix::<f64, D, D>::identity()).amax() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol_linear: f64, tol_translation: f64) -> bool {
        (self.linear - other.linear).amax() <= tol_linear
            && (self.translation - other.translation).amax() <= tol_translation
    }
}

impl Isometry<3> {
    /// Rotation by `angle` about the z-axis followed by a shift `rise` along it.
    pub fn screw_z(angle: f64, rise: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            linear: SMatrix::<f64, 3, 3>::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
            translation: SVector::<f64, 3>::new(0.0, 0.0, rise),
        }
    }

    /// True when the map sends every horizontal plane to a horizontal plane.
    pub fn preserves_horizontal(&self, tol: f64) -> bool {
        let l = &self.linear;
        l[(0, 2)].abs() <= tol
            && l[(1, 2)].abs() <= tol
            && l[(2, 0)].abs() <= tol
            && l[(2, 1)].abs() <= tol
    }
}

impl Isometry<2> {
    /// Rotation by `angle` about `center`.
    pub fn rotation(angle: f64, center: Point2) -> Self {
        let (s, c) = angle.sin_cos();
        let linear = SMatrix::<f64, 2, 2>::new(c, -s, s, c);
        Self {
            linear,
            translation: center - linear * center,
        }
    }

    /// Reflection in the line through `point` with direction `dir`.
    pub fn reflection(point: Point2, dir: SVector<f64, 2>) -> Self {
        let u = dir.normalize();
        let linear = SMatrix::<f64, 2, 2>::new(
            2.0 * u.x * u.x - 1.0,
            2.0 * u.x * u.y,
            2.0 * u.x * u.y,
            2.0 * u.y * u.y - 1.0,
        );
        Self {
            linear,
            translation: point - linear * point,
        }
    }

    /// Glide reflection: reflection in the line through `point` along `dir`,
    /// followed by a shift of `shift` along `dir`.
    pub fn glide(point: Point2, dir: SVector<f64, 2>, shift: f64) -> Self {
        let r = Self::reflection(point, dir);
        Self::translation(dir.normalize() * shift).compose(&r)
    }

    /// Fixed point of a rotation (linear part not the identity, determinant +1).
    pub fn rotation_center(&self, tol: f64) -> Option<Point2> {
        if self.det() < 0.0 || self.linear_is_identity(tol) {
            return None;
        }
        let a = SMatrix::<f64, 2, 2>::identity() - self.linear;
        super::linalg::solve(a, self.translation, 1e-12).map(|(x, _)| x)
    }
}
