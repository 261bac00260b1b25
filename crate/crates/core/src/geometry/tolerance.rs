use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Tolerances used by the geometric kernels, all scaled to the problem's length unit.
///
/// `tol_dedupe` merges coincident orbit points, `tol_slack` decides whether a
/// bisector supports a facet, `tol_vertex` merges reconstructed vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub tol_orth: f64,
    pub tol_dedupe: f64,
    pub tol_slack: f64,
    pub tol_vertex: f64,
    pub scale: f64,
}

impl TolerancePolicy {
    /// Default policy for a problem whose smallest translation has length `scale`.
    pub fn for_scale(scale: f64) -> Result<Self, GeometryError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(GeometryError::InvalidTolerance(format!(
                "scale must be positive and finite, got {scale}"
            )));
        }
        Self::new(1e-12, 1e-9 * scale, 1e-7 * scale, 1e-6 * scale, scale)
    }

    pub fn new(
        tol_orth: f64,
        tol_dedupe: f64,
        tol_slack: f64,
        tol_vertex: f64,
        scale: f64,
    ) -> Result<Self, GeometryError> {
        let all = [tol_orth, tol_dedupe, tol_slack, tol_vertex, scale];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(GeometryError::InvalidTolerance(
                "all tolerances must be positive and finite".into(),
            ));
        }
        if tol_dedupe >= tol_slack {
            return Err(GeometryError::InvalidTolerance(format!(
                "tol_dedupe ({tol_dedupe}) must be smaller than tol_slack ({tol_slack})"
            )));
        }
        Ok(Self {
            tol_orth,
            tol_dedupe,
            tol_slack,
            tol_vertex,
            scale,
        })
    }

    /// Relative threshold for pivots and determinants.
    pub fn tol_pivot(&self) -> f64 {
        1e-11
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_scale_linearly() {
        let t = TolerancePolicy::for_scale(100.0).unwrap();
        assert!((t.tol_slack - 1e-5).abs() < 1e-18);
        assert!((t.tol_dedupe - 1e-7).abs() < 1e-20);
        assert!((t.tol_vertex - 1e-4).abs() < 1e-17);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(TolerancePolicy::for_scale(0.0).is_err());
        assert!(TolerancePolicy::for_scale(f64::NAN).is_err());
        assert!(TolerancePolicy::new(1e-12, 1e-6, 1e-7, 1e-6, 1.0).is_err());
    }
}
