//! Orbits of a single screw rotation: helix points, the tangent-sphere
//! certificate and the 2k-neighbor check.
//!
//! Certificate math runs in normalized coordinates where one full helix turn
//! rises `2π` (the helix is `P_t = (r cos t, r sin t, t)`); results are mapped
//! back to real coordinates by a similarity.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::Point3;
use crate::groups3d::{GroupError, GroupSpec};
use crate::stereohedron::{enumerate_neighbors, EnumerateOptions, StereoError};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ScrewError {
    #[error("rotation order must be an integer >= 2, got {0}")]
    InvalidOrder(i64),
    #[error("{0} must be positive and finite")]
    InvalidParam(&'static str),
    #[error("t0 must lie in the open interval (0, pi), got {0}")]
    T0OutOfRange(f64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Stereo(#[from] StereoError),
}

/// Screw rotation of order `k` (angle `2π/k`) rising `pitch` per step, and a
/// helix of radius `r` and phase `alpha` through the orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixSpec {
    pub k: u32,
    pub pitch: f64,
    pub r: f64,
    pub alpha: f64,
}

impl HelixSpec {
    pub fn new(k: i64, pitch: f64, r: f64, alpha: f64) -> Result<Self, ScrewError> {
        if k < 2 {
            return Err(ScrewError::InvalidOrder(k));
        }
        if !(pitch.is_finite() && pitch > 0.0) {
            return Err(ScrewError::InvalidParam("pitch"));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(ScrewError::InvalidParam("r"));
        }
        if !alpha.is_finite() {
            return Err(ScrewError::InvalidParam("alpha"));
        }
        Ok(Self {
            k: k as u32,
            pitch,
            r,
            alpha,
        })
    }

    /// Factor mapping real lengths to normalized ones.
    pub fn scale(&self) -> f64 {
        2.0 * PI / (self.k as f64 * self.pitch)
    }

    pub fn group(&self) -> Result<GroupSpec, GroupError> {
        let params = BTreeMap::from([
            ("k".to_string(), self.k as f64),
            ("pitch".to_string(), self.pitch),
        ]);
        GroupSpec::make("screw", &params)
    }
}

/// Point of the helix at parameter `t`; `t = 2π` is one full turn, `k·pitch` higher.
pub fn helix_point(h: &HelixSpec, t: f64) -> Point3 {
    let (s, c) = (t - h.alpha).sin_cos();
    Point3::new(h.r * c, h.r * s, h.k as f64 * h.pitch * t / (2.0 * PI))
}

/// x-coordinate `a` of the centre `(a, 0, 0)` of the sphere through `P_{±t0}`
/// tangent to the normalized helix of radius `r` there.
pub fn tangent_center(t0: f64, r: f64) -> Result<f64, ScrewError> {
    if !(t0 > 0.0 && t0 < PI) {
        return Err(ScrewError::T0OutOfRange(t0));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(ScrewError::InvalidParam("r"));
    }
    Ok(-t0 / (r * t0.sin()))
}

/// `f(t) = d(O, P_t)² − d(O, P_{t0})²` and its first two derivatives, for the
/// tangent-sphere centre `O`. The values do not depend on the helix radius.
pub fn f_eval(t: f64, t0: f64) -> Result<(f64, f64, f64), ScrewError> {
    if !(t0 > 0.0 && t0 < PI) {
        return Err(ScrewError::T0OutOfRange(t0));
    }
    let c = t0 / t0.sin();
    Ok((
        2.0 * c * (t.cos() - t0.cos()) + t * t - t0 * t0,
        2.0 * t - 2.0 * c * t.sin(),
        2.0 - 2.0 * c * t.cos(),
    ))
}

/// Certificate that `g^i P` is a neighbor: the tangent sphere through `P` and
/// `g^i P` has no other orbit point on or inside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentCertificate {
    pub index: u32,
    pub t0: f64,
    pub center: Point3,
    pub f: f64,
    pub df: f64,
    pub ddf: f64,
    /// Smallest `f` on a grid of `[-π, π]` away from `±t0`.
    pub grid_min: f64,
    /// Smallest gap `|O − g^j P| − |O − P|` over other orbit points.
    pub orbit_gap: f64,
}

impl TangentCertificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.f.abs() <= tol
            && self.df.abs() <= tol
            && self.ddf > 0.0
            && self.grid_min > 0.0
            && self.orbit_gap > 0.0
    }
}

pub const GRID_POINTS: usize = 1000;

pub fn tangent_certificate(h: &HelixSpec, i: u32) -> Result<TangentCertificate, ScrewError> {
    let k = h.k as f64;
    let t0 = PI * i as f64 / k;
    let s = h.scale();
    let a = tangent_center(t0, h.r * s)?;
    let (f, df, ddf) = f_eval(t0, t0)?;
    let mut grid_min = f64::INFINITY;
    for j in 0..GRID_POINTS {
        let t = -PI + 2.0 * PI * j as f64 / (GRID_POINTS - 1) as f64;
        if (t.abs() - t0).abs() < 1e-9 {
            continue;
        }
        grid_min = grid_min.min(f_eval(t, t0)?.0);
    }
    // Pair (P_0, P_{2 t0}) is the symmetric pair about parameter t0.
    let (sn, cs) = (t0 - h.alpha).sin_cos();
    let center = Point3::new(a * cs / s, a * sn / s, t0 / s);
    let base = helix_point(h, 0.0);
    let d0 = (center - base).norm();
    let step = 2.0 * PI / k;
    let mut orbit_gap = f64::INFINITY;
    for j in -(3 * h.k as i64)..=(3 * h.k as i64) {
        if j == 0 || j == i as i64 {
            continue;
        }
        let q = helix_point(h, step * j as f64);
        orbit_gap = orbit_gap.min((center - q).norm() - d0);
    }
    Ok(TangentCertificate {
        index: i,
        t0,
        center,
        f,
        df,
        ddf,
        grid_min,
        orbit_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScrewVerification {
    pub pass: bool,
    pub helix: HelixSpec,
    /// Step indices `i` of the neighbors `g^i P`, sorted.
    pub indices: Vec<i64>,
    pub certificates: Vec<TangentCertificate>,
    pub details: String,
}

/// Box half-width covering every tangent-sphere centre, with margin.
pub fn certificate_box(h: &HelixSpec) -> f64 {
    let s = h.scale();
    let far = (1..h.k)
        .map(|i| {
            let t0 = PI * i as f64 / h.k as f64;
            t0 / (h.r * s * t0.sin()) / s
        })
        .fold(0.0, f64::max);
    2.0 * far + 2.0 * h.r + h.k as f64 * h.pitch
}

/// Enumerates the neighbors of `P_0` in its `⟨g⟩`-orbit and checks that they
/// are exactly `g^i P_0` for `i = ±1, …, ±k`.
pub fn verify_screw_neighbors(h: &HelixSpec) -> Result<ScrewVerification, ScrewError> {
    let g = h.group()?;
    let base = helix_point(h, 0.0);
    let opts = EnumerateOptions {
        helix_box: Some(certificate_box(h)),
        ..EnumerateOptions::default()
    };
    let report = enumerate_neighbors(&g, &base, &opts)?;
    let mut indices: Vec<i64> = report
        .neighbors
        .iter()
        .map(|n| ((n.point.coords.z - base.z) / h.pitch).round() as i64)
        .collect();
    indices.sort_unstable();
    let k = h.k as i64;
    let expected: Vec<i64> = (-k..=k).filter(|&i| i != 0).collect();
    let certificates = (1..h.k)
        .map(|i| tangent_certificate(h, i))
        .collect::<Result<Vec<_>, _>>()?;
    let certs_ok = certificates.iter().all(|c| c.holds(1e-9));
    let pass = indices == expected && certs_ok;
    let details = if pass {
        format!("{} neighbors with indices ±1..±{}", indices.len(), k)
    } else if indices != expected {
        format!("neighbor indices {indices:?}, expected ±1..±{k}")
    } else {
        "tangent-sphere certificate failed".to_string()
    };
    Ok(ScrewVerification {
        pass,
        helix: *h,
        indices,
        certificates,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helix_point_examples() {
        let h = HelixSpec::new(6, 0.5, 2.0, 0.0).unwrap();
        assert!((helix_point(&h, 0.0) - Point3::new(2.0, 0.0, 0.0)).norm() < 1e-15);
        let top = helix_point(&h, 2.0 * PI);
        assert!((top - Point3::new(2.0, 0.0, 3.0)).norm() < 1e-12);
    }

    #[test]
    fn orbit_steps_along_helix() {
        let h = HelixSpec::new(5, 0.7, 1.3, 0.4).unwrap();
        let g = h.group().unwrap();
        let p0 = helix_point(&h, 0.0);
        let gen = g.generators[0];
        let mut q = p0;
        for i in 1..=7 {
            q = gen.apply(&q);
            let expected = helix_point(&h, 2.0 * PI * i as f64 / 5.0);
            assert!((q - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn tangent_center_examples() {
        assert!((tangent_center(PI / 2.0, 1.0).unwrap() + PI / 2.0).abs() < 1e-15);
        assert!((tangent_center(1e-6, 2.0).unwrap() + 0.5).abs() < 1e-9);
        assert!(tangent_center(0.0, 1.0).is_err());
        assert!(tangent_center(PI, 1.0).is_err());
    }

    #[test]
    fn tangent_sphere_is_orthogonal_to_helix() {
        for &(t0, r) in &[(0.3, 1.0), (1.0, 0.5), (2.5, 3.0)] {
            let a = tangent_center(t0, r).unwrap();
            let p = Point3::new(r * t0.cos(), r * t0.sin(), t0);
            let tangent = Point3::new(-r * t0.sin(), r * t0.cos(), 1.0);
            assert!((p - Point3::new(a, 0.0, 0.0)).dot(&tangent).abs() < 1e-12);
        }
    }

    #[test]
    fn f_vanishes_to_second_order() {
        for &t0 in &[0.3, 1.0, 2.5] {
            let (f, df, ddf) = f_eval(t0, t0).unwrap();
            assert!(f.abs() < 1e-12 && df.abs() < 1e-12);
            assert!(ddf > 0.0);
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert!(matches!(
            HelixSpec::new(1, 1.0, 1.0, 0.0),
            Err(ScrewError::InvalidOrder(1))
        ));
    }
}
