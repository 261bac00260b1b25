use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{GroupError, GroupSpec};
use crate::geometry::Point3;

/// An orbit point `t_n ∘ rep_coset (base)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub coords: Point3,
    pub coset: usize,
    pub lattice: Vec<i64>,
    /// Generator word mapping the base point here, applied right to left.
    pub word: Vec<i32>,
}

impl OrbitPoint {
    pub fn is_base(&self) -> bool {
        self.coset == 0 && self.lattice.iter().all(|&c| c == 0)
    }
}

/// Slab of points within `half_width` of the base point's height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub center_z: f64,
    pub half_width: f64,
}

impl Band {
    pub fn contains(&self, z: f64, tol: f64) -> bool {
        (z - self.center_z).abs() <= self.half_width + tol
    }
}

impl GroupSpec {
    /// The band about `base` whose half-width is the shortest vertical translation.
    pub fn band_of(&self, base: &Point3) -> Band {
        Band {
            center_z: base.z,
            half_width: self.vertical.norm(),
        }
    }

    /// Fails when some non-identity element fixes `base`.
    ///
    /// `h(base) = base` for `h = t ∘ rep` exactly when `rep(base) - base` is a
    /// lattice vector, so checking the coset representatives is exhaustive.
    pub fn stabilizer_check(&self, base: &Point3) -> Result<(), GroupError> {
        for (i, rep) in self.cosets.iter().enumerate().skip(1) {
            let d = rep.iso.apply(base) - base;
            if self.as_lattice_vector(&d).is_some() {
                return Err(GroupError::NontrivialStabilizer {
                    coset: i,
                    word: rep.word.clone(),
                });
            }
        }
        Ok(())
    }

    /// All orbit points inside the box `[lo, hi]`, ordered by coset and lattice coordinates.
    pub fn orbit_in_box(&self, base: &Point3, lo: &Point3, hi: &Point3) -> Vec<OrbitPoint> {
        let r = self.lattice.len();
        let corners: Vec<Point3> = (0..8)
            .map(|m| {
                Point3::new(
                    if m & 1 == 0 { lo.x } else { hi.x },
                    if m & 2 == 0 { lo.y } else { hi.y },
                    if m & 4 == 0 { lo.z } else { hi.z },
                )
            })
            .collect();
        let tol = self.tol.tol_dedupe;
        let mut out = Vec::new();
        for (ci, rep) in self.cosets.iter().enumerate() {
            let q = rep.iso.apply(base);
            let mut lo_c = vec![i64::MAX; r];
            let mut hi_c = vec![i64::MIN; r];
            for c in &corners {
                let (coords, _) = self.lattice_coords(&(c - q));
                for k in 0..r {
                    lo_c[k] = lo_c[k].min(coords[k].floor() as i64 - 1);
                    hi_c[k] = hi_c[k].max(coords[k].ceil() as i64 + 1);
                }
            }
            for n in (0..r).map(|k| lo_c[k]..=hi_c[k]).multi_cartesian_product() {
                let x = q + self.lattice_vector(&n);
                if (0..3).all(|k| x[k] >= lo[k] - tol && x[k] <= hi[k] + tol) {
                    let mut word = self.lattice_word(&n);
                    word.extend_from_slice(&rep.word);
                    out.push(OrbitPoint {
                        coords: x,
                        coset: ci,
                        lattice: n,
                        word,
                    });
                }
            }
        }
        out
    }

    /// Distinct heights of orbit points strictly inside the band, other than the base height.
    pub fn height_classes(&self, base: &Point3) -> Vec<f64> {
        let band = self.band_of(base);
        let reach =
            self.lattice.iter().map(|v| v.norm()).fold(0.0, f64::max) * 2.0 + base.xy().norm();
        let lo = Point3::new(-reach, -reach, band.center_z - band.half_width);
        let hi = Point3::new(reach, reach, band.center_z + band.half_width);
        let tol = self.tol.tol_slack;
        let mut zs: Vec<f64> = self
            .orbit_in_box(base, &lo, &hi)
            .into_iter()
            .map(|p| p.coords.z - base.z)
            .filter(|dz| dz.abs() > tol && dz.abs() < band.half_width - tol)
            .collect();
        zs.sort_by(f64::total_cmp);
        zs.dedup_by(|a, b| (*a - *b).abs() <= tol);
        zs
    }

    /// Number of horizontal orbit planes strictly inside the band besides the
    /// base plane: `2·a·l/a0 - 2`.
    pub fn horizontal_plane_count(&self) -> Result<usize, GroupError> {
        let (Some(l), Some(a0)) = (self.lattice_factor, self.planar_aspects) else {
            return Err(GroupError::Inconsistent(format!(
                "{} has no planar data",
                self.name
            )));
        };
        let num = 2 * self.aspects as u64 * l as u64;
        if !num.is_multiple_of(a0 as u64) {
            return Err(GroupError::Inconsistent(format!(
                "{}: 2·a·l = {num} is not divisible by a0 = {a0}",
                self.name
            )));
        }
        Ok((num / a0 as u64) as usize - 2)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn group(name: &str, kv: &[(&str, f64)]) -> GroupSpec {
        let p: BTreeMap<String, f64> = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        GroupSpec::make(name, &p).unwrap()
    }

    #[test]
    fn words_map_base_to_point() {
        let g = group("P6_122", &[("horiz", 100.0), ("vert", 12.0)]);
        let base = Point3::new(0.9, 0.3, 0.5);
        let pts = g.orbit_in_box(
            &base,
            &Point3::new(-150.0, -150.0, -12.0),
            &Point3::new(150.0, 150.0, 12.0),
        );
        assert!(!pts.is_empty());
        for p in &pts {
            assert!((g.evaluate_word(&p.word).apply(&base) - p.coords).norm() < 1e-9);
        }
        assert_eq!(pts.iter().filter(|p| p.is_base()).count(), 1);
    }

    #[test]
    fn stabilizer_detected_on_axis() {
        let g = group("P6_122", &[("horiz", 100.0), ("vert", 12.0)]);
        assert!(matches!(
            g.stabilizer_check(&Point3::new(3.0, 0.0, 0.0)),
            Err(GroupError::NontrivialStabilizer { .. })
        ));
        assert!(g.stabilizer_check(&Point3::new(3.0, 0.2, 0.1)).is_ok());
    }

    #[test]
    fn plane_counts_match_height_classes() {
        let cases: &[(&str, &[(&str, f64)], usize)] = &[
            ("P6_122", &[("horiz", 100.0), ("vert", 12.0)], 22),
            ("P2/n2/n2/n", &[("a", 1.0), ("b", 1.2), ("c", 0.9)], 6),
            ("I4_122", &[("horiz", 4.0), ("vert", 1.0)], 14),
            ("P4_122", &[("horiz", 2.0), ("vert", 1.0)], 14),
        ];
        let base = Point3::new(0.137, 0.291, 0.0331);
        for (name, kv, expected) in cases {
            let g = group(name, kv);
            assert_eq!(g.horizontal_plane_count().unwrap(), *expected, "{name}");
            assert_eq!(g.height_classes(&base).len(), *expected, "{name}");
        }
    }
}
