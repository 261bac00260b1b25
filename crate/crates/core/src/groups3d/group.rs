use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::catalog::{Catalog, CatalogEntry};
use super::GroupError;
use crate::expr;
use crate::geometry::{Isometry3, TolerancePolicy};

const MAX_COSETS: usize = 512;

/// Coset representative modulo the translation lattice, with the generator
/// word that produces it (see [`GroupSpec::evaluate_word`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosetRep {
    pub iso: Isometry3,
    pub word: Vec<i32>,
}

/// A space group (or helix group) with concrete parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub system: String,
    pub params: BTreeMap<String, f64>,
    /// Translation basis; rank 1 for helix groups.
    pub lattice: Vec<Vector3<f64>>,
    /// Non-translational generators in catalog order.
    pub generators: Vec<Isometry3>,
    pub aspects: usize,
    pub lattice_factor: Option<u32>,
    pub planar_type: Option<String>,
    pub planar_aspects: Option<u32>,
    pub cosets: Vec<CosetRep>,
    /// Shortest vertical translation.
    pub vertical: Vector3<f64>,
    /// Length of the shortest horizontal translation, if any.
    pub horizontal_min: Option<f64>,
    pub tol: TolerancePolicy,
}

impl GroupSpec {
    /// Builds `name` from the built-in catalog.
    pub fn make(name: &str, params: &BTreeMap<String, f64>) -> Result<Self, GroupError> {
        Self::from_catalog(&Catalog::builtin(), name, params)
    }

    pub fn from_catalog(
        catalog: &Catalog,
        name: &str,
        params: &BTreeMap<String, f64>,
    ) -> Result<Self, GroupError> {
        let entry = catalog.get(name).ok_or_else(|| GroupError::UnknownGroup {
            name: name.to_string(),
            known: catalog.names().join(", "),
        })?;
        Self::from_entry(entry, params)
    }

    pub fn from_entry(
        entry: &CatalogEntry,
        params: &BTreeMap<String, f64>,
    ) -> Result<Self, GroupError> {
        for p in &entry.params {
            match params.get(p) {
                None => {
                    return Err(GroupError::MissingParam {
                        group: entry.name.clone(),
                        param: p.clone(),
                    })
                }
                Some(v) if !(v.is_finite() && *v > 0.0) => {
                    return Err(GroupError::BadParam {
                        param: p.clone(),
                        msg: format!("must be positive, got {v}"),
                    })
                }
                _ => {}
            }
        }
        if let Some(extra) = params.keys().find(|k| !entry.params.contains(k)) {
            return Err(GroupError::BadParam {
                param: extra.clone(),
                msg: format!(
                    "not a parameter of {} (expects {})",
                    entry.name,
                    entry.params.join(", ")
                ),
            });
        }
        let vars: BTreeMap<String, f64> = entry
            .params
            .iter()
            .map(|p| (p.clone(), params[p]))
            .collect();
        if entry.system == "helix" {
            let k = vars["k"];
            if k.fract() != 0.0 || k < 2.0 {
                return Err(GroupError::BadParam {
                    param: "k".into(),
                    msg: format!("must be an integer >= 2, got {k}"),
                });
            }
        }
        let aspects_f = expr::eval(&entry.aspects, &vars)?;
        if aspects_f.fract() != 0.0 || aspects_f < 1.0 {
            return Err(GroupError::Inconsistent(format!(
                "aspect count {aspects_f} is not a positive integer"
            )));
        }
        let aspects = aspects_f as usize;

        let lattice: Vec<Vector3<f64>> = entry
            .lattice
            .iter()
            .map(|v| -> Result<Vector3<f64>, GroupError> {
                Ok(Vector3::new(
                    expr::eval(&v[0], &vars)?,
                    expr::eval(&v[1], &vars)?,
                    expr::eval(&v[2], &vars)?,
                ))
            })
            .collect::<Result<_, _>>()?;
        let scale = lattice
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min);
        let tol = TolerancePolicy::for_scale(scale)?;
        let generators: Vec<Isometry3> = entry
            .generators
            .iter()
            .map(|g| affine_from_triplet(g, &vars, &tol))
            .collect::<Result<_, _>>()?;

        let mut spec = Self {
            name: entry.name.clone(),
            system: entry.system.clone(),
            params: vars,
            lattice,
            generators,
            aspects,
            lattice_factor: entry.lattice_factor,
            planar_type: entry.planar_type.clone(),
            planar_aspects: entry.planar_aspects,
            cosets: Vec::new(),
            vertical: Vector3::zeros(),
            horizontal_min: None,
            tol,
        };
        spec.check_lattice_rank()?;
        spec.cosets = spec.close_cosets()?;
        if spec.cosets.len() != aspects {
            return Err(GroupError::Inconsistent(format!(
                "{}: generators give {} cosets, catalog says {}",
                spec.name,
                spec.cosets.len(),
                aspects
            )));
        }
        spec.vertical = spec
            .shortest(|v| v.x.hypot(v.y) <= spec.tol.tol_dedupe)
            .ok_or_else(|| {
                GroupError::Inconsistent(format!("{} has no vertical translation", spec.name))
            })?;
        spec.horizontal_min = spec
            .shortest(|v| v.z.abs() <= spec.tol.tol_dedupe)
            .map(|v| v.norm());
        for g in &spec.generators {
            if !g.preserves_horizontal(tol.tol_orth.max(1e-9)) {
                return Err(GroupError::Inconsistent(format!(
                    "{}: generator does not preserve the vertical axis",
                    spec.name
                )));
            }
        }
        Ok(spec)
    }

    /// Lattice translations followed by the other generators; word letters
    /// `±(k+1)` refer to entry `k` of this list or its inverse.
    pub fn all_generators(&self) -> Vec<Isometry3> {
        self.lattice
            .iter()
            .map(|v| Isometry3::translation(*v))
            .chain(self.generators.iter().copied())
            .collect()
    }

    /// Applies a word right to left.
    pub fn evaluate_word(&self, word: &[i32]) -> Isometry3 {
        let gens = self.all_generators();
        word.iter()
            .rev()
            .fold(Isometry3::identity(), |acc, &letter| {
                let g = gens[(letter.unsigned_abs() - 1) as usize];
                let g = if letter < 0 { g.invert() } else { g };
                g.compose(&acc)
            })
    }

    pub fn lattice_word(&self, coeffs: &[i64]) -> Vec<i32> {
        let mut w = Vec::new();
        for (i, &c) in coeffs.iter().enumerate() {
            let letter = (i as i32 + 1) * c.signum() as i32;
            w.extend(std::iter::repeat_n(letter, c.unsigned_abs() as usize));
        }
        w
    }

    pub fn lattice_vector(&self, coeffs: &[i64]) -> Vector3<f64> {
        self.lattice
            .iter()
            .zip(coeffs)
            .map(|(v, &c)| v * c as f64)
            .sum()
    }

    /// Least-squares lattice coordinates of `d` and the residual length.
    pub fn lattice_coords(&self, d: &Vector3<f64>) -> (Vec<f64>, f64) {
        let r = self.lattice.len();
        let l = DMatrix::from_fn(3, r, |i, j| self.lattice[j][i]);
        let gram = l.transpose() * &l;
        let rhs = l.transpose() * DVector::from_column_slice(d.as_slice());
        let c = gram.lu().solve(&rhs).expect("lattice basis is independent");
        let fitted = &l * &c;
        let resid = (DVector::from_column_slice(d.as_slice()) - fitted).norm();
        (c.iter().copied().collect(), resid)
    }

    /// Integer lattice coordinates of `d` when it is a lattice vector.
    pub fn as_lattice_vector(&self, d: &Vector3<f64>) -> Option<Vec<i64>> {
        let (c, resid) = self.lattice_coords(d);
        if resid > self.tol.tol_dedupe {
            return None;
        }
        let n: Vec<i64> = c.iter().map(|x| x.round() as i64).collect();
        ((self.lattice_vector(&n) - d).norm() <= self.tol.tol_dedupe).then_some(n)
    }

    pub fn is_helix(&self) -> bool {
        self.horizontal_min.is_none()
    }

    fn check_lattice_rank(&self) -> Result<(), GroupError> {
        let r = self.lattice.len();
        let l = DMatrix::from_fn(3, r, |i, j| self.lattice[j][i]);
        let sv = l.singular_values();
        let max = sv.max();
        if sv.min() <= 1e-9 * max {
            return Err(GroupError::Inconsistent(format!(
                "{}: lattice basis is dependent",
                self.name
            )));
        }
        Ok(())
    }

    fn shortest(&self, keep: impl Fn(&Vector3<f64>) -> bool) -> Option<Vector3<f64>> {
        let r = self.lattice.len() as u32;
        let range = 4i64;
        let side = (2 * range + 1) as usize;
        let mut best: Option<Vector3<f64>> = None;
        for idx in 0..side.pow(r) {
            let mut rem = idx;
            let coeffs: Vec<i64> = (0..r)
                .map(|_| {
                    let c = (rem % side) as i64 - range;
                    rem /= side;
                    c
                })
                .collect();
            let v = self.lattice_vector(&coeffs);
            if v.norm() <= self.tol.tol_dedupe || !keep(&v) {
                continue;
            }
            // Prefer the upward direction for ties.
            let better = match best {
                None => true,
                Some(b) => {
                    v.norm() < b.norm() - self.tol.tol_dedupe
                        || (v.norm() <= b.norm() + self.tol.tol_dedupe
                            && v.z > b.z + self.tol.tol_dedupe)
                }
            };
            if better {
                best = Some(v);
            }
        }
        best
    }

    /// Breadth-first closure of the generators modulo the lattice.
    fn close_cosets(&self) -> Result<Vec<CosetRep>, GroupError> {
        let r = self.lattice.len();
        let mut reps = vec![CosetRep {
            iso: Isometry3::identity(),
            word: Vec::new(),
        }];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (k, g) in self.generators.iter().enumerate() {
                let raw = g.compose(&reps[i].iso);
                let (c, _) = self.lattice_coords(&raw.translation);
                let shift: Vec<i64> = c.iter().map(|x| -((x + 1e-9).floor() as i64)).collect();
                let iso = Isometry3::translation(self.lattice_vector(&shift)).compose(&raw);
                if reps.iter().any(|rep| {
                    (rep.iso.linear - iso.linear).amax() <= 1e-9
                        && self
                            .as_lattice_vector(&(iso.translation - rep.iso.translation))
                            .is_some()
                }) {
                    continue;
                }
                if iso.linear_is_identity(1e-9) {
                    return Err(GroupError::Inconsistent(format!(
                        "{}: generators produce a translation {:?} outside the lattice",
                        self.name,
                        iso.translation.as_slice()
                    )));
                }
                let mut word = self.lattice_word(&shift);
                word.push((r + k + 1) as i32);
                word.extend_from_slice(&reps[i].word);
                reps.push(CosetRep { iso, word });
                if reps.len() > MAX_COSETS {
                    return Err(GroupError::Inconsistent(format!(
                        "{}: coset closure does not terminate",
                        self.name
                    )));
                }
                queue.push_back(reps.len() - 1);
            }
        }
        Ok(reps)
    }
}

/// Reads an affine map from its coordinate triplet and checks that it is an isometry.
fn affine_from_triplet(
    t: &[String; 3],
    params: &BTreeMap<String, f64>,
    tol: &TolerancePolicy,
) -> Result<Isometry3, GroupError> {
    let image = |p: Vector3<f64>| -> Result<Vector3<f64>, GroupError> {
        let mut vars = params.clone();
        vars.insert("x".into(), p.x);
        vars.insert("y".into(), p.y);
        vars.insert("z".into(), p.z);
        Ok(Vector3::new(
            expr::eval(&t[0], &vars)?,
            expr::eval(&t[1], &vars)?,
            expr::eval(&t[2], &vars)?,
        ))
    };
    let origin = image(Vector3::zeros())?;
    let linear = Matrix3::from_columns(&[
        image(Vector3::x())? - origin,
        image(Vector3::y())? - origin,
        image(Vector3::z())? - origin,
    ]);
    let probe = Vector3::new(0.37, -1.21, 2.03);
    if (image(probe)? - (linear * probe + origin)).norm() > 1e-9 * (1.0 + origin.norm()) {
        return Err(GroupError::Inconsistent(format!(
            "generator `{}` is not affine",
            t.join(", ")
        )));
    }
    Ok(Isometry3::new(linear, origin, tol.tol_orth.max(1e-12))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn coset_counts_match_catalog() {
        let cases: &[(&str, &[(&str, f64)])] = &[
            ("P1", &[("a", 1.0), ("b", 1.3), ("c", 0.8)]),
            ("P2/n2/n2/n", &[("a", 1.0), ("b", 1.3), ("c", 0.8)]),
            ("P4_122", &[("horiz", 2.0), ("vert", 1.0)]),
            ("I4_122", &[("horiz", 4.0), ("vert", 1.0)]),
            ("P6_122", &[("horiz", 100.0), ("vert", 12.0)]),
            ("screw", &[("k", 5.0), ("pitch", 0.3)]),
            ("rho-g2", &[("k", 12.0), ("pitch", 1.0)]),
        ];
        for (name, kv) in cases {
            let g = GroupSpec::make(name, &params(kv)).unwrap();
            assert_eq!(g.cosets.len(), g.aspects, "{name}");
        }
    }

    #[test]
    fn words_reproduce_representatives() {
        let g = GroupSpec::make("I4_122", &params(&[("horiz", 4.0), ("vert", 1.0)])).unwrap();
        for rep in &g.cosets {
            assert!(g.evaluate_word(&rep.word).approx_eq(&rep.iso, 1e-12, 1e-12));
        }
    }

    #[test]
    fn vertical_and_horizontal_translations() {
        let g = GroupSpec::make("I4_122", &params(&[("horiz", 4.0), ("vert", 1.0)])).unwrap();
        assert!((g.vertical - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
        assert_eq!(g.horizontal_min, Some(4.0));
        let h = GroupSpec::make("screw", &params(&[("k", 12.0), ("pitch", 1.0)])).unwrap();
        assert!(h.is_helix());
        assert!((h.vertical.z - 12.0).abs() < 1e-12);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            GroupSpec::make("Pxyz", &params(&[])),
            Err(GroupError::UnknownGroup { .. })
        ));
        assert!(matches!(
            GroupSpec::make("P6_122", &params(&[("horiz", 1.0)])),
            Err(GroupError::MissingParam { .. })
        ));
        assert!(matches!(
            GroupSpec::make("P6_122", &params(&[("horiz", 1.0), ("vert", -1.0)])),
            Err(GroupError::BadParam { .. })
        ));
        assert!(matches!(
            GroupSpec::make("screw", &params(&[("k", 2.5), ("pitch", 1.0)])),
            Err(GroupError::BadParam { .. })
        ));
    }

    #[test]
    fn translation_outside_lattice_is_inconsistent() {
        let text = "format 1\nbad | triclinic | a | 1 | 1 | p1 | 1 | (a,0,0);(0,a,0);(0,0,a) | x+a/2,y,z\n";
        let cat = Catalog::parse(text).unwrap();
        assert!(matches!(
            GroupSpec::from_catalog(&cat, "bad", &params(&[("a", 1.0)])),
            Err(GroupError::Inconsistent(_))
        ));
    }
}
