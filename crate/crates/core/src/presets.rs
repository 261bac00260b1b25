//! Named reproduction presets shipped in `data/presets.json`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::expr::{self, ExprError};
use crate::geometry::Point3;
use crate::groups3d::{GroupError, GroupSpec};
use crate::stereohedron::{
    enumerate_neighbors, EnumerateOptions, MarginalPolicy, NeighborReport, StereoError,
};

pub const BUILTIN_PRESETS: &str = include_str!("../data/presets.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub id: String,
    pub group: String,
    pub params: BTreeMap<String, String>,
    pub base: [String; 3],
    pub expected_facets: usize,
    #[serde(default)]
    pub marginal: MarginalPolicy,
    pub source: String,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Deserialize)]
struct PresetFile {
    format: u32,
    presets: Vec<Preset>,
}

#[derive(Debug, thiserror::Error)]
pub enum PresetError {
    #[error("unknown preset `{0}`")]
    Unknown(String),
    #[error("preset file: {0}")]
    File(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Stereo(#[from] StereoError),
}

pub fn builtin() -> Vec<Preset> {
    parse(BUILTIN_PRESETS).expect("built-in presets parse")
}

pub fn parse(text: &str) -> Result<Vec<Preset>, PresetError> {
    let file: PresetFile =
        serde_json::from_str(text).map_err(|e| PresetError::File(e.to_string()))?;
    if file.format != 1 {
        return Err(PresetError::File(format!(
            "unsupported format {}",
            file.format
        )));
    }
    Ok(file.presets)
}

pub fn find(id: &str) -> Result<Preset, PresetError> {
    builtin()
        .into_iter()
        .find(|p| p.id == id)
        .ok_or_else(|| PresetError::Unknown(id.to_string()))
}

impl Preset {
    pub fn params(&self) -> Result<BTreeMap<String, f64>, PresetError> {
        self.params
            .iter()
            .map(|(k, v)| Ok((k.clone(), expr::eval_const(v)?)))
            .collect()
    }

    pub fn base(&self) -> Result<Point3, PresetError> {
        Ok(Point3::new(
            expr::eval_const(&self.base[0])?,
            expr::eval_const(&self.base[1])?,
            expr::eval_const(&self.base[2])?,
        ))
    }

    pub fn group(&self) -> Result<GroupSpec, PresetError> {
        Ok(GroupSpec::make(&self.group, &self.params()?)?)
    }

    pub fn options(&self) -> EnumerateOptions {
        EnumerateOptions {
            marginal: self.marginal,
            ..EnumerateOptions::default()
        }
    }

    pub fn run(&self) -> Result<NeighborReport, PresetError> {
        let g = self.group()?;
        Ok(enumerate_neighbors(&g, &self.base()?, &self.options())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_presets_resolve() {
        let all = builtin();
        assert_eq!(all.len(), 4);
        for p in &all {
            p.group().unwrap();
            p.base().unwrap();
        }
        let b = find("exm32").unwrap().base().unwrap();
        assert_eq!(b.y, (std::f64::consts::PI / 12.0).tan());
        assert!(matches!(find("nope"), Err(PresetError::Unknown(_))));
    }
}
