use serde::{Deserialize, Serialize};

use super::GroupError;

pub const BUILTIN_CATALOG: &str = include_str!("../../data/groups.catalog");
const FORMAT_VERSION: u32 = 1;

/// One catalog row, with expressions kept as text until parameters are known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub system: String,
    pub params: Vec<String>,
    pub aspects: String,
    pub lattice_factor: Option<u32>,
    pub planar_type: Option<String>,
    pub planar_aspects: Option<u32>,
    pub lattice: Vec<[String; 3]>,
    pub generators: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CATALOG).expect("built-in catalog parses")
    }

    pub fn load(path: &std::path::Path) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(path).map_err(|e| GroupError::Catalog {
            line: 0,
            msg: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut entries: Vec<CatalogEntry> = Vec::new();
        let mut version = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| GroupError::Catalog { line: line_no, msg };
            if let Some(v) = line.strip_prefix("format") {
                let v: u32 = v
                    .trim()
                    .parse()
                    .map_err(|_| err("bad format line".into()))?;
                if v != FORMAT_VERSION {
                    return Err(err(format!("unsupported catalog format {v}")));
                }
                version = Some(v);
                continue;
            }
            if version.is_none() {
                return Err(err("missing `format` line before first entry".into()));
            }
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            if fields.len() != 9 {
                return Err(err(format!("expected 9 fields, found {}", fields.len())));
            }
            let opt_u32 = |s: &str, what: &str| -> Result<Option<u32>, GroupError> {
                if s == "-" {
                    Ok(None)
                } else {
                    s.parse()
                        .map(Some)
                        .map_err(|_| err(format!("bad {what} `{s}`")))
                }
            };
            let entry = CatalogEntry {
                name: fields[0].to_string(),
                system: fields[1].to_string(),
                params: fields[2]
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
                aspects: fields[3].to_string(),
                lattice_factor: opt_u32(fields[4], "lattice factor")?,
                planar_type: (fields[5] != "-").then(|| fields[5].to_string()),
                planar_aspects: opt_u32(fields[6], "planar aspects")?,
                lattice: parse_triplets(fields[7], true).map_err(&err)?,
                generators: if fields[8] == "-" {
                    Vec::new()
                } else {
                    parse_triplets(fields[8], false).map_err(&err)?
                },
            };
            if entry.lattice.is_empty() || entry.lattice.len() > 3 {
                return Err(err("lattice needs one to three basis vectors".into()));
            }
            if entries.iter().any(|e| e.name == entry.name) {
                return Err(err(format!("duplicate group `{}`", entry.name)));
            }
            entries.push(entry);
        }
        Ok(Self { entries })
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }
}

fn parse_triplets(field: &str, parenthesized: bool) -> Result<Vec<[String; 3]>, String> {
    crate::expr::split_top_level(field, ';')
        .into_iter()
        .map(|t| {
            let t = t.trim();
            let inner = if parenthesized {
                t.strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| format!("expected parenthesized vector, found `{t}`"))?
            } else {
                t
            };
            let parts = crate::expr::split_top_level(inner, ',');
            if parts.len() != 3 {
                return Err(format!("expected three coordinates in `{t}`"));
            }
            Ok([
                parts[0].trim().to_string(),
                parts[1].trim().to_string(),
                parts[2].trim().to_string(),
            ])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_required_groups() {
        let c = Catalog::builtin();
        for name in [
            "P1",
            "P6_122",
            "I4_122",
            "P4_122",
            "P2/n2/n2/n",
            "screw",
            "rho-g2",
        ] {
            assert!(c.get(name).is_some(), "{name}");
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(matches!(
            Catalog::parse("format 1\nX | a | b"),
            Err(GroupError::Catalog { line: 2, .. })
        ));
        assert!(Catalog::parse("X | a | b | 1 | 1 | - | - | (1,0,0) | -").is_err());
        assert!(Catalog::parse("format 2\n").is_err());
    }
}
