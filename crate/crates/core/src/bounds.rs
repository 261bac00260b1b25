//! Facet-count bounds: Delone's bound, the plane-counting bound and the
//! per-group table shipped in `data/bounds.table`.

use std::path::Path;

use serde::{Deserialize, Serialize};

pub const BUILTIN_BOUNDS: &str = include_str!("../data/bounds.table");
const FORMAT_VERSION: u32 = 1;
const FIELDS: usize = 12;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BoundsError {
    #[error("unknown group `{0}` in bounds table")]
    UnknownGroup(String),
    #[error("bounds table line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bounds table: {0}")]
    File(String),
    #[error("aspect count must be positive")]
    NonPositive,
    #[error("{a}*{l} is not a positive multiple of {a0}")]
    NotDivisible { a: u32, a0: u32, l: u32 },
}

/// One row of the bound table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    pub system: String,
    pub a: u32,
    pub planar_type: String,
    pub a0: u32,
    pub i: u32,
    pub i_case: String,
    pub l: u32,
    /// Lattice factor as printed in the source table, when it was corrected.
    pub l_printed: Option<u32>,
    pub cor_printed: u32,
    pub cor_bound: u32,
    pub delone_bound: u32,
    pub final_bound: Option<u32>,
    pub final_source: Option<String>,
}

impl BoundRecord {
    /// Best bound known for the group: the refined value, or else the
    /// smaller of the plane-counting and Delone bounds.
    pub fn effective_bound(&self) -> u32 {
        self.final_bound
            .unwrap_or(self.cor_bound.min(self.delone_bound))
    }

    pub fn plane_count(&self) -> u32 {
        plane_count(self.a, self.a0, self.l).unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableNote {
    pub key: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub records: Vec<BoundRecord>,
    pub notes: Vec<TableNote>,
}

/// `2^d (a + 1) - 2`.
pub fn delone_bound(a: u32, d: u32) -> Result<u32, BoundsError> {
    if a == 0 {
        return Err(BoundsError::NonPositive);
    }
    Ok((1u32 << d) * (a + 1) - 2)
}

/// Number of horizontal orbit planes strictly inside the band: `2 a l / a0 - 2`.
pub fn plane_count(a: u32, a0: u32, l: u32) -> Result<u32, BoundsError> {
    if a == 0 || a0 == 0 || l == 0 {
        return Err(BoundsError::NonPositive);
    }
    if !(a * l).is_multiple_of(a0) {
        return Err(BoundsError::NotDivisible { a, a0, l });
    }
    Ok(2 * a * l / a0 - 2)
}

/// `2 i (a l / a0 - 1) + 8`: at most `i` neighbors per interior plane, six in
/// the base plane and one on each boundary plane.
pub fn corollary_bound(a: u32, a0: u32, i: u32, l: u32) -> Result<u32, BoundsError> {
    Ok(i * plane_count(a, a0, l)? + 8)
}

/// Overlap cap for two orbits of a planar group of the given type.
pub fn overlap_cap(planar_type: &str, normalizer_related: bool) -> Option<u32> {
    match planar_type {
        "p1" | "p3" | "p4" | "p6" => Some(4),
        "p2" | "pg" => Some(7),
        "pgg" if normalizer_related => Some(7),
        "pgg" => Some(11),
        _ => None,
    }
}

/// Lattice factor implied by the centering letter of a group symbol.
pub fn lattice_factor(name: &str) -> Option<u32> {
    match name.chars().next()? {
        'P' | 'C' => Some(1),
        'I' | 'F' => Some(2),
        'R' => Some(3),
        _ => None,
    }
}

fn normalize(name: &str) -> String {
    name.chars().filter(|c| !c.is_whitespace()).collect()
}

impl BoundsTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_BOUNDS).expect("built-in bounds table parses")
    }

    pub fn load(path: &Path) -> Result<Self, BoundsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BoundsError::File(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, BoundsError> {
        let mut records = Vec::new();
        let mut notes = Vec::new();
        let mut version = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| BoundsError::Parse { line: line_no, msg };
            if let Some(v) = line.strip_prefix("format") {
                let v: u32 = v
                    .trim()
                    .parse()
                    .map_err(|_| err("bad format line".into()))?;
                if v != FORMAT_VERSION {
                    return Err(err(format!("unsupported format {v}")));
                }
                version = Some(v);
                continue;
            }
            if version.is_none() {
                return Err(err("missing `format` line before first row".into()));
            }
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            if fields[0] == "note" {
                if fields.len() != 3 {
                    return Err(err("note lines have 3 fields".into()));
                }
                notes.push(TableNote {
                    key: fields[1].to_string(),
                    text: fields[2].to_string(),
                });
                continue;
            }
            if fields.len() != FIELDS {
                return Err(err(format!(
                    "expected {FIELDS} fields, found {}",
                    fields.len()
                )));
            }
            let int = |s: &str, what: &str| -> Result<u32, BoundsError> {
                s.parse().map_err(|_| err(format!("bad {what} `{s}`")))
            };
            let opt = |s: &str, what: &str| -> Result<Option<u32>, BoundsError> {
                if s == "-" {
                    Ok(None)
                } else {
                    int(s, what).map(Some)
                }
            };
            let (a, a0, i, l) = (
                int(fields[2], "a")?,
                int(fields[4], "a0")?,
                int(fields[5], "i")?,
                int(fields[7], "l")?,
            );
            let cor_bound = corollary_bound(a, a0, i, l).map_err(|e| err(e.to_string()))?;
            let final_source = match fields[11] {
                "-" => None,
                s => Some(s.to_string()),
            };
            let final_bound = opt(fields[10], "final")?;
            if final_bound.is_some() != final_source.is_some() {
                return Err(err(
                    "final bound and source must both be present or both absent".into(),
                ));
            }
            records.push(BoundRecord {
                name: normalize(fields[0]),
                system: fields[1].to_string(),
                a,
                planar_type: fields[3].to_string(),
                a0,
                i,
                i_case: fields[6].to_string(),
                l,
                l_printed: opt(fields[8], "l_printed")?,
                cor_printed: int(fields[9], "cor")?,
                cor_bound,
                delone_bound: delone_bound(a, 3).map_err(|e| err(e.to_string()))?,
                final_bound,
                final_source,
            });
        }
        if version.is_none() {
            return Err(BoundsError::File("empty bounds table".into()));
        }
        Ok(Self { records, notes })
    }

    pub fn get(&self, name: &str) -> Result<&BoundRecord, BoundsError> {
        let key = normalize(name);
        self.records
            .iter()
            .find(|r| r.name == key)
            .ok_or_else(|| BoundsError::UnknownGroup(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.records.iter().map(|r| r.name.as_str())
    }

    pub fn max_final(&self) -> Option<&BoundRecord> {
        self.records
            .iter()
            .filter(|r| r.final_bound.is_some())
            .max_by_key(|r| r.final_bound)
    }

    /// Groups whose best known bound exceeds `threshold`.
    pub fn exceeding(&self, threshold: u32) -> Vec<&BoundRecord> {
        self.records
            .iter()
            .filter(|r| r.effective_bound() > threshold)
            .collect()
    }
}

/// Full record for a group of the built-in table.
pub fn group_report(name: &str) -> Result<BoundRecord, BoundsError> {
    BoundsTable::builtin().get(name).cloned()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub name: String,
    pub field: String,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationCheck {
    pub label: String,
    pub expected: u32,
    pub computed: u32,
}

impl DerivationCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.computed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub name: String,
    pub field: String,
    pub printed: u32,
    pub used: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: usize,
    pub mismatches: Vec<Mismatch>,
    pub corrections: Vec<Correction>,
    pub derivations: Vec<DerivationCheck>,
    pub max_final: Option<u32>,
    pub max_final_group: Option<String>,
    pub over_38: Vec<String>,
    pub over_50: Vec<String>,
    pub notes: Vec<TableNote>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.derivations.iter().all(DerivationCheck::ok)
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            format!("{} rows OK", self.rows)
        } else {
            let bad = self.derivations.iter().filter(|d| !d.ok()).count();
            format!(
                "{} rows, {} mismatches, {} failed derivations",
                self.rows,
                self.mismatches.len(),
                bad
            )
        }
    }
}

fn check_row(r: &BoundRecord, out: &mut Vec<Mismatch>) {
    let mut push = |field: &str, expected: String, found: String| {
        out.push(Mismatch {
            name: r.name.clone(),
            field: field.to_string(),
            expected,
            found,
        });
    };
    if r.cor_bound != r.cor_printed {
        push("cor", r.cor_bound.to_string(), r.cor_printed.to_string());
    }
    if lattice_factor(&r.name) != Some(r.l) {
        push(
            "l",
            format!("{:?}", lattice_factor(&r.name)),
            r.l.to_string(),
        );
    }
    let cap = overlap_cap(&r.planar_type, r.i_case == "vi");
    if cap != Some(r.i) {
        push("i", format!("{cap:?}"), r.i.to_string());
    }
    if let Some(f) = r.final_bound {
        if f > r.cor_bound.max(r.delone_bound) {
            push(
                "final",
                format!("<= {}", r.cor_bound.max(r.delone_bound)),
                f.to_string(),
            );
        }
        match r.final_source.as_deref() {
            Some("Delone") if f != r.delone_bound => {
                push("final", r.delone_bound.to_string(), f.to_string())
            }
            Some("Cor 1.1") if f != r.cor_bound => {
                push("final", r.cor_bound.to_string(), f.to_string())
            }
            _ => {}
        }
    }
}

fn derivations(t: &BoundsTable) -> Vec<DerivationCheck> {
    let fin = |name: &str| t.get(name).ok().and_then(|r| r.final_bound).unwrap_or(0);
    let planes = |name: &str| t.get(name).map(BoundRecord::plane_count).unwrap_or(0);
    let mut v = Vec::new();
    let mut add = |label: &str, expected: u32, computed: u32| {
        v.push(DerivationCheck {
            label: label.to_string(),
            expected,
            computed,
        });
    };
    for (a, want) in [(48, 390), (16, 134), (8, 70)] {
        add(
            &format!("Delone bound for a={a}"),
            want,
            delone_bound(a, 3).unwrap_or(0),
        );
    }

    // Rectangular p2 and pg rows: four black planes (4 each), two white (7 each).
    add("rectangular p2 planes", 6, planes("P2/n2/n2/n"));
    add(
        "rectangular p2: 4*4 + 2*7 + 8",
        fin("P2/n2/n2/n"),
        4 * 4 + 2 * 7 + 8,
    );
    add(
        "pg: 2*(4+7+4) + 8",
        fin("P2_1/a2_1/b2_1/c"),
        2 * (4 + 7 + 4) + 8,
    );

    // P4_122: seven vertical orbits of at most 7, the base one at most 6, plus two.
    add("P4_122: 6 + 6*7 + 2", fin("P4_122"), 6 + 6 * 7 + 2);

    // R groups: ten planes, six black (3 each) and four white (4 each).
    add("R groups planes", 10, planes("R-3"));
    add("R groups: 6*3 + 4*4 + 8", fin("R32"), 6 * 3 + 4 * 4 + 8);
    add("R-32/c planes", 22, planes("R-32/c"));
    let black = 12 * 3;
    let white = 10 * 4 + 8;
    add("R-32/c horizontal: 12*3 + 10*4 + 8", 84, black + white);
    add(
        "R-32/c black via nine vertical planes: floor(9*7/2)",
        31,
        9 * 7 / 2,
    );
    add(
        "R-32/c: 31 + 48",
        fin("R-32/c"),
        (9 * 7 / 2).min(black) + white,
    );

    // pgg square rows: i = 6 when the bad normalizer orbit is absent.
    add(
        "I4_1cd: 6 planes * 6 + 8",
        fin("I4_1cd"),
        planes("I4_1cd") * 6 + 8,
    );
    add(
        "I-4c2: 44 - 10 + 6",
        fin("I-4c2"),
        planes("I-4c2") * 6 + 8 - 10 + 6,
    );
    add(
        "P4_2/n2/g2/c: 44 - 10 + 6",
        fin("P4_2/n2/g2/c"),
        planes("P4_2/n2/g2/c") * 6 + 8 - 10 + 6,
    );
    add("I4_1/g2/c2/d planes", 14, planes("I4_1/g2/c2/d"));
    let p94 = 12 * 6 + 2 * 7 + 8;
    add("I4_1/g2/c2/d: 12*6 + 2*7 + 8", 94, p94);
    let counted = 12 + 12 + 10 + 10 + 12 - 2 * 2 - 2;
    add("I4_1/g2/c2/d vertical planes counted", 50, counted);
    add(
        "I4_1/g2/c2/d: 94 - 50 + (6+6+6+11+7)",
        fin("I4_1/g2/c2/d"),
        p94 - counted + (6 + 6 + 6 + 11 + 7),
    );

    // P6_122: 22 planes of 4, over-count of at least 18 in ten vertical planes.
    let p6122 = planes("P6_122") * 4 + 8;
    add("P6_122: 22*4 + 8", 96, p6122);
    add("P6_122: 96 - 18", fin("P6_122"), p6122 - 18);

    let cor_max = t.records.iter().map(|r| r.cor_bound).max().unwrap_or(0);
    add("maximum plane-counting bound", 106, cor_max);
    add(
        "groups with plane-counting bound > 38",
        34,
        t.records.iter().filter(|r| r.cor_bound > 38).count() as u32,
    );
    add(
        "global maximum final bound",
        80,
        t.records
            .iter()
            .map(BoundRecord::effective_bound)
            .max()
            .unwrap_or(0),
    );
    add("groups with bound > 38", 21, t.exceeding(38).len() as u32);
    add("groups with bound > 70", 4, t.exceeding(70).len() as u32);
    add("groups with bound > 50", 9, t.exceeding(50).len() as u32);
    v
}

/// Recompute every derived column and the prose arithmetic behind the refined bounds.
pub fn table_verify(t: &BoundsTable) -> VerifyReport {
    let mut mismatches = Vec::new();
    let mut corrections = Vec::new();
    for r in &t.records {
        check_row(r, &mut mismatches);
        if let Some(p) = r.l_printed {
            corrections.push(Correction {
                name: r.name.clone(),
                field: "l".into(),
                printed: p,
                used: r.l,
            });
        }
    }
    let max = t.max_final();
    VerifyReport {
        rows: t.records.len(),
        mismatches,
        corrections,
        derivations: derivations(t),
        max_final: max.and_then(|r| r.final_bound),
        max_final_group: max.map(|r| r.name.clone()),
        over_38: t.exceeding(38).iter().map(|r| r.name.clone()).collect(),
        over_50: t.exceeding(50).iter().map(|r| r.name.clone()).collect(),
        notes: t.notes.clone(),
    }
}
