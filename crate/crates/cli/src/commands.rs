use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use stereohedra::bounds::{table_verify, BoundsTable};
use stereohedra::expr;
use stereohedra::geometry::Point2;
use stereohedra::geometry::Point3;
use stereohedra::groups3d::{Catalog, GroupSpec};
use stereohedra::planar::{self, PlanarGroupSpec, PlanarType, ProbeMode};
use stereohedra::presets::{self, Preset};
use stereohedra::screw::{verify_screw_neighbors, HelixSpec};
use stereohedra::stereohedron::{
    enumerate_neighbors, export_cell, EnumerateOptions, ExportFormat, MarginalPolicy,
};

use crate::args::*;
use crate::config::Config;
use crate::error::CliError;

const DEFAULT_SAMPLES: usize = 30;

type Out<'a> = &'a mut dyn Write;

fn emit(out: Out, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(out, "{text}").map_err(CliError::failure)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::failure(format!("{}: {e}", path.display())))
}

fn catalog(cfg: &Config) -> Result<Catalog, CliError> {
    match &cfg.catalog {
        Some(p) => Ok(Catalog::load(p)?),
        None => Ok(Catalog::builtin()),
    }
}

fn bounds_table(cfg: &Config) -> Result<BoundsTable, CliError> {
    match &cfg.bounds_table {
        Some(p) => Ok(BoundsTable::load(p)?),
        None => Ok(BoundsTable::builtin()),
    }
}

fn preset(cfg: &Config, id: &str) -> Result<Preset, CliError> {
    match &cfg.presets {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::failure(format!("{}: {e}", p.display())))?;
            presets::parse(&text)?
                .into_iter()
                .find(|x| x.id == id)
                .ok_or_else(|| CliError::failure(format!("unknown preset `{id}`")))
        }
        None => Ok(presets::find(id)?),
    }
}

fn parse_point<const D: usize>(s: &str, what: &str) -> Result<[f64; D], CliError> {
    let v = expr::eval_list(s)?;
    v.try_into().map_err(|v: Vec<f64>| {
        CliError::failure(format!("{what} needs {D} coordinates, got {}", v.len()))
    })
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, CliError> {
    expr::split_top_level(s, ',')
        .into_iter()
        .filter(|kv| !kv.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                CliError::failure(format!("parameter `{kv}` is not of the form name=value"))
            })?;
            Ok((k.trim().to_string(), expr::eval_const(v)?))
        })
        .collect()
}

pub fn facets(a: &FacetsArgs, cfg: &Config, out: Out) -> Result<(), CliError> {
    let cat = catalog(cfg)?;
    let mut opts = EnumerateOptions::default();
    if let Some(n) = cfg.max_doublings {
        opts.max_doublings = n;
    }
    let (g, base, expected) = if let Some(id) = &a.preset {
        let p = preset(cfg, id)?;
        opts.marginal = p.marginal;
        let g = GroupSpec::from_catalog(&cat, &p.group, &p.params()?)?;
        (g, p.base()?, Some((p.id.clone(), p.expected_facets)))
    } else {
        let name = a.group.as_deref().unwrap_or_default();
        let entry = cat
            .get(name)
            .ok_or_else(|| CliError::failure(format!("unknown group `{name}`")))?;
        let params = match (&a.params, &a.basis) {
            (Some(p), _) => parse_params(p)?,
            (None, Some(b)) => {
                let v = expr::eval_list(b)?;
                if v.len() != entry.params.len() {
                    return Err(CliError::failure(format!(
                        "{} expects {} parameters ({}), got {}",
                        entry.name,
                        entry.params.len(),
                        entry.params.join(","),
                        v.len()
                    )));
                }
                entry.params.iter().cloned().zip(v).collect()
            }
            (None, None) => BTreeMap::new(),
        };
        opts.marginal = cfg.marginal.unwrap_or_default();
        let g = GroupSpec::from_entry(entry, &params)?;
        let [x, y, z] = parse_point::<3>(a.point.as_deref().unwrap_or_default(), "--point")?;
        (g, Point3::new(x, y, z), None)
    };
    if let Some(m) = a.marginal {
        opts.marginal = match m {
            Marginal::Reject => MarginalPolicy::Reject,
            Marginal::CountContacts => MarginalPolicy::CountContacts,
        };
    }
    let report = enumerate_neighbors(&g, &base, &opts)?;
    log::info!(
        "{}: {} facets, {} contacts, {} candidates, {} LP solves",
        report.group,
        report.facet_count,
        report.contact_count,
        report.stats.candidates,
        report.stats.lp_solves
    );
    if let Some(path) = &a.off {
        write_file(path, &export_cell(&report, ExportFormat::Off)?)?;
    }
    writeln!(out, "{}", export_cell(&report, ExportFormat::Json)?).map_err(CliError::failure)?;
    match expected {
        Some((id, n)) if n != report.facet_count => Err(CliError::PresetMismatch {
            id,
            expected: n,
            found: report.facet_count,
        }),
        _ => Ok(()),
    }
}

pub fn bounds(c: &BoundsCommand, cfg: &Config, out: Out) -> Result<(), CliError> {
    let table = bounds_table(cfg)?;
    match c {
        BoundsCommand::Verify { json } => {
            let report = table_verify(&table);
            if *json {
                emit(out, &report)?;
            } else {
                for m in &report.mismatches {
                    writeln!(
                        out,
                        "mismatch {} {}: expected {}, found {}",
                        m.name, m.field, m.expected, m.found
                    )
                    .map_err(CliError::failure)?;
                }
                for d in report.derivations.iter().filter(|d| !d.ok()) {
                    writeln!(
                        out,
                        "derivation {}: expected {}, computed {}",
                        d.label, d.expected, d.computed
                    )
                    .map_err(CliError::failure)?;
                }
                writeln!(out, "{}", report.summary()).map_err(CliError::failure)?;
            }
            if report.ok() {
                Ok(())
            } else {
                Err(CliError::failure(report.summary()))
            }
        }
        BoundsCommand::Show { group } => emit(out, table.get(group)?),
    }
}

fn planar_group(a: &PlanarGroupArgs) -> Result<PlanarGroupSpec, CliError> {
    let kind: PlanarType = a.kind.parse()?;
    Ok(PlanarGroupSpec::with_shape(kind, a.scale, a.ratio)?)
}

#[derive(Serialize)]
struct OverlapOutput {
    group: PlanarType,
    p: Point2,
    q: Point2,
    count: usize,
    overlaps: Vec<planar::Overlap>,
}

#[derive(Serialize)]
struct InfluenceSummary {
    group: PlanarType,
    mode: &'static str,
    count: usize,
    max_count: usize,
    counts_by_coset: BTreeMap<String, usize>,
    removed: usize,
}

pub fn planar(c: &PlanarCommand, cfg: &Config, out: Out) -> Result<(), CliError> {
    match c {
        PlanarCommand::Overlap { group, p, q } => {
            let g = planar_group(group)?;
            let [px, py] = parse_point::<2>(p, "--p")?;
            let [qx, qy] = parse_point::<2>(q, "--q")?;
            let (p, q) = (Point2::new(px, py), Point2::new(qx, qy));
            let overlaps = planar::overlaps(&g, &p, &q)?;
            emit(
                out,
                &OverlapOutput {
                    group: g.kind,
                    p,
                    q,
                    count: overlaps.len(),
                    overlaps,
                },
            )
        }
        PlanarCommand::Influence {
            group,
            mode,
            samples,
            svg,
            json,
        } => {
            let g = planar_group(group)?;
            let (region, label) = match mode {
                InfluenceMode::Full => (planar::influence_region(&g)?, "full"),
                InfluenceMode::Reduced => (planar::reduced_influence_region(&g)?, "reduced"),
                InfluenceMode::Witnessed => {
                    let n = samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES);
                    (planar::witnessed_influence_region(&g, n)?, "witnessed")
                }
            };
            if let Some(path) = svg {
                write_file(path, &planar::influence_svg(&region))?;
            }
            if let Some(path) = json {
                write_file(path, &planar::influence_json(&region)?)?;
            }
            emit(
                out,
                &InfluenceSummary {
                    group: g.kind,
                    mode: label,
                    count: region.members.len(),
                    max_count: region.max_count(),
                    counts_by_coset: region.counts_by_coset.clone(),
                    removed: region.removed.len(),
                },
            )
        }
        PlanarCommand::Probe {
            group,
            trials,
            seed,
            mode,
        } => {
            let g = planar_group(group)?;
            let mode = match mode {
                ProbeKind::Independent => ProbeMode::Independent,
                ProbeKind::Normalizer => ProbeMode::Normalizer,
            };
            let report = planar::randomized_bound_probe(&g, *trials, *seed, mode)?;
            if report.exceeds_cap {
                log::warn!(
                    "overlap count {} exceeds the cap {}",
                    report.max_overlap,
                    report.cap
                );
            }
            emit(out, &report)
        }
    }
}

pub fn screw(c: &ScrewCommand, out: Out) -> Result<(), CliError> {
    match c {
        ScrewCommand::Verify { k, r, pitch, alpha } => {
            let h = HelixSpec::new(*k, *pitch, *r, *alpha)?;
            let v = verify_screw_neighbors(&h)?;
            emit(out, &v)?;
            if v.pass {
                Ok(())
            } else {
                Err(CliError::failure(v.details))
            }
        }
    }
}
