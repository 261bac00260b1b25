use std::fmt::Write;

use super::{NeighborReport, StereoError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Off,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = StereoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(Self::Off),
            "json" => Ok(Self::Json),
            _ => Err(StereoError::Export(format!(
                "unknown format `{s}` (expected off or json)"
            ))),
        }
    }
}

/// Serializes the cell of a report.
///
/// OFF output lists the cell vertices and its facets with counter-clockwise
/// vertex order seen from outside; JSON output is the whole report.
pub fn export_cell(report: &NeighborReport, format: ExportFormat) -> Result<String, StereoError> {
    match format {
        ExportFormat::Json => {
            serde_json::to_string_pretty(report).map_err(|e| StereoError::Export(e.to_string()))
        }
        ExportFormat::Off => {
            let cell = &report.cell;
            let faces: Vec<&Vec<usize>> = cell
                .facets
                .iter()
                .chain(&cell.box_faces)
                .map(|f| &f.vertices)
                .filter(|v| v.len() >= 3)
                .collect();
            let mut out = String::new();
            writeln!(out, "OFF").unwrap();
            writeln!(out, "{} {} 0", cell.vertices.len(), faces.len()).unwrap();
            for v in &cell.vertices {
                writeln!(out, "{} {} {}", v.x, v.y, v.z).unwrap();
            }
            for f in faces {
                write!(out, "{}", f.len()).unwrap();
                for i in f {
                    write!(out, " {i}").unwrap();
                }
                writeln!(out).unwrap();
            }
            Ok(out)
        }
    }
}

pub fn report_from_json(text: &str) -> Result<NeighborReport, StereoError> {
    serde_json::from_str(text).map_err(|e| StereoError::Export(e.to_string()))
}
