use std::fmt::Write;

use super::{InfluenceRegion, SubdomainLabel};
use crate::geometry::Point2;

pub fn influence_json(r: &InfluenceRegion) -> Result<String, serde_json::Error> {
    serde_json::to_string_pretty(r)
}

const PALETTE: [&str; 8] = [
    "#ffffff", "#444444", "#8fb4d9", "#d98f8f", "#a6d98f", "#d9c78f", "#b48fd9", "#8fd9cf",
];

/// SVG drawing of the members (filled by coset), removed members (hatched
/// grey), the extended region outline and the base subdomain.
pub fn influence_svg(r: &InfluenceRegion) -> String {
    let all: Vec<&Point2> = r
        .members
        .iter()
        .chain(&r.removed)
        .flat_map(|m| m.polygon.iter())
        .chain(r.extended.pieces.iter().flatten())
        .collect();
    let (mut lo, mut hi) = (
        Point2::repeat(f64::INFINITY),
        Point2::repeat(f64::NEG_INFINITY),
    );
    for p in &all {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let span = (hi - lo).max().max(1e-12);
    let scale = 560.0 / span;
    let map = |p: &Point2| ((p.x - lo.x) * scale + 20.0, (hi.y - p.y) * scale + 20.0);
    let path = |poly: &[Point2]| {
        poly.iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let labels: Vec<&String> = r.counts_by_coset.keys().collect();
    let colour = |m: &SubdomainLabel| {
        let k = labels.iter().position(|l| **l == m.coset).unwrap_or(0);
        PALETTE[k % PALETTE.len()]
    };
    let w = (hi.x - lo.x) * scale + 40.0;
    let h = (hi.y - lo.y) * scale + 40.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    for m in &r.members {
        let (cx, cy) = map(&m.centroid());
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" stroke="black" stroke-width="0.8"/><text x="{cx:.3}" y="{cy:.3}" font-size="10" text-anchor="middle" fill="red">{}</text>"#,
            path(&m.polygon),
            colour(m),
            m.coset
        );
    }
    for m in &r.removed {
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="grey" fill-opacity="0.6" stroke="grey" stroke-dasharray="3,2"/>"#,
            path(&m.polygon)
        );
    }
    for p in &r.extended.pieces {
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="none" stroke="blue" stroke-width="0.4"/>"#,
            path(p)
        );
    }
    let _ = writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2.5"/>"#,
        path(&r.base_subdomain.polygon)
    );
    s.push_str("</svg>\n");
    s
}
