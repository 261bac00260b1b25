use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{overlap_count, PlanarError, PlanarGroupSpec};
use crate::geometry::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    /// `p` and `q` independent and uniform in a lattice cell.
    #[default]
    Independent,
    /// `q = n(p)` for a uniformly chosen coset representative `n` of `N0 / G0`.
    Normalizer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub group: String,
    pub mode: ProbeMode,
    pub trials: usize,
    pub seed: u64,
    /// Trials skipped because a sampled point had a non-trivial stabilizer.
    pub skipped: usize,
    pub max_overlap: usize,
    pub argmax: Option<(Point2, Point2)>,
    pub histogram: BTreeMap<usize, usize>,
    pub cap: usize,
    pub exceeds_cap: bool,
}

fn sample(g: &PlanarGroupSpec, rng: &mut ChaCha8Rng) -> Point2 {
    let [u, v] = g.lattice;
    u * rng.gen::<f64>() + v * rng.gen::<f64>()
}

/// Largest overlap count over `trials` random pairs. Trial `k` draws from
/// stream `k` of a ChaCha8 generator seeded with `seed`, so the result does
/// not depend on scheduling.
pub fn randomized_bound_probe(
    g: &PlanarGroupSpec,
    trials: usize,
    seed: u64,
    mode: ProbeMode,
) -> Result<ProbeReport, PlanarError> {
    if trials == 0 {
        return Err(PlanarError::InvalidParam(
            "trials must be at least 1".into(),
        ));
    }
    let results: Vec<Option<(usize, Point2, Point2)>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let p = sample(g, &mut rng);
            let q = match mode {
                ProbeMode::Independent => sample(g, &mut rng),
                ProbeMode::Normalizer => {
                    let c = &g.cosets[rng.gen_range(0..g.cosets.len())];
                    c.rep.apply(&p)
                }
            };
            match overlap_count(g, &p, &q) {
                Ok(n) => Ok(Some((n, p, q))),
                Err(PlanarError::Stabilizer { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_, _>>()?;
    let mut histogram = BTreeMap::new();
    let mut best: Option<(usize, Point2, Point2)> = None;
    for (n, p, q) in results.iter().flatten() {
        *histogram.entry(*n).or_insert(0) += 1;
        if best.is_none_or(|b| *n > b.0) {
            best = Some((*n, *p, *q));
        }
    }
    let max_overlap = best.map_or(0, |b| b.0);
    let cap = g.kind.overlap_cap();
    if max_overlap > 7 {
        log::info!(
            "{}: observed {max_overlap} overlapping cells, above 7",
            g.kind
        );
    }
    Ok(ProbeReport {
        group: g.kind.to_string(),
        mode,
        trials,
        seed,
        skipped: results.iter().filter(|r| r.is_none()).count(),
        max_overlap,
        argmax: best.map(|b| (b.1, b.2)),
        histogram,
        cap,
        exceeds_cap: max_overlap > cap,
    })
}
