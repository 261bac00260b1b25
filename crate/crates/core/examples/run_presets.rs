use std::time::Instant;

fn main() {
    for p in stereohedra::presets::builtin() {
        let t = Instant::now();
        match p.run() {
            Ok(r) => println!(
                "{}: {} facets ({} contacts), expected {}, min slack {:.4}, rounds {}, candidates {}, {:.2?}",
                p.id, r.facet_count, r.contact_count, p.expected_facets, r.min_slack, r.stats.rounds, r.stats.candidates, t.elapsed()
            ),
            Err(e) => println!("{}: error {e}", p.id),
        }
    }
}
