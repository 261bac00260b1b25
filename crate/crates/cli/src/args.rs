use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "stereo",
    version,
    about = "Voronoi stereohedra of crystallographic groups"
)]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the Voronoi neighbors of a base point and print the report as JSON.
    Facets(FacetsArgs),
    /// Facet-count bound table.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Planar groups: overlaps, influence regions and randomized probes.
    #[command(subcommand)]
    Planar(PlanarCommand),
    /// Screw-rotation orbits.
    #[command(subcommand)]
    Screw(ScrewCommand),
}

#[derive(Debug, Args)]
pub struct FacetsArgs {
    /// Named preset; exits with code 3 if the facet count differs from the preset's.
    #[arg(long, conflicts_with_all = ["group", "params", "basis", "point"])]
    pub preset: Option<String>,
    /// Group name from the catalog, e.g. P6_122.
    #[arg(long, required_unless_present = "preset")]
    pub group: Option<String>,
    /// Group parameters as `name=expr` pairs, e.g. `horiz=100,vert=12`.
    #[arg(long)]
    pub params: Option<String>,
    /// Group parameters in catalog order, e.g. `1,1,1` for P1's a,b,c.
    #[arg(long, conflicts_with = "params")]
    pub basis: Option<String>,
    /// Base point `x,y,z`; entries may be expressions such as `cos(pi/12)`.
    #[arg(long, required_unless_present = "preset")]
    pub point: Option<String>,
    /// Write the cell in OFF format to this file.
    #[arg(long)]
    pub off: Option<PathBuf>,
    /// Handling of orbit points touching the cell without a facet.
    #[arg(long, value_enum)]
    pub marginal: Option<Marginal>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Marginal {
    Reject,
    CountContacts,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Recompute every row of the bound table and the derived totals.
    Verify {
        /// Print the full verification report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the record of one group as JSON.
    Show {
        #[arg(long)]
        group: String,
    },
}

#[derive(Debug, Args)]
pub struct PlanarGroupArgs {
    /// Planar group type: p1, p1-square, p1-triangular, p2, p2-rect, p3, pg, pgg, pgg-square.
    #[arg(long = "type")]
    pub kind: String,
    /// Length of the first lattice vector.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Ratio of the second to the first lattice vector (p2-rect, pg, pgg).
    #[arg(long)]
    pub ratio: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum PlanarCommand {
    /// Count cells of the orbit of q overlapping the cell of p.
    Overlap {
        #[command(flatten)]
        group: PlanarGroupArgs,
        /// Point `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Point `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Influence region of the fundamental subdomain.
    Influence {
        #[command(flatten)]
        group: PlanarGroupArgs,
        #[arg(long, value_enum, default_value_t = InfluenceMode::Full)]
        mode: InfluenceMode,
        /// Sample points per subdomain side for `--mode witnessed`.
        #[arg(long)]
        samples: Option<usize>,
        /// Write an SVG diagram to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the full region as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Largest overlap count over seeded random point pairs.
    Probe {
        #[command(flatten)]
        group: PlanarGroupArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ProbeKind::Independent)]
        mode: ProbeKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InfluenceMode {
    /// Every tile whose extended region meets the base extended region.
    Full,
    /// Full region minus tiles excluded by a separating-bisector certificate.
    Reduced,
    /// Reduced region restricted to tiles with a sampled overlap witness.
    Witnessed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeKind {
    Independent,
    Normalizer,
}

#[derive(Debug, Subcommand)]
pub enum ScrewCommand {
    /// Check that the orbit of a helix point has exactly the neighbors g^±1..g^±k.
    Verify {
        /// Rotation order.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Helix radius.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Rise per screw step.
        #[arg(long, default_value_t = 1.0)]
        pitch: f64,
        /// Helix phase.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
    },
}
