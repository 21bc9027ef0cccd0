//! Command-line surface. Every argument struct serializes into the report so
//! a run can be reproduced from its output alone.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "dirlap",
    version,
    about = "Non-symmetric Laplacians on directed weighted graphs",
    long_about = "Non-symmetric Laplacians on directed weighted graphs.\n\n\
        Exit codes: 0 hypotheses or bounds verified, 1 verified false, 2 input error, 3 numeric failure.\n\
        DIRLAP_THREADS caps the number of worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    /// Emit a generated graph as graph JSON.
    Gen(GenArgs),
    /// Kirchhoff balance, asymmetry and gamma constants on growing balls; exit 0 iff balance holds.
    Check(CheckArgs),
    /// Numerical-range boundary and sector check; exit 0 iff the sector bound holds.
    Spectrum(SpectrumArgs),
    /// Cheeger constant and the spectral lower bound it implies (needs m = 1).
    Cheeger(CheegerArgs),
    /// Heat-semigroup norms on a time grid against min(1, e^(-lambda0 t)).
    Evolve(EvolveArgs),
    /// Aggregate every probe into an m-accretiveness certificate.
    Certify(CertifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ladder,
    Tree,
    Random,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureArg {
    /// m(x_n) = m(y_n) = sqrt(n), m(x_0) = 1.
    #[value(name = "sqrt_n")]
    SqrtN,
    /// m = 1 everywhere.
    Unit,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GeneratorArgs {
    /// Ladder depth.
    #[arg(long = "N", value_name = "N", default_value_t = 20)]
    pub ladder_depth: usize,
    /// Ladder rung parameter k >= 0.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Ladder vertex measure.
    #[arg(long, value_enum, default_value_t = MeasureArg::SqrtN)]
    pub measure: MeasureArg,
    /// Tree depth.
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Tree children per vertex at each level, comma separated [default: level + 3].
    #[arg(long, value_delimiter = ',')]
    pub branching: Option<Vec<usize>>,
    /// Random graph vertex count.
    #[arg(long = "n", value_name = "n", default_value_t = 12)]
    pub vertices: usize,
    /// Seed for the random graph and for random initial states.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random graph extra cycles per vertex.
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[command(flatten)]
    pub params: GeneratorArgs,
    /// Write the graph here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["graph", "family"])))]
pub struct SourceArgs {
    /// Graph JSON file.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Generate the graph instead of reading one.
    #[arg(long = "gen", value_enum, value_name = "FAMILY")]
    pub family: Option<Family>,
    #[command(flatten)]
    pub params: GeneratorArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TruncationArgs {
    /// Root vertex id [default: first vertex].
    #[arg(long)]
    pub root: Option<String>,
    /// Ball radius [default: eccentricity of the root for check, one less otherwise].
    #[arg(long)]
    pub radius: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Dump the truncated Laplacian as a dense CSV.
    #[arg(long, value_name = "FILE")]
    pub dump_csv: Option<PathBuf>,
    /// Dump the truncated Laplacian as `row col value` triplets.
    #[arg(long, value_name = "FILE")]
    pub dump_coo: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub trunc: TruncationArgs,
    /// Absolute Kirchhoff tolerance [default: 0 for integer weights, else 1e-12 relative].
    #[arg(long)]
    pub kirchhoff_tol: Option<f64>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub trunc: TruncationArgs,
    /// Angles in the boundary sweep.
    #[arg(long, default_value_t = 360)]
    pub angles: usize,
    /// Boundary points as CSV (angle, re, im).
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Asymmetry constant C in the sector bound [default: computed on the ball].
    #[arg(long)]
    pub asymmetry: Option<f64>,
    /// Vertex for the fitted sector [default: -4/C].
    #[arg(long, allow_hyphen_values = true)]
    pub sector_vertex: Option<f64>,
    /// Sector slack relative to max(1, |z|).
    #[arg(long, default_value_t = dirlap_core::spectral::numrange::SECTOR_TOL)]
    pub sector_tol: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CheegerArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub trunc: TruncationArgs,
    /// Hosts up to this many vertices are searched exhaustively; larger ones use nested balls.
    #[arg(long, default_value_t = 20)]
    pub exhaustive_limit: usize,
    /// Slack in min Re W >= lambda0.
    #[arg(long, default_value_t = dirlap_core::spectral::cheeger::CHEEGER_SLACK)]
    pub slack: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub trunc: TruncationArgs,
    /// Time grid `start:stop:step` or a single time.
    #[arg(long = "t", value_name = "GRID", default_value = "0:5:0.5")]
    pub times: String,
    /// Decay rate in the bound min(1, e^(-lambda0 t)) [default: 0].
    #[arg(long)]
    pub lambda0: Option<f64>,
    /// Number of random interior-supported initial states.
    #[arg(long, default_value_t = 2)]
    pub states: usize,
    /// Trace as CSV (t, opnorm, bound, state norms).
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Slack in the norm bound.
    #[arg(long, default_value_t = dirlap_core::heat::NORM_SLACK)]
    pub slack: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub trunc: TruncationArgs,
    /// Angles in the boundary sweep.
    #[arg(long, default_value_t = 360)]
    pub angles: usize,
    /// Hosts up to this many vertices get an exhaustive Cheeger search.
    #[arg(long, default_value_t = 20)]
    pub exhaustive_limit: usize,
    /// Vertex for the fitted sector [default: -4/C].
    #[arg(long, allow_hyphen_values = true)]
    pub sector_vertex: Option<f64>,
}
