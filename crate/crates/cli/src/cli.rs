//! Command-line surface. Each subcommand's arguments double as its job config.

use std::path::PathBuf;

use ahg_core::MultiIndex;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::AxisSpec;
use crate::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "ahg", version, about = "Anisotropic Hermite-Gauss functions: evaluation, transforms, Wigner distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one mode on a tensor grid.
    EvalGrid(EvalGridArgs),
    /// Closed-form LCT / Fourier / FrFT / Laplace transform of one mode on a grid.
    Transform(TransformArgs),
    /// Wigner-Ville distribution of a mode expansion on a phase-space grid.
    Wvd(WvdArgs),
    /// Project a function onto the modes of a given anisotropy.
    Expand(ExpandArgs),
    /// Run verification suites against the numerical oracles.
    Verify(VerifyArgs),
}

fn parse_degree(s: &str) -> Result<MultiIndex, String> {
    s.parse().map_err(|e: ahg_core::Error| e.to_string())
}

fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    s.parse().map_err(|e: crate::error::CliError| e.to_string())
}

#[derive(Debug, Args)]
pub struct EvalGridArgs {
    /// Anisotropy matrix: a JSON file or inline JSON `{"n":..,"re":..,"im":..}`.
    #[arg(long)]
    pub theta: String,
    /// Mode degree, e.g. `2,1`.
    #[arg(long, value_parser = parse_degree)]
    pub degree: MultiIndex,
    /// Evaluate the dual mode instead.
    #[arg(long)]
    pub dual: bool,
    /// One `min:max:count` per axis, in axis order.
    #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_axis)]
    pub grid: Vec<AxisSpec>,
    /// Output CSV (standard output when omitted or `-`).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CalibrationArg {
    Auto,
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub theta: String,
    #[arg(long, value_parser = parse_degree)]
    pub degree: MultiIndex,
    /// `ft`, `frft:<gamma>` or `laplace`.
    #[arg(long, conflicts_with = "abcd", required_unless_present = "abcd")]
    pub kind: Option<String>,
    /// LCT matrix as `a,b,c,d` (real) or `are,aim,bre,bim,cre,cim,dre,dim`.
    #[arg(long, allow_hyphen_values = true)]
    pub abcd: Option<String>,
    /// Only require invertibility of Σ and Ξ rather than Re Σ ≻ 0, Re Ξ ≻ 0.
    #[arg(long)]
    pub relaxed: bool,
    /// Phase calibration against the numeric transform (`--abcd` only).
    #[arg(long, value_enum, default_value = "auto")]
    pub calibrate: CalibrationArg,
    /// One `min:max:count` per axis of ζ.
    #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_axis)]
    pub grid: Vec<AxisSpec>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Metadata JSON (Σ, Ξ, C, prefactor). Defaults to `<output>.json` when writing to a file.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WvdArgs {
    #[arg(long)]
    pub theta: String,
    /// Coefficients: a JSON file or inline JSON `{"2,1": [re, im], ...}`.
    #[arg(long, conflicts_with = "degree", required_unless_present = "degree")]
    pub coeffs: Option<String>,
    /// Shorthand for a single mode with coefficient 1.
    #[arg(long, value_parser = parse_degree)]
    pub degree: Option<MultiIndex>,
    /// One `min:max:count` per axis of r.
    #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_axis)]
    pub grid: Vec<AxisSpec>,
    /// One `min:max:count` per axis of ζ.
    #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_axis)]
    pub zeta_grid: Vec<AxisSpec>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long)]
    pub theta: String,
    /// `gaussian`, `mode:<ν>` or `shifted-gaussian:<s1,...,sn>`.
    #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
    pub builtin: Option<String>,
    /// CSV of `r1,...,rn,re,im` rows on a tensor grid.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub max_order: u32,
    /// Quadrature nodes per axis.
    #[arg(long, default_value_t = 48)]
    pub nodes: usize,
    /// Output JSON (standard output when omitted or `-`).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Restrict to one dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Override the suite's maximum mode degree.
    #[arg(long)]
    pub max_order: Option<u32>,
    /// Replace every tolerance in the suite.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the random sample points.
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
}
