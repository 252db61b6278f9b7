use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "swave", version, about = "Free-particle s-wave implosion experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form ⟨r⟩(τ) and ⟨p⟩(τ) of the γ = 2 packet.
    Moments(MomentsArgs),
    /// Numerical propagation of a packet, with implosion summary.
    Evolve(EvolveArgs),
    /// Negative and positive phase-space volumes of the Wigner function.
    Wigner(WignerArgs),
    /// Implosion depth of two-dimensional power packets over γ.
    SweepGamma(SweepArgs),
    /// Runs the acceptance suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Power,
    Sine,
    Displaced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cn,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum UnitsArg {
    #[default]
    Scaled,
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMethod {
    Analytic,
    Spectral,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON configuration file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (standard output if absent).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PacketArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "delta-r")]
    pub delta_r: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TimeArgs {
    #[arg(long = "tau-max")]
    pub tau_max: Option<f64>,
    /// Number of τ samples, including τ = 0.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    #[arg(long = "r-max")]
    pub r_max: Option<f64>,
    /// Number of grid points.
    #[arg(long = "points")]
    pub n: Option<usize>,
    /// Time step in natural units.
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub dim: Vec<u32>,
    #[arg(long = "delta-r")]
    pub delta_r: Option<f64>,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Explicit τ values, comma separated; overrides --tau-max/--samples.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub taus: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub units: Option<UnitsArg>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub packet: PacketArgs,
    #[arg(long)]
    pub dim: Option<u32>,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, value_enum)]
    pub units: Option<UnitsArg>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "delta-r")]
    pub delta_r: Option<f64>,
    #[arg(long)]
    pub dim: Option<u32>,
    #[arg(long = "position-nodes")]
    pub position_nodes: Option<usize>,
    #[arg(long = "momentum-nodes")]
    pub momentum_nodes: Option<usize>,
    #[arg(long = "inner-nodes")]
    pub inner_nodes: Option<usize>,
    /// Largest accepted change of V₋ or V₊ under refinement.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Packet exponents, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gammas: Vec<f64>,
    #[arg(long = "delta-r")]
    pub delta_r: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<SweepMethod>,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ValidateArgs {
    /// Criteria to run, comma separated (all if absent).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
}
