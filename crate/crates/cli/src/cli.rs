use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "dmolab", version, about = "Dirac oscillator spectra, dynamics and tight-binding emulators")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Parameter file, JSON object or `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory receiving the artifacts and the manifest.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Encoding of tabular artifacts.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Validate and print the resolved parameters without computing.
    #[arg(long, global = true)]
    pub dry_run: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free oscillator in one, two or three dimensions.
    #[command(subcommand)]
    Dmo(DmoCommand),
    /// Interacting two-particle levels.
    Twoparticle(TwoParticleArgs),
    /// n-particle oscillator.
    #[command(subcommand)]
    Nbody(NbodyCommand),
    /// Isospin-extended oscillator: purity and entropy in time.
    Dynamics(DynamicsArgs),
    /// One-dimensional tight-binding chain.
    #[command(subcommand)]
    Chain(ChainCommand),
    /// Honeycomb lattice.
    #[command(subcommand)]
    Hex(HexCommand),
}

#[derive(Debug, Subcommand)]
pub enum DmoCommand {
    /// Labelled safe-zone spectrum.
    Spectrum(DmoSpectrumArgs),
    /// 3D 2×2 blocks and their eigenvalues.
    Blocks(DmoBlocksArgs),
    /// Supercharge anticommutator residuals.
    Susy(DmoSusyArgs),
    /// Foldy–Wouthuysen consistency checks.
    Fw(DmoFwArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DmoSpectrumArgs {
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 60)]
    pub cutoff: usize,
    /// Quanta kept between the reported levels and the cutoff.
    #[arg(long, default_value_t = 2)]
    pub buffer: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DmoBlocksArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,
    /// Largest total angular momentum, a half-odd number.
    #[arg(long, default_value_t = 3.5)]
    pub max_j: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DmoSusyArgs {
    #[arg(long, default_value_t = 8)]
    pub cutoff: usize,
    #[arg(long, default_value_t = 2)]
    pub buffer: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DmoFwArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 8)]
    pub cutoff: usize,
    #[arg(long, default_value_t = 2)]
    pub buffer: usize,
    /// Free-particle momenta cover [−p, p]³ on this many points per axis.
    #[arg(long, default_value_t = 2.0)]
    pub momentum_max: f64,
    #[arg(long, default_value_t = 5)]
    pub momentum_points: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TwoParticleArgs {
    #[arg(long, default_value_t = 0.1)]
    pub omega: f64,
    #[arg(long, default_value_t = 6)]
    pub max_quanta: usize,
}

#[derive(Debug, Subcommand)]
pub enum NbodyCommand {
    /// Count of constructed states annihilated by the kinetic term.
    Nest(NestArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct NestArgs {
    #[arg(long, default_value_t = 2)]
    pub particles: usize,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Comma-separated Fock cutoffs.
    #[arg(long, default_value = "4,6,8")]
    pub cutoffs: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct DynamicsArgs {
    #[command(subcommand)]
    pub command: Option<DynamicsCommand>,
    /// Without a subcommand, `dynamics` runs a scan.
    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Debug, Subcommand)]
pub enum DynamicsCommand {
    /// One trajectory: purity and entropy against time.
    Run(RunArgs),
    /// Time-averaged and minimal purity over a γ grid.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Scalar coupling A.
    #[arg(long = "A", id = "A", default_value_t = 1.0, allow_negative_numbers = true)]
    #[serde(rename = "A")]
    pub scalar: f64,
    /// σ₃-weighted coupling B.
    #[arg(long = "B", id = "B", default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(rename = "B")]
    pub weighted: f64,
    /// Isospin mixing angle of the initial state.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Oscillator quanta of the initial state.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = BranchArg::Positive)]
    pub branch: BranchArg,
    #[arg(long, default_value_t = 16)]
    pub cutoff: usize,
    /// Time horizon.
    #[arg(long = "T", id = "T", default_value_t = 200.0)]
    #[serde(rename = "T")]
    pub horizon: f64,
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long = "A", id = "A", default_value_t = 1.0, allow_negative_numbers = true)]
    #[serde(rename = "A")]
    pub scalar: f64,
    #[arg(long = "B", id = "B", default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(rename = "B")]
    pub weighted: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = BranchArg::Positive)]
    pub branch: BranchArg,
    #[arg(long, default_value_t = 16)]
    pub cutoff: usize,
    #[arg(long = "T", id = "T", default_value_t = 200.0)]
    #[serde(rename = "T")]
    pub horizon: f64,
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    /// start:stop:step, both ends included.
    #[arg(long, default_value = "0:2:0.05", allow_hyphen_values = true)]
    pub gamma_scan: String,
}

#[derive(Debug, Subcommand)]
pub enum ChainCommand {
    /// Geometry JSON of a periodic or deformed chain.
    Gen(ChainArgs),
    /// Spectrum of a generated or loaded chain.
    Diag(ChainDiagArgs),
    /// Bloch bands at the momenta of a ring.
    Dispersion(ChainArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ChainArgs {
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Lattice period λ.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub decay_length: f64,
    /// Deformation strength; 0 keeps the chain regular.
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mass_split: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub offset: f64,
    #[arg(long, default_value_t = 20)]
    pub cells: usize,
    /// Bond whose coupling stays Δ in a deformed chain.
    #[arg(long, default_value_t = 0)]
    pub origin: usize,
    /// Boundary of the regular chain.
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ChainDiagArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    /// Diagonalize this geometry JSON instead of generating one.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// Also compare this many deformed-chain levels with the square-root law.
    #[arg(long, default_value_t = 0)]
    pub levels: usize,
}

#[derive(Debug, Subcommand)]
pub enum HexCommand {
    /// Geometry JSON of a regular flake or torus.
    Gen(HexGenArgs),
    /// Geometry JSON of a deformed flake.
    Deform(HexArgs),
    /// Spectrum of a generated or loaded lattice.
    Diag(HexDiagArgs),
    /// Both bands on a square momentum grid.
    Dispersion(HexDispersionArgs),
    /// Degeneracy points and the conic form of the bands around them.
    Conic(HexArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HexArgs {
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Second-neighbour coupling Δ′.
    #[arg(long, default_value_t = 0.0)]
    pub delta2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub decay_length: f64,
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1)]
    pub radius: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mass_split: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub offset: f64,
    /// Share of the deformation carried by the b₂ bonds.
    #[arg(long, default_value_t = 0.5)]
    pub angle_split: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HexGenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub hex: HexArgs,
    /// Build an L × L torus instead of a flake when L > 0.
    #[arg(long, default_value_t = 0)]
    pub torus: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HexDiagArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub hex: HexArgs,
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// Also read the deformed-lattice levels off the core density of states.
    #[arg(long)]
    pub levels: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HexDispersionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub hex: HexArgs,
    /// Grid half-width in kx and ky.
    #[arg(long, default_value_t = 4.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}
