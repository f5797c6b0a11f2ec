//! Command-line surface.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir free energy of concentric dielectric spheres",
    args_override_self = true
)]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one configuration and print a JSON record.
    Point(PointArgs),
    /// Sweep d/a at each given t.
    SweepWidth(SweepArgs),
    /// Sweep t at each given d/a.
    SweepTemperature(SweepArgs),
    /// Sweep t at each given d/a, reporting the static fraction Y.
    YRatio(SweepArgs),
    /// Compare the two ideal-metal limits against the static closed form.
    MetalLimit(MetalArgs),
    /// Planar perpendicular reflection coefficient at small frequencies.
    PlanarR2(PlanarArgs),
    /// The t → 0 limit of βF·t by quadrature.
    ZeroT(ZeroArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Constant,
    Plasma,
    Drude,
    IdealMetal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptionArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Compensated,
    Pairwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Report {
    FreeEnergy,
    M0,
    Y,
    Energy,
    ZeroT,
    Conductivity,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Constant)]
    pub model: ModelKind,
    /// Refractive index of the constant-index model.
    #[arg(long)]
    pub n: Option<f64>,
    /// Plasma frequency; s⁻¹ when --radius is given, else units of c/a.
    #[arg(long)]
    pub omega_p: Option<f64>,
    /// Drude relaxation rate, same units as --omega-p.
    #[arg(long)]
    pub gamma_relax: Option<f64>,
    /// Ideal-metal limit order.
    #[arg(long, value_enum, default_value_t = OptionArg::A)]
    pub option: OptionArg,
    /// Inner radius a in meters; switches rates and --T to SI units.
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Reduced temperature(s) t = 2πa k_B T/(ħc), comma separated.
    #[arg(long = "t", value_delimiter = ',')]
    pub t: Vec<f64>,
    /// Temperature(s) in kelvin, comma separated; needs --radius.
    #[arg(long = "T", value_delimiter = ',')]
    pub temperature: Vec<f64>,
    /// Relative width(s) d/a, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "a_over_b")]
    pub d_over_a: Vec<f64>,
    /// Radius ratio(s) a/b, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub a_over_b: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    /// Relative truncation threshold of both sums [default: 1e-9].
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Hard cap on the multipole order l.
    #[arg(long)]
    pub l_cap: Option<u32>,
    /// Hard cap on the Matsubara index m.
    #[arg(long)]
    pub m_cap: Option<u64>,
    /// Debye expansion above this argument.
    #[arg(long)]
    pub crossover_x: Option<f64>,
    /// Debye expansion above this order.
    #[arg(long)]
    pub crossover_l: Option<u32>,
    /// Reduction used for the block totals.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Worker threads; 0 or absent uses every processor.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format [default: json for point, csv for tables].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory of cached point records.
    #[arg(long, env = "CASIMIR_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Version string mixed into cache keys.
    #[arg(long, hide = true, default_value = env!("CARGO_PKG_VERSION"))]
    pub code_version: String,
}

/// Sweep axis: an explicit list or a log-spaced range.
#[derive(Debug, Clone, Args)]
pub struct AxisArgs {
    /// Explicit sweep values, comma separated, strictly increasing.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "count"])]
    pub points: Vec<f64>,
    /// Start of a log-spaced range.
    #[arg(long, requires_all = ["to", "count"])]
    pub from: Option<f64>,
    /// End of a log-spaced range, included.
    #[arg(long, requires_all = ["from", "count"])]
    pub to: Option<f64>,
    /// Number of log-spaced values.
    #[arg(long, requires_all = ["from", "to"])]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Quantities to evaluate, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub report: Vec<Report>,
    /// Shorthand for `--report m0`.
    #[arg(long)]
    pub m0_only: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub axis: AxisArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MetalArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlanarArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Transverse wavenumber(s) in m⁻¹, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k_perp: Vec<f64>,
    /// Imaginary frequencies ω̂ in s⁻¹.
    #[command(flatten)]
    pub axis: AxisArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ZeroArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = casimir_core::thermal::ZERO_T_REL_TOL)]
    pub quad_tol: f64,
}
