use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ablation-heat",
    version,
    about = "Transient heat conduction around a spherical ablation electrode"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the derived constants (or the full configuration with --dump).
    Params(ParamsCmd),
    /// Steady-state profile.
    Steady(SteadyCmd),
    /// Transient profile of one model over a (t, r) grid.
    Transient(TransientCmd),
    /// Shell eigenvalues, norms and expansion coefficients.
    Eigen(EigenCmd),
    /// Shell series solution (or its slowest decay rate with --decay).
    Series(SeriesCmd),
    /// Finite-difference solution, wavefront track and model comparison.
    Oracle(OracleCmd),
    /// Evaluate one special function.
    Specfun(SpecfunCmd),
    /// Run the property checks of one or all modules.
    Verify(VerifyCmd),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Configuration file with `name = value` lines.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override one parameter, e.g. `--set tau=0.5` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct TimeArgs {
    /// Explicit sample times [s], comma separated.
    #[arg(long = "t", value_delimiter = ',', value_name = "T,..")]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 11)]
    pub t_count: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub t_scale: Scale,
}

#[derive(Debug, Clone, Args)]
pub struct RadiusArgs {
    /// Explicit sample radii [m], comma separated.
    #[arg(long = "r", value_delimiter = ',', value_name = "R,..")]
    pub r: Vec<f64>,
    /// Default: r0.
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Default: r1, or 10 r0 on the unbounded medium.
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 11)]
    pub r_count: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub r_scale: Scale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    ParabolicInfinite,
    HyperbolicInfinite,
    ParabolicFinite,
    HyperbolicFinite,
    OracleParabolic,
    OracleHyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquationArg {
    Parabolic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Args)]
pub struct ParamsCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Write the configuration file instead of the derived table.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SteadyCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[command(flatten)]
    pub radii: RadiusArgs,
    /// `*-infinite` gives the unbounded steady state, anything else the shell one.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesOptions {
    /// Number of shell modes.
    #[arg(long, default_value_t = 400)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OracleOptions {
    /// Radial nodes of the finite-difference grid.
    #[arg(long, default_value_t = 491)]
    pub nr: usize,
    /// Fraction of the largest stable time step.
    #[arg(long, default_value_t = 0.95)]
    pub safety: f64,
    /// Also solve with dr/2 and Richardson-extrapolate.
    #[arg(long)]
    pub refine: bool,
    /// Keep every n-th radial node in the output.
    #[arg(long, default_value_t = 10)]
    pub r_stride: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TransientCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[command(flatten)]
    pub times: TimeArgs,
    #[command(flatten)]
    pub radii: RadiusArgs,
    /// Evaluation route of the unbounded parabolic model.
    #[arg(long, value_enum, default_value_t = ModeArg::ClosedForm)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub series: SeriesOptions,
    #[command(flatten)]
    pub oracle: OracleOptions,
}

#[derive(Debug, Clone, Args)]
pub struct EigenCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[command(flatten)]
    pub series: SeriesOptions,
    /// Model whose time factors define the coefficients' branch column.
    #[arg(long, value_enum, default_value_t = EquationArg::Hyperbolic)]
    pub equation: EquationArg,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_enum, default_value_t = EquationArg::Hyperbolic)]
    pub equation: EquationArg,
    #[command(flatten)]
    pub times: TimeArgs,
    #[command(flatten)]
    pub radii: RadiusArgs,
    #[command(flatten)]
    pub series: SeriesOptions,
    /// Print the slowest decay rate instead of the profile.
    #[arg(long)]
    pub decay: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OracleCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_enum, default_value_t = EquationArg::Hyperbolic)]
    pub equation: EquationArg,
    #[command(flatten)]
    pub times: TimeArgs,
    #[command(flatten)]
    pub oracle: OracleOptions,
    /// Write the detected wavefront track (`t,r_front`) to this file.
    #[arg(long, value_name = "PATH")]
    pub front: Option<PathBuf>,
    /// Front detection threshold (multiples of the background).
    #[arg(long, default_value_t = 10.0)]
    pub front_threshold: f64,
    /// Write `t,r,T_parabolic,T_hyperbolic,T_oracle` instead of the profile.
    #[arg(long)]
    pub comparison: bool,
    /// With --comparison: per-slice L-infinity distances go to this file.
    #[arg(long, value_name = "PATH")]
    pub linf_output: Option<PathBuf>,
    #[command(flatten)]
    pub series: SeriesOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecfunName {
    Dawson,
    DawsonDerivative,
    Si,
    Ci,
    /// M(1, 3/2, s)
    Kummer,
    S1,
    S1Ds,
    I1,
    J2,
    J2Ds,
    S2,
    S2Ds,
}

#[derive(Debug, Clone, Args)]
pub struct SpecfunCmd {
    #[command(flatten)]
    pub out: OutputArgs,
    pub name: SpecfunName,
    /// Arguments: `x` for dawson/si/ci/kummer, `s u` for s1/s2,
    /// `plus|minus s u` for i1/j2.
    #[arg(allow_hyphen_values = true, num_args = 1..=3, required = true)]
    pub args: Vec<String>,
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Params,
    Specfun,
    InfiniteParabolic,
    InfiniteHyperbolic,
    FiniteSpectral,
    FdOracle,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyCmd {
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}
