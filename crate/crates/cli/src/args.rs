use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "mec",
    version,
    about = "Maximum-information Bernoulli couplings under rate and classification budgets"
)]
pub struct Cli {
    /// File of `key = value` lines supplying default flag values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a single instance.
    Solve(SolveArgs),
    /// Sweep the rate or classification budget.
    Sweep(SweepArgs),
    /// Compare the closed form with the brute-force oracles.
    Oracle(OracleArgs),
    /// Monte Carlo run of the optimal (or a given) mixture.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    Rate,
    Cclass,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// P(X = 1).
    #[arg(long)]
    pub qx: Option<f64>,
    /// Target P(Y = 1).
    #[arg(long)]
    pub qy: Option<f64>,
    /// Rate budget in bits.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Label noise P(S1 = 1); used together with --cclass.
    #[arg(long)]
    pub qs1: Option<f64>,
    /// Classification budget in bits; used together with --qs1.
    #[arg(long)]
    pub cclass: Option<f64>,
    /// Accept probabilities in (1/2, 1) by relabeling symbols.
    #[arg(long)]
    pub reflect: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output. Relative paths are
    /// resolved against `MEC_OUTPUT_DIR` when it is set.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long = "var", value_enum, default_value = "rate")]
    pub var: SweepVar,
    #[arg(long = "from")]
    pub start: f64,
    #[arg(long = "to")]
    pub stop: f64,
    #[arg(long)]
    pub steps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct OracleArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Points in the theta grid of the unconstrained coupling oracle.
    #[arg(long, default_value_t = 10_001)]
    pub grid: usize,
    #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(args_override_self = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Mixture weights `p1,p2,p3,p4` to simulate instead of the solver's optimum.
    #[arg(long, value_delimiter = ',', conflicts_with = "constant_map")]
    pub mixture: Option<Vec<f64>>,
    /// Simulate the constant-0 map alone.
    #[arg(long)]
    pub constant_map: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}
