//! Command-line arguments and the resolved run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_GRID: usize = 512;
pub const DEFAULT_RESOLUTION: usize = 1024;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "gmac",
    version,
    about = "First- and second-order rate regions of the Gaussian MAC with degraded message sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity region boundary, rows in descending rho.
    Capacity,
    /// Global second-order region I(rho) + Psi^{-1}(V(rho), eps)/sqrt(n) + offset.
    Global,
    /// Traced boundary of Psi^{-1}(V(rho), eps).
    PsiInv,
    /// Local second-order region at a capacity-boundary point.
    Local,
    /// Second-order norm against the angle of approach.
    Sweep,
    /// Monte Carlo evaluation of moments and finite-blocklength bounds.
    Mc {
        #[arg(value_enum)]
        kind: McKind,
    },
    /// Single-user normal approximation n C(S) + sqrt(n V(S)) Phi^{-1}(eps) + offset, with S = --s1.
    SingleUser,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Capacity => "capacity",
            Command::Global => "global",
            Command::PsiInv => "psi-inv",
            Command::Local => "local",
            Command::Sweep => "sweep",
            Command::Mc { kind } => match kind {
                McKind::Moments => "mc moments",
                McKind::Converse => "mc converse",
                McKind::Achievability => "mc achievability",
                McKind::BerryEsseen => "mc berry-esseen",
            },
            Command::SingleUser => "single-user",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum McKind {
    /// Sample mean and covariance of A_n against the closed form.
    Moments,
    /// Converse lower bound for a representative codeword pair.
    Converse,
    /// Achievability upper bound for the i.i.d. Gaussian ensemble.
    Achievability,
    /// Quadrant probability against the Berry-Esseen envelope.
    BerryEsseen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Power of the cognitive transmitter.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub s1: f64,
    /// Power of the second transmitter.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub s2: f64,
    /// Input correlation.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub rho: f64,
    /// Comma-separated correlations (global region); overrides --rho.
    #[arg(long, global = true, value_delimiter = ',')]
    pub rho_grid: Option<Vec<f64>>,
    /// Target error probability.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub eps: f64,
    /// Blocklength.
    #[arg(long, global = true, default_value_t = 500)]
    pub n: u64,
    /// Monte Carlo trials.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: usize,
    /// RNG seed; falls back to $GMAC_SEED, then 0.
    #[arg(long, global = true, env = "GMAC_SEED")]
    pub seed: Option<u64>,
    /// Threshold slack gamma; default ln(n)/(2n).
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Third-order offset added to both coordinates (nats).
    #[arg(long, global = true, default_value_t = 0.0)]
    pub offset: f64,
    /// Number of grid points (capacity curve, sweep angles).
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Number of rays used to trace Psi^{-1}.
    #[arg(long, global = true, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Rate of the cognitive message (nats/use); default from the boundary point at --rho.
    #[arg(long, global = true)]
    pub r1: Option<f64>,
    /// Rate of the second message (nats/use).
    #[arg(long, global = true)]
    pub r2: Option<f64>,
    /// Divide Psi^{-1} coordinates by sqrt(n).
    #[arg(long, global = true)]
    pub scale_by_sqrt_n: bool,
    /// Also write raw A_n samples to this file (mc moments).
    #[arg(long, global = true)]
    pub stream: Option<PathBuf>,
}

/// Fully resolved configuration, echoed into every output header.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub s1: f64,
    pub s2: f64,
    pub rho: f64,
    pub rho_grid: Option<Vec<f64>>,
    pub eps: f64,
    pub n: u64,
    pub trials: usize,
    pub seed: u64,
    pub gamma: Option<f64>,
    pub offset: f64,
    pub grid: usize,
    pub resolution: usize,
    pub format: Format,
    pub out: Option<String>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub scale_by_sqrt_n: bool,
    pub stream: Option<String>,
}

impl RunConfig {
    pub fn resolve(command: &Command, a: &CommonArgs) -> Self {
        Self {
            command: command.name(),
            s1: a.s1,
            s2: a.s2,
            rho: a.rho,
            rho_grid: a.rho_grid.clone(),
            eps: a.eps,
            n: a.n,
            trials: a.trials,
            seed: a.seed.unwrap_or(DEFAULT_SEED),
            gamma: a.gamma,
            offset: a.offset,
            grid: a.grid,
            resolution: a.resolution,
            format: a.format,
            out: a.out.as_ref().map(|p| p.display().to_string()),
            r1: a.r1,
            r2: a.r2,
            scale_by_sqrt_n: a.scale_by_sqrt_n,
            stream: a.stream.as_ref().map(|p| p.display().to_string()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
