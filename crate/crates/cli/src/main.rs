//! `gammalab`: command-line access to the gamma-function verification library.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "gammalab",
    version,
    about = "Verify gamma-function identities, series and fundamental-set constructions",
    long_about = "Verify gamma-function identities, series and fundamental-set constructions.\n\n\
        Exit status is 0 when every check passes, 1 when a check fails or a numeric \
        error occurs (reported as {\"error\": kind, \"detail\": ...}), and 2 on usage errors.",
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Pass threshold; defaults to 1e-10 for identities and 1e-8 for series and quadrature
    #[arg(long, global = true, env = "GAMMALAB_TOL")]
    pub tolerance: Option<f64>,
    /// Seed for sampled grids
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Term cap for series
    #[arg(long, global = true, default_value_t = gammalab::schlomilch::DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
    /// Node cap for the explicit decomposition forest and for traces
    #[arg(long, global = true, default_value_t = gammalab::fundamental_sets::DEFAULT_NODE_BUDGET)]
    pub node_budget: usize,
    /// Recursion cap for the quarter-set tracer
    #[arg(long, global = true, default_value_t = gammalab::fundamental_sets::DEFAULT_DEPTH_CAP)]
    pub depth_cap: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Γ(z); z is RE or RE,IM
    Eval {
        #[arg(allow_hyphen_values = true, required_unless_present = "z_flag", conflicts_with = "z_flag")]
        z: Option<String>,
        #[arg(long = "z", id = "z_flag", allow_hyphen_values = true)]
        z_flag: Option<String>,
    },
    /// Check an identity on seeded sample points
    Verify {
        /// functional | reflection | duplication | mult:N | sine:K | comb | cosine:M
        #[arg(long)]
        identity: String,
        /// Sampling rectangle RE0:RE1,IM0:IM1 (identity default when omitted)
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = gammalab::identities::SAMPLE_EXCLUSION)]
        pole_exclusion: f64,
    },
    /// Schlömilch's finite formula, its generalization and the binomial corollary
    #[command(subcommand)]
    Schlomilch(SchlomilchCmd),
    /// Landau's fundamental sets and the quarter-set tracer
    #[command(subcommand)]
    Landau(LandauCmd),
    /// Count independent values among Γ(k/m), k = 1..m-1
    Stern {
        #[arg(long)]
        m: u32,
    },
    /// Closure of a point set under the affine argument maps
    Closure {
        /// Comma-separated rationals, e.g. 1/3,1/2
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        points: Vec<String>,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        max_n: u32,
    },
    /// Ramanujan's master theorem for a catalog φ: one, geom:A, exp, log1p
    Mellin {
        #[arg(long)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Rebuild Γ(z) from the strip over a Landau fundamental set
    ComplexTrace {
        /// RE,IM
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        delta: String,
        /// Include the derivation tree in the report
        #[arg(long)]
        emit_trace: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SchlomilchCmd {
    /// Closed form against the finite sum at Re z > m
    Finite {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Infinite series against the product form
    General {
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Exact binomial identity for the pair (m, l)
    Binom {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        l: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum LandauCmd {
    /// Build the fundamental set for δ = P/Q
    Construct {
        #[arg(long)]
        delta: String,
    },
    /// Rebuild Γ(x), x = P/Q in (0, 1], from the set for δ
    Trace {
        #[arg(long)]
        x: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        emit_trace: bool,
    },
    /// Rebuild Γ(x), x in (0, 1/2), from (0, 1/4] ∪ {1/3, 1}
    Quarter {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        emit_trace: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = commands::run(&cli);
    print!("{text}");
    ExitCode::from(code)
}
