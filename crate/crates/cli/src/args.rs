use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ssatc", version, about = "Stochastic SAT with S-resolution proofs and interpolation-based MDP analysis")]
pub struct Cli {
    /// Worker threads for independent per-depth solves (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    JsonLines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dc {
    True,
    False,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute Pr of an SDIMACS formula.
    Solve(SolveArgs),
    /// Check an S-resolution trace.
    CheckProof {
        trace: PathBuf,
    },
    /// Bound the maximal probability of reaching the target and compare it with θ.
    Reach(ReachArgs),
    /// Bound the minimal probability of stabilizing in the region and compare it with θ.
    Stability(StabilityArgs),
    /// Ground-truth values by explicit expansion (SDIMACS) or value iteration (.mdp).
    Oracle(OracleArgs),
    /// Print a seeded random instance.
    Gen {
        #[command(subcommand)]
        what: GenArgs,
    },
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub input: PathBuf,
    /// Write the derivation trace to this file.
    #[arg(long)]
    pub proof: Option<PathBuf>,
    /// Interpolant of satisfied leaves; --interpolant needs an `a` line in the input.
    #[arg(long, value_enum, default_value_t = Dc::True)]
    pub dc: Dc,
    /// Compute a generalized interpolant over the input's partition.
    #[arg(long)]
    pub interpolant: bool,
    /// Re-derive the value with the certifying engine and check its trace.
    #[arg(long)]
    pub certify: bool,
}

#[derive(Args, Debug)]
pub struct Common {
    pub model: PathBuf,
    #[arg(long)]
    pub theta: String,
    /// Depth of the backward interpolation query.
    #[arg(long, default_value_t = 3)]
    pub j: usize,
    #[arg(long, default_value_t = 20)]
    pub kmax: usize,
    /// Fixpoint iteration budget (default: number of states + 1).
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Write the bound sequence(s) as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReachArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Use these states as the kernel instead of computing one, e.g. "s" or "q1,q2".
    #[arg(long)]
    pub kernel: Option<String>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub input: PathBuf,
    /// Horizon for MDP inputs.
    #[arg(long, default_value_t = 20)]
    pub kmax: usize,
}

#[derive(Subcommand, Debug)]
pub enum GenArgs {
    Ssat {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        vars: u32,
        #[arg(long, default_value_t = 12)]
        clauses: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        /// Also emit a random A/B split.
        #[arg(long)]
        partition: bool,
    },
    Mdp {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        actions: usize,
    },
}
