//! Raw command-line surface. Values stay textual here and are validated when
//! converted into a [`crate::request::RunRequest`].

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "gridmono",
    version,
    about = "Exact monopole-dimer partition functions on grid graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Comma separated side lengths, e.g. `4,2,2`.
    #[arg(long)]
    pub dims: String,
    /// free | cylindrical:<l> | toroidal | moebius | klein
    #[arg(long)]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Vertex weight.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub x: String,
    /// Axis weights a_1..a_d, comma separated. Defaults to all ones.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition function of one grid by determinant, closed form and/or enumeration.
    Compute {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        weights: WeightArgs,
        /// det | formula | enumerate | all
        #[arg(long, default_value = "all")]
        method: String,
        /// text | json | csv
        #[arg(long, default_value = "text")]
        format: String,
        /// exact | real
        #[arg(long, default_value = "exact")]
        arithmetic: String,
        /// Relative tolerance for closed form against determinant.
        #[arg(long)]
        tolerance: Option<String>,
    },
    /// Runs built-in check suites; one JSON line per case.
    Verify {
        /// small | formulas | counterexamples | relation | dimers | orientation | all (repeatable)
        #[arg(long, required = true)]
        suite: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the per-case log here instead of stdout.
        #[arg(long)]
        log: Option<String>,
    },
    /// CSV over the cross product of weight values.
    Sweep {
        #[command(flatten)]
        spec: SpecArgs,
        /// Values of x: comma separated rationals or `lo:hi:step` ranges.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        x: String,
        /// Values of the next axis weight; give once per axis. Missing axes stay at 1.
        #[arg(long, allow_hyphen_values = true)]
        a: Vec<String>,
        #[arg(long)]
        tolerance: Option<String>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Oriented graph as JSON or DOT.
    Export {
        #[command(flatten)]
        spec: SpecArgs,
        /// json | dot
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Dumps the generalised adjacency matrix, one row per line.
    Matrix {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        weights: WeightArgs,
        /// graph | kronecker
        #[arg(long, default_value = "graph")]
        builder: String,
        /// Drop the diagonal (dimer matrix).
        #[arg(long)]
        dimer: bool,
    },
    /// Lists loop-vertex configurations with their weights.
    Configs {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        weights: WeightArgs,
        /// Print at most this many configurations; the total covers all of them.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
}
