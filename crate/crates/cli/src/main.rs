mod commands;
mod load;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Analysis of finitely aligned k-graphs. Every command prints one JSON
/// report on stdout.
#[derive(Parser)]
#[command(name = "kgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct GraphArgs {
    /// A `.kg` file or a builtin name (see `kgraph fixtures list`).
    pub graph: String,
    /// Materialization window, e.g. `4,2`. Defaults to 3 in every color.
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Row-finiteness, sources, local convexity and finite alignment.
    Check(GraphArgs),
    /// Minimal common extensions of two paths.
    Mce {
        #[command(flatten)]
        g: GraphArgs,
        lambda: String,
        mu: String,
    },
    /// Finite exhaustive sets at a vertex.
    Fe {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long)]
        vertex: String,
        /// Decide exhaustiveness of this `;`-separated family instead of
        /// enumerating the minimal ones.
        #[arg(long)]
        family: Option<String>,
        /// Degree cap on the members of enumerated sets.
        #[arg(long)]
        cap: Option<String>,
        /// Exploration bound. Defaults to the window.
        #[arg(long)]
        bound: Option<String>,
    },
    /// Boundary-path and `Λ^{≤∞}` membership of a path, or all boundary
    /// paths of a finite acyclic graph.
    Boundary {
        #[command(flatten)]
        g: GraphArgs,
        /// A word, `word~D` for a windowed path or `prefix|cycle`.
        path: Option<String>,
        #[arg(long)]
        cap: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Basic open sets of the path space.
    #[command(subcommand)]
    Topology(Topology),
    /// The desourcification window.
    Desource {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long)]
        guard: Option<String>,
        /// Run the property checks on the window.
        #[arg(long)]
        check: bool,
        /// Compare with the head construction of a 1-graph.
        #[arg(long)]
        iso_heads: bool,
        /// Write the window as a `.kg` file.
        #[arg(long)]
        kg_out: Option<String>,
    },
    /// The boundary-path representation.
    Rep {
        #[command(flatten)]
        g: GraphArgs,
        /// Comma-separated subset of ck, diag, spectrum, diagram.
        #[arg(long, default_value = "ck")]
        verify: String,
        /// Largest family size for the diag checks.
        #[arg(long, default_value_t = 4)]
        max_family: usize,
        #[arg(long)]
        guard: Option<String>,
        /// Write the generator matrices as dense text.
        #[arg(long)]
        dump: Option<String>,
    },
    /// Graphviz rendering of a graph or of its desourcification window.
    ExportDot {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long)]
        desource: bool,
        #[arg(long)]
        guard: Option<String>,
    },
    /// Builtin and random graphs as `.kg` text.
    #[command(subcommand)]
    Fixtures(Fixtures),
}

#[derive(Subcommand)]
pub enum Topology {
    /// A basic set around a path inside a given one.
    Refine {
        #[command(flatten)]
        g: GraphArgs,
        #[arg(long)]
        path: String,
        #[arg(long)]
        mu: String,
        /// `;`-separated extensions of `mu` to exclude.
        #[arg(long, default_value = "")]
        exclude: String,
    },
    /// Disjoint basic sets around two distinct paths.
    Separate {
        #[command(flatten)]
        g: GraphArgs,
        first: String,
        second: String,
    },
    /// The finite shadow of convergence of a sequence.
    Converge {
        #[command(flatten)]
        g: GraphArgs,
        /// `,`-separated terms.
        #[arg(long)]
        seq: String,
        #[arg(long)]
        target: String,
        /// `,`-separated basic sets `mu/g1;g2`. Defaults to the cylinders of
        /// the prefixes of the target inside the window.
        #[arg(long)]
        sets: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum Fixtures {
    List,
    /// Print a builtin as `.kg` text.
    Show(GraphArgs),
    /// Print a seeded random graph as `.kg` text.
    Random {
        /// dag (1-graph), cycle (1-graph) or product (2-graph).
        #[arg(long, default_value = "product")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 0.45)]
        density: f64,
        /// Product graphs only: random squares and a removed down-set.
        #[arg(long)]
        twist: bool,
        #[arg(long)]
        restrict: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::error_code(&e))
        }
    }
}
