//! `cubefix`: batch checks for median graphs, fixed points of finite
//! actions, and automorphisms of free groups.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubefix::catalog::FamilyName;

use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "cubefix", version, about = "Median graph, fixed point and Aut(F_n) checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Closure cap on the number of group elements.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_elements: usize,
    /// Closure cap on image word length.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_image_length: usize,
    /// Largest cube dimension to enumerate.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_dim: usize,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Via {
    Criterion,
    Direct,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the median property and count cubes.
    CheckMedian { complex: PathBuf },
    /// Common point of pairwise intersecting convex sets.
    Helly {
        complex: PathBuf,
        #[arg(long)]
        sets: PathBuf,
        /// Skip the convexity check on the input sets.
        #[arg(long)]
        unchecked: bool,
    },
    /// Find a fixed vertex of an action.
    Fix {
        action: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Criterion)]
        via: Via,
    },
    /// Check that cube stabilizers fix their cubes pointwise.
    StrongCheck { action: PathBuf },
    /// Named generating sets of Aut(F_n).
    Gens {
        #[arg(long)]
        family: FamilyName,
        #[arg(long)]
        rank: usize,
        #[arg(long, group = "mode")]
        list: bool,
        #[arg(long, group = "mode")]
        pairwise_orders: bool,
        /// Search for TARGET as a product of family members.
        #[arg(long, group = "mode", value_name = "TARGET")]
        witness: Option<String>,
        /// Word length bound for --witness.
        #[arg(long, default_value_t = 12)]
        max_length: usize,
    },
    /// Order of the group generated by automorphisms (JSON files or expressions).
    Order {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Integer matrix of an automorphism acting on Z^n.
    Abelianize {
        input: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Link and propagation cascade for an action, with declared rank n.
    Triviality {
        action: PathBuf,
        #[arg(long)]
        rank: usize,
    },
    /// Randomized Helly soundness trials on generated median graphs.
    Selfcheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match commands::dispatch(&cli) {
        Ok(checks) => RunReport::from_checks(argv, checks),
        Err(e) => RunReport::input_error(argv, e),
    };
    if cli.global.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    if cli.global.json {
        println!("{}", report.to_json());
    } else if report.exit_code == report::INPUT_ERROR {
        eprint!("{}", report.to_text());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code as u8)
}
