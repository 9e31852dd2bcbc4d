use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Quantum backflow for free particles and N-boson product states.
#[derive(Debug, Parser)]
#[command(name = "backflow", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Half-line probabilities, the current at the origin and P_minus for each N.
    Series {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Particle numbers to tabulate, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        n_list: Vec<u32>,
    },
    /// Maximal backflow Delta_N,max with its lower and upper bounds.
    Deltamax {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
    },
    /// Probability current at the origin over time.
    Current {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the invariant checks and report PASS/FAIL per group.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// `builtin:bm94` or the path of a JSON state file.
    #[arg(long, default_value = "builtin:bm94")]
    pub state: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-12, allow_hyphen_values = true)]
    pub abs_tol: f64,
    /// Below this time the built-in state uses its small-time series.
    #[arg(long, default_value_t = backflow_core::propagator::DEFAULT_SWITCH_TIME, allow_hyphen_values = true)]
    pub switch_time: f64,
    #[arg(long, default_value_t = backflow_core::propagator::DEFAULT_SERIES_ORDER)]
    pub series_order: u32,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub t_max: f64,
    /// Grid points on [0, t_max], endpoints included.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}
