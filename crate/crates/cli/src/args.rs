use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub const DEFAULT_VS_LIST: &str = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0,1.1,1.2,1.3";

/// Per-unit circle-diagram analysis and dual P/Q ride-through dispatch for
/// large loads behind a substation reactance.
#[derive(Debug, Parser)]
#[command(name = "vrt", version, allow_negative_numbers = true)]
pub struct Cli {
    /// JSON run configuration; defaults apply to anything omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print machine-readable JSON to standard output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Source-voltage thresholds for the configured substation.
    Thresholds,
    /// Dispatch decision at one or more source voltages.
    Dispatch {
        /// Source voltage(s) in pu, comma-separated.
        #[arg(long, required = true, value_delimiter = ',', num_args = 1..)]
        vs: Vec<f64>,
        /// Case-2 reactive-power selection fraction in [0, 1].
        #[arg(long)]
        fraction: Option<f64>,
    },
    /// Power-circle family with the S_max circle (CSV + SVG).
    Circles {
        /// Source voltages in pu, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_VS_LIST)]
        vs_list: Vec<f64>,
        /// Points per locus, uniform in power angle.
        #[arg(long, default_value_t = 91)]
        points: usize,
    },
    /// Apparent power needed at the load versus source voltage (CSV + SVG).
    Scurve {
        #[arg(long, default_value_t = 0.1)]
        vs_lo: f64,
        #[arg(long, default_value_t = 1.8)]
        vs_hi: f64,
        /// Number of source-voltage samples.
        #[arg(short = 'n', long = "samples", default_value_t = 171)]
        n: usize,
    },
    /// Replay source-voltage traces (CSV `t_s,vs_pu`) through the ride-through model.
    Simulate {
        #[arg(required = true, value_name = "TRACE")]
        traces: Vec<PathBuf>,
        /// Model the load without any non-grid compensation.
        #[arg(long)]
        no_compensation: bool,
    },
}
