use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "homeopat", version, about = "Homeostasis subnetworks, pattern networks and homeostasis patterns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "text",
            Format::Dot => "dot",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Args)]
pub struct NetArg {
    /// Network document (JSON)
    #[arg(long, value_name = "PATH")]
    pub net: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simple, super-simple, appendage and super-appendage nodes
    Classify {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Homeostasis subnetworks and their block index sets
    Subnets {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The homeostasis pattern network
    PatternNet {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// One homeostasis pattern per homeostasis type
    Patterns {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also compare the theorem engine with the reposition engine
        #[arg(long)]
        check_engines: bool,
    },
    /// Exact oracle agreement over sampled Jacobians
    Verify {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Continue equilibria of a synthesized admissible ODE and detect homeostasis
    Simulate {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Input interval as `a:b`
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 401)]
        steps: usize,
        /// Give this node a self-term whose diagonal entry crosses zero mid-range
        #[arg(long, value_name = "NODE")]
        tune: Option<String>,
        /// Self-gain to decay ratio used with --tune
        #[arg(long, default_value_t = 1.2)]
        ratio: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Write the event list as JSON to this file
        #[arg(long, value_name = "FILE")]
        events: Option<PathBuf>,
    },
    /// Write DOT files for the network and its pattern network
    ExportDot {
        #[command(flatten)]
        net: NetArg,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out_dir: PathBuf,
    },
}
