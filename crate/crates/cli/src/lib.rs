//! Experiment driver for the `helly-lab` binary: family generators,
//! pipeline runners, CSV rows and JSON artifacts.

pub mod config;
pub mod output;
pub mod run;

use clap::Parser;

pub use config::{gen_family, ExperimentConfig, GeneratorKind};
pub use output::{fmt12, ResultRow, CSV_COLUMNS, CSV_SCHEMA_VERSION};
pub use run::{run, verify_artifacts, Command, DiameterMode, RunOutput, Stage};

#[derive(Debug, Parser)]
#[command(
    name = "helly-lab",
    version,
    about = "Quantitative fractional Helly experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}
