//! Command-line front end.

mod commands;
pub mod manifest;
pub mod output;
mod plot;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

pub use commands::{parse_values, Status};
pub use output::{format_number, Format, Table};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "polariton",
    version,
    about = "Disorder-renormalized exciton-polariton dispersion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in parameter sets.
    Presets,
    /// Complex branch energies E(q).
    Solve(SweepArgs),
    /// Group velocities and wave-vector broadening.
    Gv(SweepArgs),
    /// Lower-branch velocity renormalization over (σ/Ω_R, q).
    Map(MapArgs),
    /// Run the reference-implementation checks.
    Verify {
        /// erfcx | integral | derivative | perturbative | all
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Render a solve, gv or map output directory as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// perovskite | bodipy-bsw
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub preset: Option<String>,
    /// key = value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Disorder width(s) in eV: a list `a,b,c` or a grid `min:max:count`
    #[arg(long, conflicts_with = "sigma_ratio", allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Disorder width(s) as σ/Ω_R: a list or a grid `min:max:count`
    #[arg(long, allow_hyphen_values = true)]
    pub sigma_ratio: Option<String>,
    /// Wave-vector grid `min:max:count` in μm⁻¹
    #[arg(long)]
    pub q: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    /// csv | json
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Accepted for interface stability; nothing here is random.
    #[arg(long)]
    pub seedless: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// LP | UP | both
    #[arg(long, default_value = "both")]
    pub branch: String,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// fractional-slowdown | paper-exact
    #[arg(long, default_value = "fractional-slowdown")]
    pub metric_mode: String,
    /// Iso-line `field=level` (metric or dq_over_q); repeatable
    #[arg(long)]
    pub contour: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Output directory of a solve, gv or map run
    pub input: PathBuf,
    /// SVG file to write
    #[arg(long)]
    pub out: PathBuf,
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Presets => commands::presets(&mut std::io::stdout()),
        Command::Solve(a) => commands::solve(a),
        Command::Gv(a) => commands::gv(a),
        Command::Map(a) => commands::map(a),
        Command::Verify { suite } => commands::verify(suite, &mut std::io::stdout()),
        Command::Plot(a) => plot::plot(&a.input, &a.out),
    }
}
