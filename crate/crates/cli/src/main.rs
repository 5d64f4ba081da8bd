//! Experiment harness for teleporting walks on sparse random digraphs.
//!
//! Every run reads one JSON config, derives all randomness from `--seed`,
//! writes its artifacts into `--out`, and finishes with a `manifest.json`
//! recording the config hash, seed, versions, and runtime. Outputs are
//! byte-identical across thread counts.

mod commands;
mod config;

use std::fs::{self, File};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "surfmix", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment description (see the README for the schema).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; every random object in the run derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for Monte Carlo reductions; 0 keeps the default pool.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Sample a graph from the configured degree sequence and persist it.
    Generate,
    /// Distance-to-stationarity profile on an explicit time grid.
    Profile,
    /// Rescaled mixing sweep compared against the limiting profile shape.
    Scenario,
    /// Spread diagnostics for restart measures.
    Widespread,
    /// Near-singularity of the walk law against its stationary start.
    Singularity,
    /// Monte Carlo checks of the branching-tree moment laws.
    Martingale,
    /// Weight-floored exploration tree, reverse neighborhood, and census.
    Tree,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Profile => "profile",
            Command::Scenario => "scenario",
            Command::Widespread => "widespread",
            Command::Singularity => "singularity",
            Command::Martingale => "martingale",
            Command::Tree => "tree",
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_hash: &'a str,
    seed: u64,
    threads: usize,
    package_version: &'a str,
    outputs: &'a [String],
    runtime_seconds: f64,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("sizing the worker pool")?;
    }
    let config_path = cli
        .config
        .as_deref()
        .context("--config <file.json> is required")?;
    let loaded = config::load_config(config_path)?;
    fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;

    let started = Instant::now();
    let ctx = commands::RunContext {
        config: &loaded.config,
        hash: &loaded.hash,
        seed: cli.seed,
        out: &cli.out,
        command: cli.command.name(),
    };
    let outputs = match cli.command {
        Command::Generate => commands::generate(&ctx),
        Command::Profile => commands::profile(&ctx),
        Command::Scenario => commands::scenario(&ctx),
        Command::Widespread => commands::widespread(&ctx),
        Command::Singularity => commands::singularity(&ctx),
        Command::Martingale => commands::martingale(&ctx),
        Command::Tree => commands::tree(&ctx),
    }?;

    let manifest = Manifest {
        command: cli.command.name(),
        config_hash: &loaded.hash,
        seed: cli.seed,
        threads: cli.threads,
        package_version: env!("CARGO_PKG_VERSION"),
        outputs: &outputs,
        runtime_seconds: started.elapsed().as_secs_f64(),
    };
    let file = File::create(cli.out.join("manifest.json"))?;
    serde_json::to_writer_pretty(&file, &manifest)?;

    println!(
        "{}: wrote {} + manifest.json to {}",
        cli.command.name(),
        outputs.join(", "),
        cli.out.display()
    );
    Ok(())
}
