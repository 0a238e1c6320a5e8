//! `bibnet`: build bibliographic networks, run the spectral analysis stack,
//! and export the results as CSV/JSON.

mod commands;
mod config;

use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "bibnet",
    version,
    about = "Spectral analysis of co-citation and co-authorship networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Plain-text key-value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root seed for all randomness (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 means all cores (overrides the config).
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Additional KEY=VALUE overrides mirroring the config keys; flags win.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the bibliographic tables and report row counts and anomalies.
    Ingest {
        #[command(flatten)]
        common: CommonArgs,
        /// Skip malformed rows instead of aborting.
        #[arg(long)]
        permissive: bool,
    },
    /// Run one analysis task: citee-map, trajectories, diversity, tree,
    /// ego, citer-citee, sankey, scree, or simulate.
    Run {
        task: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn resolve_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for kv in &common.set {
        let (key, value) =
            kv.split_once('=').ok_or_else(|| anyhow!("--set expects KEY=VALUE, got '{kv}'"))?;
        cfg.set(key.trim(), value)?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(workers) = common.workers {
        cfg.workers = workers;
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    cfg.validate()?;
    if cfg.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    Ok(cfg)
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Ingest { common, permissive } => resolve_config(&common).and_then(|mut cfg| {
            if permissive {
                cfg.permissive = true;
            }
            commands::cmd_ingest(&cfg)
        }),
        Command::Run { task, common } => {
            resolve_config(&common).and_then(|cfg| commands::cmd_run(&task, &cfg))
        }
    };
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
