use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand};
use vscsim::{load_config, preset, resolve_out_dir, run_to_dir, RunConfig, PRESETS};

#[derive(Parser)]
#[command(name = "vscsim", version, about = "Secrecy-capacity experiments for vehicular networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        config: Option<PathBuf>,
        #[arg(long = "config", value_name = "FILE", conflicts_with = "config")]
        config_flag: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides the config and VSCSIM_OUT.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named preset.
    Preset {
        name: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    ListPresets,
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn env_out() -> Option<PathBuf> {
    std::env::var_os("VSCSIM_OUT").filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn launch(mut cfg: RunConfig, seed: Option<u64>, out: Option<PathBuf>) -> Result<()> {
    if let Some(s) = seed {
        cfg.apply_seed(s);
    }
    let dir = resolve_out_dir(out.as_deref(), &cfg, env_out().as_deref());
    for path in run_to_dir(&cfg, &dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, config_flag, seed, out } => {
            let Some(path) = config.or(config_flag) else {
                bail!("cli-io: run needs a config file");
            };
            launch(load_config(&path)?, seed, out)
        }
        Command::Preset { name, seed, out } => {
            let cfg = preset(&name).ok_or_else(|| anyhow!("cli-io: unknown preset {name:?}; see list-presets"))?;
            launch(cfg, seed, out)
        }
        Command::ListPresets => {
            for p in PRESETS {
                println!("{:<16} {}", p.name, p.about);
            }
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            println!("ok: {} ({})", cfg.name, cfg.experiment.kind());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
