use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use qbm_cli::config::{preset, RunConfig, FIGURES};
use qbm_cli::run::execute;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qbm",
    version,
    about = "Quantum Brownian oscillator in squeezed scalar-field baths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML run config.
    #[arg(long, required_unless_present = "figure")]
    config: Option<PathBuf>,
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Built-in figure preset instead of a config file.
    #[arg(long, conflicts_with = "config", value_parser = clap::builder::PossibleValuesParser::new(FIGURES))]
    figure: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config (sweeping if it has a [sweep] block).
    Run(RunArgs),
    /// Run a config that must carry a [sweep] block.
    Sweep(RunArgs),
    /// Print a figure preset as TOML.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(FIGURES))]
        figure: String,
    },
}

/// Input problems, reported with exit code 2.
struct ConfigError(anyhow::Error);

fn load(args: &RunArgs, need_sweep: bool) -> Result<RunConfig> {
    let (cfg, base) = match (&args.config, &args.figure) {
        (Some(path), None) => (
            RunConfig::load(path)?,
            path.parent().unwrap_or(Path::new(".")).to_path_buf(),
        ),
        (None, Some(fig)) => (preset(fig)?, PathBuf::from(".")),
        _ => bail!("give exactly one of --config and --figure"),
    };
    if need_sweep && cfg.sweep.is_none() {
        bail!("the sweep command needs a [sweep] block");
    }
    if args.threads == Some(0) {
        bail!("--threads must be at least 1");
    }
    cfg.resolve(&base)
}

fn run(args: RunArgs, need_sweep: bool) -> Result<i32, ConfigError> {
    let cfg = load(&args, need_sweep).map_err(ConfigError)?;
    let threads = args.threads.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    // only an unusable output directory gets here; point failures are in the manifest
    let manifest =
        execute(&cfg, &args.out, threads, args.figure.as_deref()).map_err(ConfigError)?;
    for f in &manifest.failures {
        let at = f
            .sweep_value
            .as_deref()
            .map(|v| format!(" ({v})"))
            .unwrap_or_default();
        eprintln!("point {}{at} failed [{:?}]: {}", f.point, f.kind, f.message);
    }
    for f in &manifest.files {
        println!("{}  {} rows", args.out.join(&f.path).display(), f.rows);
    }
    println!("{}", args.out.join("manifest.json").display());
    Ok(manifest.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(a) => run(a, false),
        Command::Sweep(a) => run(a, true),
        Command::Preset { figure } => match preset(&figure).and_then(|c| c.to_toml()) {
            Ok(t) => {
                print!("{t}");
                Ok(0)
            }
            Err(e) => Err(ConfigError(e)),
        },
    };
    match code {
        Ok(c) => ExitCode::from(c as u8),
        Err(ConfigError(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
    }
}
