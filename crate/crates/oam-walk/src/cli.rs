//! Batch driver. `run` executes one configuration given by flags or a JSON
//! `--config` file; `sweep` evaluates a JSON array of configurations, in
//! parallel when the `parallel` feature is enabled, with deterministic output.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 runtime I/O failure.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::batch;
use crate::config::{CoinSpec, ConfigError, Format, Mode, RunConfig};
use crate::output::{self, RunOutput};
use crate::ring::DetectorConfig;

#[derive(Parser, Debug)]
#[command(name = "oam-walk", version, about = "Quantum walk in the polarization/OAM space of a light beam")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation and write its spectra or report to a file.
    Run(RunArgs),
    /// Run every configuration in a JSON array, each writing its own output.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON file carrying a full RunConfig; mutually exclusive with --mode.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// ideal | jones | ring | coherent | hom
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    steps: Option<u32>,
    /// Half-integer q-plate charge; the shift per step is 2q.
    #[arg(long)]
    q: Option<f64>,
    /// symmetric | up | down | random, or four comma-separated reals.
    #[arg(long)]
    coin: Option<String>,
    /// Quarter-wave-plate axis angle in radians (default π/4, the Hadamard).
    #[arg(long)]
    qwp_angle: Option<f64>,
    /// Beam-splitter intensity transmission (ring mode).
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    window_center: Option<i64>,
    #[arg(long)]
    window_halfwidth: Option<u32>,
    #[arg(long)]
    odd_even_split: bool,
    /// Coherent amplitude "re,im" (coherent mode).
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// JSON file with an array of RunConfig objects.
    #[arg(long, value_name = "FILE")]
    configs: PathBuf,
}

enum CliFailure {
    Config(String),
    Io(String),
}

impl From<ConfigError> for CliFailure {
    fn from(e: ConfigError) -> Self {
        Self::Config(e.to_string())
    }
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, CliFailure> {
        if let Some(path) = &self.config {
            if self.mode.is_some() {
                return Err(CliFailure::Config(
                    "--config and --mode are mutually exclusive".to_string(),
                ));
            }
            let text = fs::read_to_string(path)
                .map_err(|e| CliFailure::Io(format!("reading {}: {e}", path.display())))?;
            return serde_json::from_str(&text)
                .map_err(|e| CliFailure::Config(format!("in {}: {e}", path.display())));
        }

        let mode = self
            .mode
            .as_deref()
            .ok_or_else(|| CliFailure::Config("--mode (or --config) is required".to_string()))?;
        let mode = Mode::parse(mode)?;
        let coin = match self.coin.as_deref() {
            Some(s) => CoinSpec::parse(s)?,
            None => CoinSpec::default(),
        };
        let alpha = match self.alpha.as_deref() {
            Some(s) => {
                let parts: Vec<f64> = s
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| {
                        CliFailure::Config(format!("alpha must be `re,im`, got `{s}`"))
                    })?;
                let arr: [f64; 2] = parts
                    .try_into()
                    .map_err(|_| CliFailure::Config(format!("alpha must be `re,im`, got `{s}`")))?;
                Some(arr)
            }
            None => None,
        };
        let detector = if self.window_center.is_some()
            || self.window_halfwidth.is_some()
            || self.odd_even_split
        {
            let defaults = DetectorConfig::default();
            Some(DetectorConfig {
                window_center: self.window_center.unwrap_or(defaults.window_center),
                window_halfwidth: self.window_halfwidth.unwrap_or(defaults.window_halfwidth),
                odd_even_split: self.odd_even_split,
            })
        } else {
            None
        };
        let output = self
            .output
            .ok_or_else(|| CliFailure::Config("--output is required".to_string()))?;
        let format = match self.format.as_deref() {
            Some(s) => Format::parse(s)?,
            None => Format::Csv,
        };
        Ok(RunConfig {
            mode,
            steps: self.steps.unwrap_or(0),
            q: self.q.unwrap_or(0.5),
            coin,
            qwp_angle: self.qwp_angle.unwrap_or(std::f64::consts::FRAC_PI_4),
            mu: self.mu,
            detector,
            alpha,
            output,
            format,
            seed: self.seed,
        })
    }
}

fn execute_config(config: &RunConfig) -> Result<RunOutput, CliFailure> {
    let plan = config.plan()?;
    output::execute(&plan).map_err(|e| CliFailure::Config(e.to_string()))
}

fn write_config_output(config: &RunConfig, out: &RunOutput) -> Result<(), CliFailure> {
    let rendered = output::render(out, config.format);
    fs::write(&config.output, rendered)
        .map_err(|e| CliFailure::Io(format!("writing {}: {e}", config.output.display())))
}

fn run_one(args: RunArgs) -> Result<(), CliFailure> {
    let config = args.into_config()?;
    let out = execute_config(&config)?;
    write_config_output(&config, &out)?;
    println!("wrote {}", config.output.display());
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), CliFailure> {
    let text = fs::read_to_string(&args.configs)
        .map_err(|e| CliFailure::Io(format!("reading {}: {e}", args.configs.display())))?;
    let configs: Vec<RunConfig> = serde_json::from_str(&text)
        .map_err(|e| CliFailure::Config(format!("in {}: {e}", args.configs.display())))?;

    // Validate everything before computing anything.
    for (i, config) in configs.iter().enumerate() {
        config
            .plan()
            .map_err(|e| CliFailure::Config(format!("config #{i}: {e}")))?;
    }

    // Independent configs evaluate concurrently; files are written afterwards
    // in input order so the merged result is order-independent.
    let results = batch::map_items(&configs, execute_config);
    for (config, result) in configs.iter().zip(results) {
        let out = result?;
        write_config_output(config, &out)?;
        println!("wrote {}", config.output.display());
    }
    Ok(())
}

/// Entry point shared by the binary and the CLI tests.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(args) => run_one(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match result {
        Ok(()) => 0,
        Err(CliFailure::Config(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliFailure::Io(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
