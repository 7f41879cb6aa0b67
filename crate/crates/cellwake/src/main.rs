use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cellwake::error::Error;
use cellwake::experiment::{
    apply_setting, list_presets, parse_config, preset, run_experiment, write_outputs,
    EstimatorChoice, ExperimentSpec, PRESET_NAMES,
};

#[derive(Parser)]
#[command(
    name = "cellwake",
    about = "Activation and uplink-coverage experiments for cellular IoT networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named preset or a key=value config file.
    Run {
        /// Preset name (see list-presets) or path to a config file.
        spec: String,
        /// Inline overrides, e.g. trials=20000 lambda_b=5e-5.
        #[arg(value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Master seed; reruns with the same seed give identical CSVs.
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo trials per sweep point.
        #[arg(long)]
        trials: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = "runs")]
        out: PathBuf,
        /// Estimator selection: analytic, mc or both.
        #[arg(long)]
        estimators: Option<String>,
        /// Write only the CSV (no plot script or metadata).
        #[arg(long)]
        csv_only: bool,
    },
    /// List the built-in experiment presets.
    ListPresets,
    /// Parse and validate a config file without running it.
    Validate {
        /// Path to the config file.
        config: PathBuf,
    },
}

fn load_spec(name_or_path: &str) -> Result<ExperimentSpec, Error> {
    if PRESET_NAMES.contains(&name_or_path) {
        preset(name_or_path)
    } else {
        let text = std::fs::read_to_string(name_or_path).map_err(|e| {
            Error::Usage(format!(
                "'{name_or_path}' is neither a preset nor a readable config file: {e}"
            ))
        })?;
        parse_config(&text)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::ListPresets => {
            for (name, description) in list_presets() {
                println!("{name:<16} {description}");
            }
            Ok(())
        }
        Command::Validate { config } => {
            let text = std::fs::read_to_string(&config)?;
            let spec = parse_config(&text)?;
            spec.validate()?;
            println!(
                "ok: {} ({} sweep points)",
                spec.name,
                spec.axis_values.len()
            );
            Ok(())
        }
        Command::Run {
            spec,
            overrides,
            seed,
            trials,
            out,
            estimators,
            csv_only,
        } => {
            let mut spec = load_spec(&spec)?;
            for pair in &overrides {
                let (key, value) = pair.split_once('=').ok_or_else(|| {
                    Error::Usage(format!("override '{pair}' is not of the form key=value"))
                })?;
                apply_setting(&mut spec, key.trim(), value.trim())?;
            }
            if let Some(seed) = seed {
                spec.master_seed = seed;
            }
            if let Some(trials) = trials {
                spec.trials = trials;
            }
            if let Some(est) = estimators {
                spec.estimators = EstimatorChoice::parse(&est)?;
            }
            spec.validate()?;
            eprintln!(
                "running {} ({} sweep points, seed {}, {} trials)",
                spec.name,
                spec.axis_values.len(),
                spec.master_seed,
                spec.trials
            );
            let table = run_experiment(&spec)?;
            let failed = table.rows.iter().filter(|r| r.failure.is_some()).count();
            let written = write_outputs(&table, &spec, &out, csv_only)?;
            for path in &written {
                println!("{}", path.display());
            }
            eprintln!(
                "done: {} rows ({failed} failed) in {} ms",
                table.rows.len(),
                table.wall_ms
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Usage(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
