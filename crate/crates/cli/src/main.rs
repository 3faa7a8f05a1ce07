//! Command-line front end for designing exploration paths and running
//! seeded channel-power/energy experiments.
//!
//! Subcommands:
//! * `optimize` — design the path for the configured family and write
//!   `path.json` + `knots.csv`.
//! * `simulate` — run the Monte Carlo experiment and write `trials.csv`
//!   + `summary.json`.
//! * `sweep --axis <name> --values <v1,v2,…>` — run one experiment per
//!   axis value and write long-form `sweep.csv`.
//! * `validate-config` — parse, validate, and echo the canonical config.
//!
//! Exit codes: 0 success, 2 configuration error, 1 runtime error. All
//! randomness flows from the master seed; outputs are byte-identical
//! across reruns and worker-thread counts.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cmda_core::geometry::{PathCurve, PathRecord};
use cmda_core::sim::{
    build_path, monte_carlo, sweep as run_sweep, write_sweep_csv, write_trials_csv,
    CmdaSimulation, PathFamily, SweepAxis, SweepValue,
};

use config::{ConfigError, ExperimentConfig, ResolvedExperiment};

#[derive(Parser)]
#[command(
    name = "cmda",
    version,
    about = "Design minimum-correlation exploration paths and evaluate channel power \
             and mechanical energy by seeded simulation"
)]
struct Cli {
    /// Experiment configuration (JSON). Defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trial count (overrides the config).
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Output directory (overrides the config).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design the configured path and write path.json + knots.csv.
    Optimize,
    /// Run the Monte Carlo experiment and write trials.csv + summary.json.
    Simulate,
    /// Run one experiment per axis value and write sweep.csv.
    Sweep {
        /// One of: path_length, delta, snr_db, d_radius, path_family.
        #[arg(long)]
        axis: String,
        /// Comma-separated values for the axis.
        #[arg(long)]
        values: String,
    },
    /// Parse and validate the config, echoing its canonical form.
    ValidateConfig,
}

/// Failure modes with distinct exit codes.
enum CliError {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<cmda_core::Error> for CliError {
    fn from(e: cmda_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn load_experiment(cli: &Cli) -> Result<ResolvedExperiment, CliError> {
    let config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let mut resolved = config.resolve()?;
    if let Some(seed) = cli.seed {
        resolved.master_seed = seed;
        // The annealing seed follows the master seed unless the config
        // pinned it explicitly.
        if config.annealing.seed.is_none() {
            resolved.spec.annealing.seed = seed;
        }
    }
    if let Some(trials) = cli.trials {
        if trials == 0 {
            return Err(CliError::Config("trials must be ≥ 1".into()));
        }
        resolved.trials = trials;
    }
    if let Some(out) = &cli.out {
        resolved.output_dir = out.clone();
    }
    Ok(resolved)
}

fn ensure_output_dir(dir: &PathBuf) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::ValidateConfig => {
            let config = match &cli.config {
                Some(path) => ExperimentConfig::load(path)?,
                None => ExperimentConfig::default(),
            };
            config.resolve()?;
            let canonical = serde_json::to_string_pretty(&config)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            println!("{canonical}");
            Ok(())
        }
        Command::Optimize => cmd_optimize(cli),
        Command::Simulate => cmd_simulate(cli),
        Command::Sweep { axis, values } => cmd_sweep(cli, axis, values),
    }
}

fn cmd_optimize(cli: &Cli) -> Result<(), CliError> {
    let experiment = load_experiment(cli)?;
    let spec = &experiment.spec;
    // A missing input record is a configuration problem, not a runtime one.
    if let PathFamily::File(path) = &spec.family {
        if !path.exists() {
            return Err(CliError::Config(format!(
                "path file {} does not exist",
                path.display()
            )));
        }
    }
    let built = build_path(spec)?;

    let record = match &built.curve {
        PathCurve::Spline(s) => PathRecord::from_spline(s, spec.wavelength, built.report.clone()),
        PathCurve::Circle(c) => PathRecord::from_circle(c, spec.wavelength),
    };

    ensure_output_dir(&experiment.output_dir)?;
    let json_path = experiment.output_dir.join("path.json");
    let csv_path = experiment.output_dir.join("knots.csv");
    record.write_json(&json_path)?;
    record.write_knots_csv(&csv_path)?;

    println!("family: {}", family_name(&spec.family));
    println!("L_p: {} m", record.design_length_m);
    println!("L_p': {} m", record.arc_length_m);
    match &built.report {
        Some(report) => {
            println!("cost: {}", report.cost);
            println!("collinear cost: {}", report.collinear_cost);
            let regime = if report.restart_of_best.is_none() {
                "analytic: straight line"
            } else {
                "annealed"
            };
            println!("regime: {regime}");
        }
        None => println!("regime: analytic benchmark shape"),
    }
    println!("wrote {} and {}", json_path.display(), csv_path.display());
    Ok(())
}

/// Summary document emitted next to the per-trial table.
#[derive(Serialize)]
struct SummaryDocument {
    schema: u32,
    family: String,
    path_length_m: f64,
    arc_length_m: f64,
    m_samples: usize,
    trials: u64,
    master_seed: u64,
    mean_power: f64,
    stderr_power: f64,
    mean_energy: f64,
    stderr_energy: f64,
}

fn cmd_simulate(cli: &Cli) -> Result<(), CliError> {
    let experiment = load_experiment(cli)?;
    let spec = &experiment.spec;
    if let PathFamily::File(path) = &spec.family {
        if !path.exists() {
            return Err(CliError::Config(format!(
                "path file {} does not exist",
                path.display()
            )));
        }
    }
    let built = build_path(spec)?;
    let sim = CmdaSimulation::new(&built.curve, spec)?;
    let run = monte_carlo(|s| sim.run_trial(s), experiment.trials, experiment.master_seed)?;

    ensure_output_dir(&experiment.output_dir)?;
    let trials_path = experiment.output_dir.join("trials.csv");
    write_trials_csv(&trials_path, &run.trials)?;

    let summary = SummaryDocument {
        schema: 1,
        family: family_name(&spec.family).to_string(),
        path_length_m: spec.path_length,
        arc_length_m: built.curve.total_length(),
        m_samples: sim.sample_count(),
        trials: run.summary.trials,
        master_seed: experiment.master_seed,
        mean_power: run.summary.mean_power,
        stderr_power: run.summary.stderr_power,
        mean_energy: run.summary.mean_energy,
        stderr_energy: run.summary.stderr_energy,
    };
    let summary_path = experiment.output_dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(&summary_path, text + "\n")
        .map_err(|e| CliError::Runtime(e.to_string()))?;

    println!(
        "{} samples, {} trials: mean power {} (stderr {}), mean energy {} J (stderr {})",
        summary.m_samples,
        summary.trials,
        summary.mean_power,
        summary.stderr_power,
        summary.mean_energy,
        summary.stderr_energy
    );
    println!("wrote {} and {}", trials_path.display(), summary_path.display());
    Ok(())
}

fn cmd_sweep(cli: &Cli, axis: &str, values: &str) -> Result<(), CliError> {
    let experiment = load_experiment(cli)?;
    let axis: SweepAxis = axis.parse().map_err(|e: cmda_core::Error| {
        CliError::Config(e.to_string())
    })?;
    let tokens: Vec<&str> =
        values.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if tokens.is_empty() {
        return Err(CliError::Config("no sweep values given".into()));
    }
    let parsed: Vec<SweepValue> = tokens
        .iter()
        .map(|t| axis.parse_value(t))
        .collect::<Result<_, _>>()
        .map_err(|e: cmda_core::Error| CliError::Config(e.to_string()))?;

    let rows = run_sweep(
        &experiment.spec,
        axis,
        &parsed,
        experiment.trials,
        experiment.master_seed,
    )?;

    ensure_output_dir(&experiment.output_dir)?;
    let sweep_path = experiment.output_dir.join("sweep.csv");
    write_sweep_csv(&sweep_path, &rows)?;

    for row in &rows {
        println!(
            "{} = {}: mean power {} (stderr {}), mean energy {} J, M = {}",
            row.axis,
            row.value,
            row.summary.mean_power,
            row.summary.stderr_power,
            row.summary.mean_energy,
            row.m_samples
        );
    }
    println!("wrote {}", sweep_path.display());
    Ok(())
}

fn family_name(family: &PathFamily) -> &'static str {
    match family {
        PathFamily::Mcp => "mcp",
        PathFamily::Linear => "linear",
        PathFamily::Circular => "circular",
        PathFamily::File(_) => "file",
    }
}
