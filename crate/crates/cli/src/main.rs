use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use giant_routing::runner::{
    raw_config_from_text, resolve_config, run_preset, run_scenario, write_error_record, write_outputs, OutputFormat,
    PresetOptions, RawIntegrator, RawOutput, RunOutcome, Task, PRESETS,
};
use giant_routing::Error;

#[derive(Parser)]
#[command(
    name = "giant-route",
    version,
    about = "Photon routing by a driven giant atom in synthetic frequency lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file (a run manifest is accepted too)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Output format, overriding the config
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Integrator step in units of 1/J, overriding the config
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Treat unknown or unused config keys as errors
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a Gaussian wave packet and report routing coefficients
    Evolve,
    /// Closed-form stationary scattering amplitudes
    Scatter,
    /// Sweep one parameter (analytic or wave-packet)
    Sweep,
    /// Catch a photon between the coupling sites and release it
    CatchRelease,
    /// Run a named scenario: fig2a, fig2b, fig3, fig4a, fig4b, appC
    Preset { name: String },
}

impl Command {
    fn task(&self) -> Option<Task> {
        match self {
            Self::Evolve => Some(Task::Evolve),
            Self::Scatter => Some(Task::Scatter),
            Self::Sweep => Some(Task::Sweep),
            Self::CatchRelease => Some(Task::CatchRelease),
            Self::Preset { .. } => None,
        }
    }
}

/// An unreadable config file is a configuration error, not an I/O failure.
fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))
}

fn run_task(task: Task, common: &Common) -> Result<(RunOutcome, OutputFormat), Error> {
    let path = common.config.as_deref().ok_or_else(|| Error::config("--config", "required for this command"))?;
    let (mut raw, unknown) = raw_config_from_text(&read(path)?)?;
    raw.task = Some(task);
    if let Some(dt) = common.dt {
        raw.integrator.get_or_insert_with(RawIntegrator::default).dt = Some(dt);
    }
    if let Some(format) = common.format {
        raw.output.get_or_insert_with(RawOutput::default).format = Some(format.into());
    }
    let parsed = resolve_config(raw, unknown, common.strict)?;
    let mut outcome = run_scenario(&parsed.config)?;
    for w in parsed.warnings {
        if !outcome.manifest.warnings.contains(&w) {
            outcome.manifest.warnings.push(w);
        }
    }
    Ok((outcome, parsed.config.format))
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, Error> {
    let common = &cli.common;
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(Error::config("--threads", "must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::config("--threads", e.to_string()))?;
    }
    let (mut outcome, format) = match (&cli.command, cli.command.task()) {
        (Command::Preset { name }, _) => {
            if !PRESETS.contains(&name.as_str()) {
                return Err(Error::config(
                    "preset",
                    format!("unknown preset `{name}`; expected one of {}", PRESETS.join(", ")),
                ));
            }
            if common.config.is_some() {
                eprintln!("warning: --config is ignored by presets");
            }
            if let Some(dt) = common.dt {
                if !(dt.is_finite() && dt > 0.0) {
                    return Err(Error::config("--dt", "must be > 0"));
                }
            }
            let outcome = run_preset(name, &PresetOptions { dt: common.dt })?;
            (outcome, common.format.map(Into::into).unwrap_or_default())
        }
        (_, Some(task)) => run_task(task, common)?,
        (_, None) => unreachable!("every non-preset command maps to a task"),
    };
    for w in &outcome.manifest.warnings {
        eprintln!("warning: {w}");
    }
    write_outputs(&mut outcome, &common.out, format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Err(write_err) = write_error_record(&cli.common.out, &e) {
                eprintln!("error: could not write error record: {write_err}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
