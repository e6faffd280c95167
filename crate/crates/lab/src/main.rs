use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gausson_lab::config::{ConfigError, Observable, SweepConfig};
use gausson_lab::emit::{emit, EmitError, Format};
use gausson_lab::presets;
use gausson_lab::sweep::{run_sweep, RunError};

#[derive(Parser)]
#[command(name = "gausson-lab", version, about = "Squeezed-light sweeps through coupled waveguide arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write its dataset.
    Run(RunArgs),
    /// List built-in presets.
    Presets,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON config. With --preset, its fields override the preset's.
    #[arg(long, required_unless_present = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the --out extension, else csv.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Add Fock-space cross-check columns.
    #[arg(long)]
    verify_oracle: bool,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => c.into(),
            e @ RunError::Numerical { .. } => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<EmitError> for Failure {
    fn from(e: EmitError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(args: &RunArgs) -> Result<SweepConfig, Failure> {
    let text = match &args.config {
        Some(p) => Some(
            std::fs::read_to_string(p).map_err(|e| Failure::Config(format!("cannot read {}: {e}", p.display())))?,
        ),
        None => None,
    };
    let mut config = match (&args.preset, text) {
        (Some(name), text) => {
            let base = presets::preset(name).ok_or_else(|| {
                Failure::Config(format!("unknown preset `{name}` (known: {})", presets::NAMES.join(", ")))
            })?;
            match text {
                Some(t) => base.overlay(&t)?,
                None => base,
            }
        }
        (None, Some(t)) => SweepConfig::from_json(&t)?,
        (None, None) => return Err(Failure::Config("one of --config or --preset is required".into())),
    };
    if let Some(v) = args.start {
        config.sweep.start = v;
    }
    if let Some(v) = args.stop {
        config.sweep.stop = v;
    }
    if let Some(v) = args.steps {
        config.sweep.steps = v;
    }
    if args.verify_oracle && !config.wants(Observable::OracleCheck) {
        config.outputs.push(Observable::OracleCheck);
    }
    config.validate()?;
    Ok(config)
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let config = load(&args)?;
    let dataset = run_sweep(&config)?;
    let format = match (args.format, &args.out) {
        (Some(FormatArg::Csv), _) => Format::Csv,
        (Some(FormatArg::Json), _) => Format::Json,
        (None, Some(p)) => Format::from_path(p),
        (None, None) => Format::Csv,
    };
    emit(&dataset, format, args.out.as_deref())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Presets => {
            for name in presets::NAMES {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(Failure::Config(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            Err(Failure::Numerical(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        },
    }
}
