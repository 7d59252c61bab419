use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dotcavity::ode::Method;
use dotcavity::scenarios::{self, SpectrumSpec};
use dotcavity::{Error, InitialState, ScenarioConfig};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Two Förster-coupled quantum dots in a lossy microcavity.
#[derive(Parser)]
#[command(name = "dotcavity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a preset or config file and write CSV plus manifest.json.
    Simulate(SimulateArgs),
    /// Dressed-state energies of an excitation manifold versus detuning.
    Spectrum(SpectrumArgs),
    /// Resolve and check a config file without running it.
    Validate {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_name = "NAME", required_unless_present = "config", conflicts_with = "config")]
    preset: Option<String>,
    /// TOML scenario file (as written by `validate` or found in manifest.json).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// One of gg0, eg0, ge0, sym.
    #[arg(long, value_name = "TAG")]
    initial_state: Option<String>,
    /// End time in ps.
    #[arg(long, value_name = "PS")]
    t_end: Option<f64>,
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Use fixed-step RK4 with this step (ps) for bitwise-reproducible output.
    #[arg(long, value_name = "PS")]
    fixed_step: Option<f64>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    manifold: u8,
    #[arg(long, value_name = "GHZ", allow_negative_numbers = true)]
    delta_min: Option<f64>,
    #[arg(long, value_name = "GHZ", allow_negative_numbers = true)]
    delta_max: Option<f64>,
    #[arg(long, value_name = "N")]
    steps: Option<usize>,
    /// Förster coupling Γ/2π in GHz.
    #[arg(long, value_name = "GHZ", default_value_t = 0.0)]
    forster: f64,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn exit_code(err: &Error) -> u8 {
    if err.is_usage() {
        EXIT_USAGE
    } else if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_FAILURE
    }
}

fn simulate(args: SimulateArgs) -> Result<u8, Error> {
    let mut config = match (&args.preset, &args.config) {
        (_, Some(path)) => ScenarioConfig::load(path)?,
        (Some(name), None) => scenarios::preset(name)?,
        (None, None) => unreachable!("clap requires one of --preset/--config"),
    };
    if let Some(out) = args.out {
        config.output_dir = out;
    }
    if let Some(tag) = &args.initial_state {
        config.initial_state = tag.parse::<InitialState>()?;
    }
    if let Some(t) = args.t_end {
        config.t_end = t;
    }
    if let Some(n) = args.workers {
        config.workers = Some(n);
    }
    if let Some(step) = args.fixed_step {
        config.integrator.method = Method::Fixed { step };
    }

    let output = scenarios::run(&config)?;
    for run in &output.manifest.runs {
        match &run.error {
            None => println!("wrote {}", config.output_dir.join(&run.file).display()),
            Some(e) => eprintln!("failed {}: {e}", run.file),
        }
    }
    println!("wrote {}", output.manifest_path.display());
    Ok(if output.failures() > 0 { EXIT_NUMERICAL } else { 0 })
}

fn spectrum(args: SpectrumArgs) -> Result<u8, Error> {
    let mut config = scenarios::preset(&format!("spectrum{}", args.manifold))?;
    let mut spec = SpectrumSpec::new(args.manifold.into());
    spec.delta_min = args.delta_min.unwrap_or(spec.delta_min);
    spec.delta_max = args.delta_max.unwrap_or(spec.delta_max);
    spec.steps = args.steps.unwrap_or(spec.steps);
    config.spectrum = Some(spec);
    config.params.forster_over_2pi = args.forster;
    if let Some(out) = args.out {
        config.output_dir = out;
    }
    let output = scenarios::run(&config)?;
    for file in &output.files {
        println!("wrote {}", file.display());
    }
    Ok(0)
}

fn validate(path: PathBuf) -> Result<u8, Error> {
    let config = ScenarioConfig::load(&path)?;
    config.validate()?;
    let points = config.points()?;
    println!("{}: ok, {} run(s)", path.display(), if config.spectrum.is_some() { 1 } else { points.len() });
    print!("{}", config.to_toml());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Validate { config } => validate(config),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
