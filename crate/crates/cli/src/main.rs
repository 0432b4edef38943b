use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dtc_cli::error::{CliError, CliResult};
use dtc_cli::presets::{preset, PRESETS};
use dtc_cli::run::{execute, resolve_output_dir, sweep_only, tomography_only};
use dtc_cli::spec::{load_spec, ExperimentSpec};
use dtc_core::pipeline::Engine;

#[derive(Parser)]
#[command(name = "dtc", version, about = "Floquet spin-chain experiments: simulate, add noise, mitigate, analyze")]
struct Cli {
    /// Worker threads for trajectories and sweep points (results do not depend on it).
    #[arg(long, global = true, env = "DTC_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment spec.
    Run {
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a named preset, or print its spec with --print.
    Preset {
        name: String,
        /// Print the experiment spec as JSON instead of running it.
        #[arg(long)]
        print: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// List the presets.
    Presets,
    /// Run only the epsilon sweep of a spec or preset.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run only the process tomography of a spec or preset.
    Tomo {
        #[command(flatten)]
        source: Source,
        /// Shots per setting; overrides the spec file.
        #[arg(long, conflicts_with = "exact")]
        shots: Option<u64>,
        /// Use exact outcome probabilities.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Spec file.
    spec: Option<PathBuf>,
    /// Preset name.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct Overrides {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Root seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_parser = parse_engine)]
    engine: Option<Engine>,
    #[arg(long)]
    epsilon: Option<f64>,
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    match s {
        "statevector" => Ok(Engine::Statevector),
        "fermion" => Ok(Engine::Fermion),
        "auto" => Ok(Engine::Auto),
        _ => Err(format!("unknown engine `{s}` (statevector, fermion, auto)")),
    }
}

impl Overrides {
    fn apply(&self, spec: &mut ExperimentSpec) {
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(s) = self.steps {
            spec.steps = s;
        }
        if let Some(e) = self.engine {
            spec.engine = e;
        }
        if let Some(e) = self.epsilon {
            spec.model.epsilon = e;
        }
    }
}

fn load(source: &Source) -> CliResult<ExperimentSpec> {
    match (&source.spec, &source.preset) {
        (Some(path), _) => load_spec(path),
        (None, Some(name)) => preset(name),
        (None, None) => Err(CliError::Usage("give a spec file or --preset".into())),
    }
}

fn run_spec(mut spec: ExperimentSpec, overrides: &Overrides) -> CliResult<()> {
    overrides.apply(&mut spec);
    spec.validate()?;
    let dir = resolve_output_dir(&spec, overrides.out.as_deref());
    let report = execute(&spec, &dir)?;
    println!("wrote {} files to {}", report.files.len(), report.output_dir.display());
    if let Some(r) = &report.summary.realization {
        for d in &r.diagnostics {
            eprintln!("note: {d}");
        }
    }
    if let Some(eps) = report.summary.phase_diagram.as_ref().and_then(|p| p.epsilon_c) {
        println!("epsilon_c = {eps}");
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
    }
    match cli.command {
        Command::Run { spec, overrides } => run_spec(load_spec(&spec)?, &overrides),
        Command::Preset { name, print, overrides } => {
            let mut spec = preset(&name)?;
            if print {
                overrides.apply(&mut spec);
                println!("{}", serde_json::to_string_pretty(&spec).expect("spec serializes"));
                return Ok(());
            }
            run_spec(spec, &overrides)
        }
        Command::Presets => {
            for (name, about) in PRESETS {
                println!("{name:<16} {about}");
            }
            Ok(())
        }
        Command::Sweep { source, overrides } => run_spec(sweep_only(load(&source)?)?, &overrides),
        Command::Tomo { source, shots, exact, overrides } => {
            let mut spec = tomography_only(load(&source)?)?;
            if let Some(t) = spec.tomography.as_mut() {
                if exact {
                    t.shots = None;
                } else if shots.is_some() {
                    t.shots = shots;
                }
            }
            run_spec(spec, &overrides)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
