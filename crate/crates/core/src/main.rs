use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fluxlattice::experiment::{self, ExperimentConfig, ExperimentKind};
use fluxlattice::Error;

#[derive(Parser)]
#[command(name = "fluxlattice", version, about = "Flux-qubit network spectra, response and reservoir computing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config (TOML or JSON, or a previous manifest.json).
    Run {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
    /// List experiment names.
    ListExperiments,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config_error() {
        2
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        3
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListExperiments => {
            for kind in ExperimentKind::ALL {
                println!("{:<18} {}", kind.name(), kind.description());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match ExperimentConfig::load(&config).and_then(|c| c.resolve()) {
            Ok(cfg) => {
                println!("{}: ok ({})", config.display(), cfg.experiment);
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Run {
            config,
            output_dir,
            seed,
            threads,
        } => {
            if let Some(t) = threads {
                if t == 0 {
                    return fail(Error::Config("--threads must be positive".into()));
                }
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                    return fail(Error::Config(format!("thread pool: {e}")));
                }
            }
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let dir = experiment::output_dir(&cfg, output_dir);
            match experiment::run(&cfg, &dir) {
                Ok(report) => {
                    println!("{} -> {}", report.experiment, dir.display());
                    for name in &report.outputs {
                        println!("  {name}");
                    }
                    println!("  {}", experiment::MANIFEST);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
