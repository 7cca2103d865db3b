//! Runs a config file through the experiment layer, as the CLI does.
//!
//! cargo run --release --example run_experiment -- configs/spectrum_cross.toml /tmp/out

use std::path::PathBuf;

use fluxlattice::experiment::{run, ExperimentConfig};

fn main() -> fluxlattice::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = PathBuf::from(args.first().map_or("configs/spectrum_cross.toml", String::as_str));
    let out = PathBuf::from(args.get(1).map_or("out/example", String::as_str));
    let cfg = ExperimentConfig::load(&path)?;
    println!("{}", serde_json::to_string_pretty(&cfg.resolve()?).expect("serializable"));
    let report = run(&cfg, &out)?;
    println!("{} wrote {:?} to {}", report.experiment, report.outputs, out.display());
    println!("{}", report.summary);
    Ok(())
}
