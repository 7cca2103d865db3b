//! Mackey–Glass series: integration, normalization and a coarse plot.
//!
//! cargo run --release --example mackey_glass

use fluxlattice::mackey_glass::{integrate, normalize, MgConfig};

fn main() -> fluxlattice::Result<()> {
    let cfg = MgConfig::default();
    let raw = integrate(&cfg, 200)?;
    let (y, norm) = normalize(&raw)?;
    println!("range [{:.4}, {:.4}], step {:.3}", norm.min, norm.max, cfg.step());
    for (k, v) in y.iter().enumerate().step_by(2) {
        let bar = "#".repeat((v * 60.0).round() as usize);
        println!("{:7.1} {:.4} {bar}", cfg.sample_time(k), raw[k]);
    }
    Ok(())
}
