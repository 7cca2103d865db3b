//! Train a five-qubit frequency-encoded reservoir on a Mackey–Glass series and
//! forecast it autonomously.
//!
//! cargo run --release --example reservoir_forecast -- [cross|linear] [delta] [l_r] [offset]

use std::time::Instant;

use fluxlattice::mackey_glass::{integrate, normalize, MgConfig};
use fluxlattice::network::{inhomogeneous_deltas, NetworkSpec, Topology};
use fluxlattice::qrc::{run_forecast, FeatureMap, ForecastProtocol, ReservoirConfig};
use fluxlattice::qubit::QubitParams;

fn main() -> fluxlattice::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let topology = match args.first().map(String::as_str) {
        Some("linear") => Topology::linear(5, -0.2)?,
        _ => Topology::cross(-0.2)?,
    };
    let delta: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let l_r: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(400);
    let offset: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0);

    let spec = NetworkSpec::new(QubitParams::new(1.0, 0.2, 0.45)?, topology)
        .with_deltas(inhomogeneous_deltas(0.2, delta, 5)?)
        .with_drive_site(5)?;
    let cfg = ReservoirConfig { l_r, ..ReservoirConfig::default() };
    let protocol = ForecastProtocol::default();

    let len = protocol.window_len(cfg.washout);
    let (series, _) = normalize(&integrate(&MgConfig::default(), offset + len)?)?;
    let window = &series[offset..offset + len];

    let start = Instant::now();
    let map = FeatureMap::new(&spec, &cfg)?;
    let out = run_forecast(&map, &protocol, window, false)?;
    let train_rmse = (out
        .fitted
        .iter()
        .zip(&window[cfg.washout + 1..])
        .map(|(p, y)| (p - y).powi(2))
        .sum::<f64>()
        / out.fitted.len() as f64)
        .sqrt();

    println!("delta = {delta}, l_r = {l_r}, offset = {offset}");
    println!("one-step training rmse  {train_rmse:.3e}");
    println!("sigma of window         {:.4}", out.sigma);
    println!("valid prediction time   {} / {}", out.vpt, protocol.horizon);
    println!("wall time               {:.1?}", start.elapsed());
    println!();
    println!("{:>5} {:>9} {:>9}", "step", "truth", "forecast");
    for k in (0..out.predictions.len()).step_by(25) {
        println!("{k:>5} {:>9.4} {:>9.4}", out.truth[k], out.predictions[k]);
    }
    Ok(())
}
