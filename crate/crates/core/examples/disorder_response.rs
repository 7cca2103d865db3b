//! Fabrication disorder splits the single resonance of a nearly uncoupled
//! array into one line per qubit. Prints, per seed, the single-qubit gaps,
//! their closest spacing and the peaks found in |χ|.
//!
//! cargo run --release --example disorder_response -- [amplitude] [n_seeds]

use fluxlattice::network::{sample_disorder, NetworkSpec, Topology};
use fluxlattice::qubit::QubitParams;
use fluxlattice::response::{linspace, sweep_frequency, ResponseProbe, DEFAULT_ETA};
use fluxlattice::spectra::diagonalize;

fn main() -> fluxlattice::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let amplitude: f64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let n_seeds: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10);

    let base = QubitParams::new(1.0, 0.2, 0.52)?;
    let grid = linspace(0.0, 1.0, 4001);
    let probe = ResponseProbe::uniform(5, DEFAULT_ETA)?;
    for seed in 0..n_seeds {
        let spec = NetworkSpec::new(base, Topology::linear(5, -1e-6)?).with_disorder(sample_disorder(seed, amplitude, 5)?);
        let mut gaps: Vec<f64> = (0..5)
            .map(|i| 2.0 * spec.bias(i).hypot(spec.tunneling(i)))
            .collect();
        gaps.sort_by(f64::total_cmp);
        let closest = gaps.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let s = diagonalize(&spec.hamiltonian()?)?;
        let sweep = sweep_frequency(&s, &probe, &spec, &grid)?;
        let peaks: Vec<String> = sweep.peaks.iter().map(|p| format!("{:.4}", p.position)).collect();
        println!(
            "seed {seed}: {} peaks [{}]  closest gap spacing {closest:.2e}",
            peaks.len(),
            peaks.join(" ")
        );
    }
    Ok(())
}
