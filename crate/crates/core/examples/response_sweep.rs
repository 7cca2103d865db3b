//! Susceptibility of an uncoupled and a coupled linear array, with peak tables.
//!
//! cargo run --release --example response_sweep

use fluxlattice::network::{NetworkSpec, Topology};
use fluxlattice::qubit::QubitParams;
use fluxlattice::response::{linspace, sweep_frequency, ResponseProbe, DEFAULT_ETA};
use fluxlattice::spectra::diagonalize;

fn main() -> fluxlattice::Result<()> {
    let base = QubitParams::new(1.0, 0.2, 0.52)?;
    let grid = linspace(0.0, 1.0, 4001);
    let probe = ResponseProbe::uniform(5, DEFAULT_ETA)?;
    for (name, m) in [("uncoupled", -1e-9), ("coupled", -0.2)] {
        let spec = NetworkSpec::new(base, Topology::linear(5, m)?);
        let s = diagonalize(&spec.hamiltonian()?)?;
        let sweep = sweep_frequency(&s, &probe, &spec, &grid)?;
        println!("== {name} (m = {m})");
        for p in &sweep.peaks {
            let phase = sweep.samples[p.index].phase_over_pi;
            println!("  peak at {:.5}  |chi| = {:10.3}  phase/pi = {phase:+.3}", p.position, p.height);
        }
    }
    Ok(())
}
