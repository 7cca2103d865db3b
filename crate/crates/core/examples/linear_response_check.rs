//! Compares the spectral susceptibility with a time-domain estimate from a
//! weak periodic drive, and shows the mismatch growing with drive strength.
//!
//! cargo run --release --example linear_response_check

use fluxlattice::dynamics::{estimate_susceptibility, DriveSpec, OracleOptions};
use fluxlattice::network::{NetworkSpec, Topology};
use fluxlattice::qubit::QubitParams;
use fluxlattice::response::{susceptibility, ResponseProbe, DEFAULT_ETA};
use fluxlattice::spectra::diagonalize;

fn main() -> fluxlattice::Result<()> {
    let base = QubitParams::new(1.0, 0.2, 0.52)?;
    let omega = 0.1;
    for (name, topology) in [("1 qubit", Topology::isolated(1)?), ("2 qubits", Topology::linear(2, -0.2)?)] {
        let spec = NetworkSpec::new(base, topology);
        let n = spec.n_qubits();
        let h0 = spec.hamiltonian()?;
        let s = diagonalize(&h0)?;
        let chi = susceptibility(&s, &ResponseProbe::uniform(n, DEFAULT_ETA)?, &spec, omega)?;
        println!("== {name}: spectral chi = {:.6} {:+.6}i", chi.re, chi.im);
        for amp in [1e-4, 1e-3, 1e-2] {
            let drive = DriveSpec::new(amp, omega, spec.drive_operator()?)?;
            let est = estimate_susceptibility(&h0, &spec.drive_operator()?, &drive, &OracleOptions::default())?;
            println!(
                "  A = {amp:.0e}: {:.6} {:+.6}i  |rel err| = {:.2e}",
                est.re,
                est.im,
                (est - chi).norm() / chi.norm()
            );
        }
    }
    Ok(())
}
