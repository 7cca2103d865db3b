//! Weakly driven cross network: ⟨σ_z⟩ of each qubit after one period of the
//! slowest drive, across the reservoir's frequency band.
//!
//! cargo run --release --example driven_scan

use std::f64::consts::PI;

use fluxlattice::dynamics::driven_observable_scan;
use fluxlattice::network::{inhomogeneous_deltas, NetworkSpec, Topology};
use fluxlattice::qubit::QubitParams;
use fluxlattice::response::linspace;

fn main() -> fluxlattice::Result<()> {
    let spec = NetworkSpec::new(QubitParams::new(1.0, 0.2, 0.45)?, Topology::cross(-0.2)?)
        .with_deltas(inhomogeneous_deltas(0.2, 0.1, 5)?)
        .with_drive_site(5)?;
    let grid = linspace(0.2, 0.6, 21);
    let rows = driven_observable_scan(&spec, &grid, 2.0 * PI / 0.2, 1e-3, None)?;
    println!("omega   <sz_1>      <sz_2>      <sz_3>      <sz_4>      <sz_5>");
    for (omega, row) in grid.iter().zip(&rows) {
        let cols: Vec<String> = row.iter().map(|v| format!("{v:+.7}")).collect();
        println!("{omega:.2}  {}", cols.join(" "));
    }
    Ok(())
}
