//! Ground-state flux Σ⟨σ_z⟩ across f for isolated, linear and cross networks.
//!
//! cargo run --release --example static_flux

use fluxlattice::network::{NetworkSpec, Topology};
use fluxlattice::qubit::QubitParams;
use fluxlattice::response::linspace;
use fluxlattice::spectra::{diagonalize, static_flux};

fn main() -> fluxlattice::Result<()> {
    let base = QubitParams::new(1.0, 0.2, 0.5)?;
    let nets = [
        NetworkSpec::new(base, Topology::isolated(5)?),
        NetworkSpec::new(base, Topology::linear(5, -0.2)?),
        NetworkSpec::new(base, Topology::cross(-0.2)?),
    ];
    println!("    f    isolated    linear     cross");
    for f in linspace(0.46, 0.54, 17) {
        let mut row = format!("{f:.3}");
        for spec in &nets {
            let s = diagonalize(&spec.clone().with_flux(f).hamiltonian()?)?;
            row += &format!("  {:+.5}", static_flux(&s).flux);
        }
        println!("{row}");
    }
    Ok(())
}
