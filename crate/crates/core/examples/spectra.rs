//! Five-qubit spectra for the linear and cross layouts, with level grouping,
//! loop currents and current correlations.
//!
//! cargo run --release --example spectra

use fluxlattice::network::{NetworkSpec, Topology};
use fluxlattice::qubit::QubitParams;
use fluxlattice::spectra::{current_correlation, degeneracy_groups, diagonalize, loop_currents, DEFAULT_DEGENERACY_TOL};

fn main() -> fluxlattice::Result<()> {
    let base = QubitParams::new(1.0, 0.2, 0.52)?;
    for (name, topology) in [("linear", Topology::linear(5, -0.2)?), ("cross", Topology::cross(-0.2)?)] {
        let spec = NetworkSpec::new(base, topology);
        let s = diagonalize(&spec.hamiltonian()?)?;
        println!("== {name}: E0 = {:.6}", s.ground_energy());
        for (g, r) in degeneracy_groups(&s, DEFAULT_DEGENERACY_TOL)?.iter().enumerate().take(6) {
            let levels: Vec<String> = r.clone().map(|k| format!("{:.4}", s.excitation(k))).collect();
            println!("  group {g}: {}", levels.join(" "));
        }
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:+.4}")).collect::<Vec<_>>().join(" ");
        println!("  I (ground)  {}", fmt(&loop_currents(&s, 0, &spec)?));
        println!("  I (excited) {}", fmt(&loop_currents(&s, 1, &spec)?));
        let c: Vec<f64> = (2..=5).map(|i| current_correlation(&s, 0, 1, i)).collect::<Result<_, _>>()?;
        println!("  C(1, 2..5)  {}", fmt(&c));
    }
    Ok(())
}
