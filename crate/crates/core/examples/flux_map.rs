//! |χ(f, ω)| of the coupled linear array; prints flux cuts at fixed ω.
//!
//! cargo run --release --example flux_map

use fluxlattice::network::{NetworkSpec, Topology};
use fluxlattice::qubit::QubitParams;
use fluxlattice::response::{find_peaks, linspace, sweep_flux_frequency, ResponseProbe, DEFAULT_ETA};

fn main() -> fluxlattice::Result<()> {
    let spec = NetworkSpec::new(QubitParams::new(1.0, 0.2, 0.5)?, Topology::linear(5, -0.2)?);
    let f_grid = linspace(0.4, 0.6, 401);
    let omega_grid = [0.1, 0.2, 0.3, 0.4, 0.5];
    let map = sweep_flux_frequency(&spec, &ResponseProbe::uniform(5, DEFAULT_ETA)?, &f_grid, &omega_grid)?;
    for (col, omega) in omega_grid.iter().enumerate() {
        let cut = map.cut_at_omega(col);
        let peaks: Vec<String> = find_peaks(&f_grid, &cut, 0.01)
            .iter()
            .map(|p| format!("{:.4}", p.position))
            .collect();
        println!("omega = {omega:.2}: peaks at f = [{}]", peaks.join(", "));
    }
    Ok(())
}
