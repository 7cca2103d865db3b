//! One flux qubit: gap, eigenstates and circulating currents versus flux.
//!
//! cargo run --release --example single_qubit

use fluxlattice::qubit::QubitParams;

fn main() -> fluxlattice::Result<()> {
    let q = QubitParams::new(1.0, 0.2, 0.52)?;
    let sys = q.eigensystem()?;
    println!("epsilon = {:.6}, gap = {:.9}", q.epsilon(), sys.gap());
    println!("ground current  {:+.6}", q.ground_current()?);
    println!("excited current {:+.6}", q.excited_current()?);

    println!("\n    f       gap      I_ground");
    for k in 0..=10 {
        let f = 0.45 + 0.01 * k as f64;
        let q = QubitParams::new(1.0, 0.2, f)?;
        println!("{f:.3}  {:.6}  {:+.6}", q.eigensystem()?.gap(), q.ground_current()?);
    }
    Ok(())
}
