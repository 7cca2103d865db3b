//! Closed-form single flux qubit: `H = −[ε(f) σ_z + Δ σ_x]`.
//!
//! Reduced units throughout: ħ = I_S = Φ₀ = 1, so energies are in ħω₀ = I_S Φ₀.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Operator;

/// Local parameters of one flux qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    /// Maximum loop current, units of I_S.
    pub i_s: f64,
    /// Tunneling energy, units of ħω₀.
    pub delta: f64,
    /// Normalized external flux Φ_ex/Φ₀.
    pub f: f64,
}

impl Default for QubitParams {
    fn default() -> Self {
        Self {
            i_s: 1.0,
            delta: 0.2,
            f: 0.52,
        }
    }
}

impl QubitParams {
    pub fn new(i_s: f64, delta: f64, f: f64) -> Result<Self> {
        let p = Self { i_s, delta, f };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.i_s > 0.0 && self.i_s.is_finite()) {
            return Err(Error::invalid("i_s", "must be positive and finite"));
        }
        if !self.delta.is_finite() {
            return Err(Error::invalid("delta", "must be finite"));
        }
        if !self.f.is_finite() {
            return Err(Error::invalid("f", "must be finite"));
        }
        Ok(())
    }

    /// Flux bias energy `ε = I_S (f − 1/2)`.
    pub fn epsilon(&self) -> f64 {
        self.i_s * (self.f - 0.5)
    }

    /// The 2×2 Hamiltonian in the `{|↑⟩, |↓⟩}` basis.
    pub fn hamiltonian(&self) -> Operator {
        let e = self.epsilon();
        let d = self.delta;
        Operator::from_real(&DMatrix::from_row_slice(2, 2, &[-e, -d, -d, e]))
            .expect("2x2 is a valid operator")
    }

    pub fn eigensystem(&self) -> Result<SingleQubitEigensystem> {
        single_qubit_eigensystem(self)
    }

    /// Ground-state loop current `I_S cos θ`.
    pub fn ground_current(&self) -> Result<f64> {
        Ok(self.i_s * self.eigensystem()?.cos_theta)
    }

    /// First-excited-state loop current `−I_S cos θ`.
    pub fn excited_current(&self) -> Result<f64> {
        Ok(-self.ground_current()?)
    }
}

/// Eigenvalues, mixing angle and eigenstates of one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitEigensystem {
    pub e_minus: f64,
    pub e_plus: f64,
    pub cos_theta: f64,
    /// Amplitudes on `(|↑⟩, |↓⟩)`.
    pub ground: [f64; 2],
    pub excited: [f64; 2],
}

impl SingleQubitEigensystem {
    pub fn gap(&self) -> f64 {
        self.e_plus - self.e_minus
    }
}

pub fn epsilon(p: &QubitParams) -> f64 {
    p.epsilon()
}

/// Diagonalizes the single-qubit Hamiltonian in closed form.
///
/// For `Δ < 0` the `|↓⟩` amplitudes pick up the sign of `Δ` so that the
/// returned vectors remain eigenvectors; `cos θ` and the currents do not depend
/// on it.
pub fn single_qubit_eigensystem(p: &QubitParams) -> Result<SingleQubitEigensystem> {
    let eps = p.epsilon();
    let radius = eps.hypot(p.delta);
    if radius == 0.0 {
        return Err(Error::DegenerateQubit);
    }
    let cos_theta = eps / radius;
    let a = ((1.0 + cos_theta) / 2.0).sqrt();
    let b = ((1.0 - cos_theta) / 2.0).sqrt();
    let sign = if p.delta < 0.0 { -1.0 } else { 1.0 };
    Ok(SingleQubitEigensystem {
        e_minus: -radius,
        e_plus: radius,
        cos_theta,
        ground: [a, sign * b],
        excited: [b, -sign * a],
    })
}

pub fn ground_current(p: &QubitParams) -> Result<f64> {
    p.ground_current()
}
