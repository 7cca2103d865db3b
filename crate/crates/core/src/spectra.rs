//! Exact diagonalization and eigenstate observables.

use std::ops::Range;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::pauli::{spin_z, Operator, StateVector, C64};

/// Default tolerance for grouping nearly degenerate levels (ħω₀).
pub const DEFAULT_DEGENERACY_TOL: f64 = 0.02;

/// Bottom gap below which the ground state is reported as degenerate.
pub const DEGENERATE_GS_GAP: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-12;

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
///
/// Each eigenvector's largest-magnitude component (first one on ties) is
/// real and positive.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Excitation energy `E_level − E_0`.
    pub fn excitation(&self, level: usize) -> f64 {
        self.eigenvalues[level] - self.eigenvalues[0]
    }

    pub fn ground_state_degenerate(&self) -> bool {
        self.dim() > 1 && self.excitation(1) < DEGENERATE_GS_GAP
    }

    pub fn state(&self, level: usize) -> Result<StateVector> {
        self.check_level(level)?;
        Ok(StateVector::from_raw(self.eigenvectors.column(level).into_owned()))
    }

    pub fn ground_state(&self) -> StateVector {
        StateVector::from_raw(self.eigenvectors.column(0).into_owned())
    }

    /// Basis-state occupation probabilities of eigenstate `level`.
    pub fn probabilities(&self, level: usize) -> Result<DVector<f64>> {
        self.check_level(level)?;
        Ok(self.eigenvectors.column(level).map(|z| z.norm_sqr()))
    }

    /// `V diag(E) V†`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&e| C64::new(e, 0.0)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    /// Largest `‖H v_k − E_k v_k‖` over all levels.
    pub fn max_residual(&self, h: &Operator) -> f64 {
        let hv = h.matrix() * &self.eigenvectors;
        (0..self.dim())
            .map(|k| {
                (hv.column(k) - self.eigenvectors.column(k) * C64::new(self.eigenvalues[k], 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: level,
                len: self.dim(),
            });
        }
        Ok(())
    }
}

/// Full eigensystem of a Hermitian operator, eigenvalues ascending.
///
/// Real-symmetric input goes through the real solver and yields real eigenvectors.
pub fn diagonalize(h: &Operator) -> Result<Spectrum> {
    let err = h.hermiticity_error();
    if err > HERMITIAN_TOL {
        return Err(Error::NonHermitian(format!("max |H - H†| = {err:.3e}")));
    }
    let (values, vectors) = match h.to_real() {
        Some(real) => {
            let eig = SymmetricEigen::new(real);
            (eig.eigenvalues, eig.eigenvectors.map(|x| C64::new(x, 0.0)))
        }
        None => {
            let eig = SymmetricEigen::new(h.matrix().clone());
            (eig.eigenvalues, eig.eigenvectors)
        }
    };
    Ok(sorted_spectrum(&values, &vectors))
}

fn sorted_spectrum(values: &DVector<f64>, vectors: &DMatrix<C64>) -> Spectrum {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut eigenvectors = DMatrix::zeros(vectors.nrows(), vectors.ncols());
    for (dst, &src) in order.iter().enumerate() {
        let col = vectors.column(src);
        let p = pivot(col.iter().map(|z| z.norm()));
        let phase = col[p].conj() / col[p].norm();
        let mut fixed = col * phase;
        fixed[p] = C64::new(fixed[p].re, 0.0);
        eigenvectors.set_column(dst, &fixed);
    }
    Spectrum {
        eigenvalues: order.iter().map(|&k| values[k]).collect(),
        eigenvectors,
    }
}

/// Index of the largest magnitude, preferring the earliest within 1e-12.
fn pivot(mags: impl Iterator<Item = f64>) -> usize {
    let mags: Vec<f64> = mags.collect();
    let max = mags.iter().cloned().fold(0.0, f64::max);
    mags.iter().position(|&m| m >= max - 1e-12).unwrap_or(0)
}

fn check_qubit(q: usize, n: usize) -> Result<usize> {
    if q == 0 || q > n {
        return Err(Error::SiteOutOfRange { site: q, n_qubits: n });
    }
    Ok(q - 1)
}

/// `⟨σ_z^{(i)}⟩` for every qubit in eigenstate `level`.
pub fn sigma_z_expectations(s: &Spectrum, level: usize) -> Result<Vec<f64>> {
    let p = s.probabilities(level)?;
    let n = s.n_qubits();
    Ok((0..n)
        .map(|q| p.iter().enumerate().map(|(idx, pr)| pr * spin_z(idx, q, n)).sum())
        .collect())
}

/// Loop currents `⟨(1+λ_i) σ_z^{(i)}⟩` in units of I_S.
pub fn loop_currents(s: &Spectrum, level: usize, spec: &NetworkSpec) -> Result<Vec<f64>> {
    if s.n_qubits() != spec.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << spec.n_qubits(),
            got: s.dim(),
        });
    }
    Ok(sigma_z_expectations(s, level)?
        .into_iter()
        .zip(spec.current_factors())
        .map(|(z, c)| z * c)
        .collect())
}

/// Connected current correlator `⟨σ_z^i σ_z^j⟩ − ⟨σ_z^i⟩⟨σ_z^j⟩` (1-based qubits), units I_S².
pub fn current_correlation(s: &Spectrum, level: usize, i: usize, j: usize) -> Result<f64> {
    let n = s.n_qubits();
    let (qi, qj) = (check_qubit(i, n)?, check_qubit(j, n)?);
    let p = s.probabilities(level)?;
    let (mut zi, mut zj, mut zz) = (0.0, 0.0, 0.0);
    for (idx, pr) in p.iter().enumerate() {
        let (a, b) = (spin_z(idx, qi, n), spin_z(idx, qj, n));
        zi += pr * a;
        zj += pr * b;
        zz += pr * a * b;
    }
    Ok(zz - zi * zj)
}

/// Ground-state flux reading `Φ = Σ_i ⟨σ_z^{(i)}⟩_GS`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticFlux {
    pub flux: f64,
    /// Set when the two lowest levels are closer than 1e-12; the value then
    /// belongs to an arbitrary state of the degenerate manifold.
    pub degenerate_ground_state: bool,
}

pub fn static_flux(s: &Spectrum) -> StaticFlux {
    let flux = sigma_z_expectations(s, 0)
        .expect("ground state exists")
        .iter()
        .sum();
    StaticFlux {
        flux,
        degenerate_ground_state: s.ground_state_degenerate(),
    }
}

/// Maximal runs of consecutive levels whose neighbouring gaps are below `tol`.
pub fn degeneracy_groups(s: &Spectrum, tol: f64) -> Result<Vec<Range<usize>>> {
    group_levels(s.eigenvalues(), tol)
}

pub(crate) fn group_levels(values: &[f64], tol: f64) -> Result<Vec<Range<usize>>> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] >= tol {
            groups.push(start..k);
            start = k;
        }
    }
    Ok(groups)
}
