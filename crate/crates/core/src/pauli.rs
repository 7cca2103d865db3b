//! Dense many-qubit operators built from single-site Pauli matrices.
//!
//! Tensor factor order is fixed: qubit 1 is the leftmost Kronecker factor,
//! so it is the most significant bit of a computational-basis index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 14;

const HERMITIAN_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;
const IMAG_TOL: f64 = 1e-10;

pub type C64 = Complex64;

/// Single-site operator kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliKind {
    SigmaX,
    SigmaZ,
    Identity,
}

impl PauliKind {
    pub fn matrix(self) -> DMatrix<C64> {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        match self {
            PauliKind::SigmaX => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            PauliKind::SigmaZ => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
            PauliKind::Identity => DMatrix::identity(2, 2),
        }
    }
}

/// Dense complex operator on `n` qubits (dimension `2^n`).
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: matrix.ncols(),
            });
        }
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::invalid("dim", format!("{dim} is not a power of two")));
        }
        Ok(Self { matrix })
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::from_matrix(matrix.map(|x| C64::new(x, 0.0)))
    }

    pub fn zeros(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1 << n_qubits;
        Ok(Self {
            matrix: DMatrix::zeros(dim, dim),
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1 << n_qubits;
        Ok(Self {
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0_f64;
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= HERMITIAN_TOL
    }

    /// The real part, if every imaginary part is exactly zero.
    pub fn to_real(&self) -> Option<DMatrix<f64>> {
        if self.matrix.iter().all(|z| z.im == 0.0) {
            Some(self.matrix.map(|z| z.re))
        } else {
            None
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other.dim())?;
        Ok(Operator {
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        })
    }

    pub fn product(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other.dim())?;
        Ok(Operator {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn sum(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other.dim())?;
        Ok(Operator {
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn scaled(&self, factor: f64) -> Operator {
        Operator {
            matrix: &self.matrix * C64::new(factor, 0.0),
        }
    }

    pub fn apply(&self, state: &StateVector) -> Result<DVector<C64>> {
        self.check_dim(state.dim())?;
        Ok(&self.matrix * state.amplitudes())
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps `amplitudes`, rejecting vectors whose norm differs from 1 by more than 1e-10.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// Wraps a vector without a norm check. Used by the propagator, which
    /// tracks norm drift itself.
    pub(crate) fn from_raw(amplitudes: DVector<C64>) -> Self {
        Self { amplitudes }
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    /// Computational-basis state `|index⟩`.
    pub fn basis(index: usize, dim: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::invalid("n_qubits", "must be at least 1"));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// `I ⊗ … ⊗ σ ⊗ … ⊗ I` with `kind` on the 1-based `site`.
pub fn embed_single_site(kind: PauliKind, site: usize, n_qubits: usize) -> Result<Operator> {
    check_qubits(n_qubits)?;
    if site == 0 || site > n_qubits {
        return Err(Error::SiteOutOfRange { site, n_qubits });
    }
    let matrix = (1..=n_qubits).fold(DMatrix::identity(1, 1), |acc, k| {
        let factor = if k == site {
            kind.matrix()
        } else {
            PauliKind::Identity.matrix()
        };
        kron(&acc, &factor)
    });
    Ok(Operator { matrix })
}

/// `Σ_i w_i σ_z^{(i)}`, diagonal in the computational basis.
pub fn weighted_sigma_z_sum(weights: &[f64]) -> Result<Operator> {
    if weights.is_empty() {
        return Err(Error::Empty("weight vector"));
    }
    let n = weights.len();
    check_qubits(n)?;
    let diag = sigma_z_diagonal(weights);
    Ok(Operator {
        matrix: DMatrix::from_diagonal(&diag.map(|x| C64::new(x, 0.0))),
    })
}

/// Diagonal of `Σ_i w_i σ_z^{(i)}` as a real vector.
pub(crate) fn sigma_z_diagonal(weights: &[f64]) -> DVector<f64> {
    let n = weights.len();
    let dim = 1usize << n;
    DVector::from_fn(dim, |index, _| {
        weights
            .iter()
            .enumerate()
            .map(|(q, w)| w * spin_z(index, q, n))
            .sum()
    })
}

/// Eigenvalue of `σ_z` on 0-based qubit `q` for basis index `index`.
#[inline]
pub(crate) fn spin_z(index: usize, q: usize, n: usize) -> f64 {
    if (index >> (n - 1 - q)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `⟨ψ|op|ψ⟩` for Hermitian `op`.
pub fn expectation(op: &Operator, state: &StateVector) -> Result<f64> {
    let value = state.amplitudes.dotc(&op.apply(state)?);
    if value.im.abs() > IMAG_TOL {
        return Err(Error::NonHermitian(format!(
            "expectation has imaginary part {:.3e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// `⟨σ_z^{(i)}⟩` for every qubit, read off the basis probabilities.
pub fn sigma_z_profile(state: &StateVector) -> Vec<f64> {
    let n = state.dim().trailing_zeros() as usize;
    let mut out = vec![0.0; n];
    for (index, a) in state.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        for (q, z) in out.iter_mut().enumerate() {
            *z += p * spin_z(index, q, n);
        }
    }
    out
}

/// `⟨σ_x^{(i)}⟩` for every qubit.
pub fn sigma_x_profile(state: &StateVector) -> Vec<f64> {
    let n = state.dim().trailing_zeros() as usize;
    let amps = &state.amplitudes;
    (0..n)
        .map(|q| {
            let bit = 1usize << (n - 1 - q);
            2.0 * (0..amps.len())
                .filter(|i| i & bit == 0)
                .map(|i| (amps[i].conj() * amps[i | bit]).re)
                .sum::<f64>()
        })
        .collect()
}
