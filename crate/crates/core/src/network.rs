//! Inductively coupled flux-qubit networks.
//!
//! `H₀ = Σ_i −[ε_i σ_z^{(i)} + Δ_i σ_x^{(i)}] + ½ Σ_{i≠j} m_ij (1+λ_i)(1+λ_j) σ_z^{(i)} σ_z^{(j)}`
//! with `ε_i = I_S (1+λ_i)(f − 1/2)` and `Δ_i` taken from the tunneling profile,
//! scaled by `(1+μ_i)` when disorder is present. The Hamiltonian is assembled
//! directly from basis-index bits; it is real symmetric.

use nalgebra::DMatrix;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{self, Operator, MAX_QUBITS};
use crate::qubit::QubitParams;

/// Symmetric matrix of mutual-inductance energies `m_ij = M_ij I_S²` (units ħω₀).
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    coupling: DMatrix<f64>,
}

impl Topology {
    /// Validates symmetry, zero diagonal and non-positive entries.
    pub fn from_matrix(coupling: DMatrix<f64>) -> Result<Self> {
        let n = coupling.nrows();
        if coupling.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: coupling.ncols(),
            });
        }
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits: n,
                max: MAX_QUBITS,
            });
        }
        for i in 0..n {
            if coupling[(i, i)] != 0.0 {
                return Err(Error::invalid("coupling", format!("diagonal entry {} is nonzero", i + 1)));
            }
            for j in 0..n {
                let m = coupling[(i, j)];
                if m != coupling[(j, i)] {
                    return Err(Error::invalid("coupling", "matrix is not symmetric"));
                }
                if !(m <= 0.0) {
                    return Err(Error::invalid(
                        "coupling",
                        format!("entry ({}, {}) = {m} must be negative (M_ij < 0)", i + 1, j + 1),
                    ));
                }
            }
        }
        Ok(Self { coupling })
    }

    /// Nearest-neighbour chain `1–2–…–n`.
    pub fn linear(n: usize, coupling_energy: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n_qubits", "a linear array needs at least 2 qubits"));
        }
        check_coupling(coupling_energy)?;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = coupling_energy;
            m[(i + 1, i)] = coupling_energy;
        }
        Self::from_matrix(m)
    }

    /// Five-qubit star with qubit 2 at the centre.
    pub fn cross(coupling_energy: f64) -> Result<Self> {
        check_coupling(coupling_energy)?;
        let mut m = DMatrix::zeros(5, 5);
        for leaf in [0, 2, 3, 4] {
            m[(1, leaf)] = coupling_energy;
            m[(leaf, 1)] = coupling_energy;
        }
        Self::from_matrix(m)
    }

    /// `n` qubits with no mutual inductance.
    pub fn isolated(n: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::zeros(n, n))
    }

    pub fn n_qubits(&self) -> usize {
        self.coupling.nrows()
    }

    pub fn coupling(&self) -> &DMatrix<f64> {
        &self.coupling
    }

    /// Coupling energy between 1-based qubits `i` and `j`.
    pub fn energy(&self, i: usize, j: usize) -> f64 {
        self.coupling[(i - 1, j - 1)]
    }

    /// Undirected edges `(i, j, m_ij)` with `i < j`, 1-based.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n_qubits();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let m = self.coupling[(i, j)];
                if m != 0.0 {
                    out.push((i + 1, j + 1, m));
                }
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n_qubits())
            .map(|i| self.coupling.row(i).iter().filter(|&&m| m != 0.0).count())
            .collect()
    }
}

fn check_coupling(coupling_energy: f64) -> Result<()> {
    if !(coupling_energy < 0.0) || !coupling_energy.is_finite() {
        return Err(Error::invalid(
            "coupling_energy",
            format!("{coupling_energy} must be negative (M_ij < 0)"),
        ));
    }
    Ok(())
}

/// Fractional fabrication shifts: `I_S → I_S(1+λ_i)`, `Δ → Δ(1+μ_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub seed: u64,
    pub amplitude: f64,
}

impl DisorderRealization {
    pub fn none(n: usize) -> Self {
        Self {
            lambda: vec![0.0; n],
            mu: vec![0.0; n],
            seed: 0,
            amplitude: 0.0,
        }
    }
}

/// Seeded uniform generator on `[−a, a]`.
///
/// xoshiro256++ seeded through splitmix64 (`seed_from_u64`); each draw takes the
/// top 53 bits of one output as `u ∈ [0, 1)` and returns `a(2u − 1)`.
pub struct UniformStream {
    rng: Xoshiro256PlusPlus,
}

impl UniformStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn symmetric(&mut self, amplitude: f64) -> f64 {
        amplitude * (2.0 * self.unit() - 1.0)
    }

    /// Uniform integer in `0..n` (n > 0).
    pub fn below(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }
}

/// Draws `λ₁…λ_n` then `μ₁…μ_n` from one seeded stream.
pub fn sample_disorder(seed: u64, amplitude: f64, n: usize) -> Result<DisorderRealization> {
    if !(0.0..1.0).contains(&amplitude) {
        return Err(Error::invalid(
            "disorder_amplitude",
            format!("{amplitude} must lie in [0, 1)"),
        ));
    }
    let mut stream = UniformStream::new(seed);
    let lambda = (0..n).map(|_| stream.symmetric(amplitude)).collect();
    let mu = (0..n).map(|_| stream.symmetric(amplitude)).collect();
    Ok(DisorderRealization {
        lambda,
        mu,
        seed,
        amplitude,
    })
}

/// `n` tunneling energies linearly spaced over `[Δ(1−δ), Δ(1+δ)]`, qubit 1 first.
pub fn inhomogeneous_deltas(delta: f64, dispersion: f64, n: usize) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&dispersion) {
        return Err(Error::invalid(
            "delta_dispersion",
            format!("{dispersion} must lie in [0, 1)"),
        ));
    }
    if n == 0 {
        return Err(Error::Empty("qubit count"));
    }
    if n == 1 {
        return Ok(vec![delta]);
    }
    let lo = delta * (1.0 - dispersion);
    let hi = delta * (1.0 + dispersion);
    Ok((0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect())
}

/// Full physical description of a network and its transmission-line coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub base: QubitParams,
    pub topology: Topology,
    pub disorder: Option<DisorderRealization>,
    /// Per-qubit tunneling energies before disorder.
    pub delta_profile: Vec<f64>,
    /// Coupling profile to the line; the prefactor is absorbed in the drive amplitude.
    pub drive_weights: Vec<f64>,
}

impl NetworkSpec {
    /// Uniform tunneling energies and uniform line coupling.
    pub fn new(base: QubitParams, topology: Topology) -> Self {
        let n = topology.n_qubits();
        Self {
            base,
            delta_profile: vec![base.delta; n],
            drive_weights: vec![1.0; n],
            disorder: None,
            topology,
        }
    }

    pub fn with_disorder(mut self, disorder: DisorderRealization) -> Self {
        self.disorder = Some(disorder);
        self
    }

    pub fn with_deltas(mut self, deltas: Vec<f64>) -> Self {
        self.delta_profile = deltas;
        self
    }

    pub fn with_drive_weights(mut self, weights: Vec<f64>) -> Self {
        self.drive_weights = weights;
        self
    }

    /// Line coupled to a single 1-based qubit only.
    pub fn with_drive_site(self, site: usize) -> Result<Self> {
        let n = self.n_qubits();
        if site == 0 || site > n {
            return Err(Error::SiteOutOfRange { site, n_qubits: n });
        }
        let mut w = vec![0.0; n];
        w[site - 1] = 1.0;
        Ok(self.with_drive_weights(w))
    }

    pub fn with_flux(mut self, f: f64) -> Self {
        self.base.f = f;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.topology.n_qubits()
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        let n = self.n_qubits();
        let check = |name: &str, len: usize| {
            if len != n {
                Err(Error::invalid(name, format!("length {len} differs from {n} qubits")))
            } else {
                Ok(())
            }
        };
        check("delta_profile", self.delta_profile.len())?;
        check("drive_weights", self.drive_weights.len())?;
        if let Some(d) = &self.disorder {
            check("disorder.lambda", d.lambda.len())?;
            check("disorder.mu", d.mu.len())?;
        }
        for i in 0..n {
            if self.loop_current(i) <= 0.0 {
                return Err(Error::invalid(
                    "disorder.lambda",
                    format!("qubit {} has non-positive loop current", i + 1),
                ));
            }
        }
        Ok(())
    }

    /// `λ_i` for 0-based `i` (zero without disorder).
    pub fn lambda(&self, i: usize) -> f64 {
        self.disorder.as_ref().map_or(0.0, |d| d.lambda[i])
    }

    pub fn mu(&self, i: usize) -> f64 {
        self.disorder.as_ref().map_or(0.0, |d| d.mu[i])
    }

    /// Effective loop current `I_S(1+λ_i)`.
    pub fn loop_current(&self, i: usize) -> f64 {
        self.base.i_s * (1.0 + self.lambda(i))
    }

    /// Effective tunneling energy `Δ_i(1+μ_i)`.
    pub fn tunneling(&self, i: usize) -> f64 {
        self.delta_profile[i] * (1.0 + self.mu(i))
    }

    /// Effective flux bias `ε_i`.
    pub fn bias(&self, i: usize) -> f64 {
        self.loop_current(i) * (self.base.f - 0.5)
    }

    /// Per-qubit `(1+λ_i)` factors.
    pub fn current_factors(&self) -> Vec<f64> {
        (0..self.n_qubits()).map(|i| 1.0 + self.lambda(i)).collect()
    }

    /// `Σ_i w_i (1+λ_i) σ_z^{(i)}` for an arbitrary weight profile.
    pub fn weighted_current_operator(&self, weights: &[f64]) -> Result<Operator> {
        if weights.len() != self.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                got: weights.len(),
            });
        }
        let scaled: Vec<f64> = weights
            .iter()
            .zip(self.current_factors())
            .map(|(w, c)| w * c)
            .collect();
        pauli::weighted_sigma_z_sum(&scaled)
    }

    pub fn hamiltonian(&self) -> Result<Operator> {
        build_hamiltonian(self)
    }

    pub fn drive_operator(&self) -> Result<Operator> {
        build_drive_operator(self)
    }
}

/// Real-symmetric `H₀` as a dense real matrix.
pub fn hamiltonian_matrix(spec: &NetworkSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let n = spec.n_qubits();
    let dim = 1usize << n;
    let factors = spec.current_factors();
    let biases: Vec<f64> = (0..n).map(|i| spec.bias(i)).collect();
    let tunneling: Vec<f64> = (0..n).map(|i| spec.tunneling(i)).collect();
    let edges = spec.topology.edges();

    let mut h = DMatrix::zeros(dim, dim);
    for index in 0..dim {
        let s = |q: usize| pauli::spin_z(index, q, n);
        let mut diag = 0.0;
        for (q, eps) in biases.iter().enumerate() {
            diag -= eps * s(q);
        }
        // ½ Σ_{i≠j} counts each undirected edge once.
        for &(i, j, m) in &edges {
            let (i, j) = (i - 1, j - 1);
            diag += m * factors[i] * factors[j] * s(i) * s(j);
        }
        h[(index, index)] = diag;
        for (q, d) in tunneling.iter().enumerate() {
            let flipped = index ^ (1 << (n - 1 - q));
            h[(flipped, index)] -= d;
        }
    }
    Ok(h)
}

pub fn build_hamiltonian(spec: &NetworkSpec) -> Result<Operator> {
    Operator::from_real(&hamiltonian_matrix(spec)?)
}

/// Drive operator `C = Σ_i w_i (1+λ_i) σ_z^{(i)}`, so that `H_I(t) = f(t) C`.
pub fn build_drive_operator(spec: &NetworkSpec) -> Result<Operator> {
    spec.validate()?;
    spec.weighted_current_operator(&spec.drive_weights)
}

/// Diagonal of the drive operator.
#[cfg(test)]
pub(crate) fn drive_diagonal(spec: &NetworkSpec) -> nalgebra::DVector<f64> {
    let scaled: Vec<f64> = spec
        .drive_weights
        .iter()
        .zip(spec.current_factors())
        .map(|(w, c)| w * c)
        .collect();
    pauli::sigma_z_diagonal(&scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{embed_single_site, PauliKind};

    fn reference_qubit() -> QubitParams {
        QubitParams::new(1.0, 0.2, 0.52).unwrap()
    }

    /// Hamiltonian assembled from embedded Pauli operators (independent of the bit route).
    fn composed_hamiltonian(spec: &NetworkSpec) -> Operator {
        let n = spec.n_qubits();
        let mut h = Operator::zeros(n).unwrap();
        for i in 0..n {
            let z = embed_single_site(PauliKind::SigmaZ, i + 1, n).unwrap();
            let x = embed_single_site(PauliKind::SigmaX, i + 1, n).unwrap();
            h = h.sum(&z.scaled(-spec.bias(i))).unwrap();
            h = h.sum(&x.scaled(-spec.tunneling(i))).unwrap();
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let m = spec.topology.coupling()[(i, j)];
                if m == 0.0 {
                    continue;
                }
                let zz = embed_single_site(PauliKind::SigmaZ, i + 1, n)
                    .unwrap()
                    .product(&embed_single_site(PauliKind::SigmaZ, j + 1, n).unwrap())
                    .unwrap();
                let w = 0.5 * m * (1.0 + spec.lambda(i)) * (1.0 + spec.lambda(j));
                h = h.sum(&zz.scaled(w)).unwrap();
            }
        }
        h
    }

    /// Permutes tensor factors: qubit `q` (0-based) of the output is qubit `perm[q]` of the input.
    fn permute_factors(m: &DMatrix<f64>, perm: &[usize]) -> DMatrix<f64> {
        let n = perm.len();
        let dim = 1 << n;
        let map = |index: usize| {
            let mut out = 0;
            for q in 0..n {
                let bit = (index >> (n - 1 - perm[q])) & 1;
                out |= bit << (n - 1 - q);
            }
            out
        };
        let mut p = DMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                p[(map(r), map(c))] = m[(r, c)];
            }
        }
        p
    }

    #[test]
    fn linear_topology_edges() {
        let t = Topology::linear(5, -0.2).unwrap();
        assert_eq!(
            t.edges(),
            vec![(1, 2, -0.2), (2, 3, -0.2), (3, 4, -0.2), (4, 5, -0.2)]
        );
        assert_eq!(Topology::linear(2, -0.2).unwrap().edges(), vec![(1, 2, -0.2)]);
        let weak = Topology::linear(5, -1e-6).unwrap();
        assert!(weak.edges().iter().all(|e| e.2 == -1e-6));
        assert!(Topology::linear(5, 0.2).is_err());
        assert!(Topology::linear(5, 0.0).is_err());
        assert!(Topology::linear(1, -0.2).is_err());
    }

    #[test]
    fn cross_topology_shape() {
        let t = Topology::cross(-0.2).unwrap();
        assert_eq!(t.degrees(), vec![1, 4, 1, 1, 1]);
        assert_eq!(t.coupling().iter().filter(|&&m| m != 0.0).count(), 8);
        assert_eq!(t.coupling(), &t.coupling().transpose());
        let weak = Topology::cross(-1e-6).unwrap();
        assert_eq!(weak.degrees(), vec![1, 4, 1, 1, 1]);
        assert!(Topology::cross(1.0).is_err());
    }

    #[test]
    fn topology_validation() {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = -0.1;
        assert!(Topology::from_matrix(m.clone()).is_err());
        m[(1, 0)] = -0.1;
        assert!(Topology::from_matrix(m.clone()).is_ok());
        m[(2, 2)] = -0.1;
        assert!(Topology::from_matrix(m).is_err());
    }

    #[test]
    fn disorder_sampling() {
        let zero = sample_disorder(7, 0.0, 5).unwrap();
        assert!(zero.lambda.iter().chain(&zero.mu).all(|&x| x == 0.0));
        let a = sample_disorder(42, 0.1, 5).unwrap();
        let b = sample_disorder(42, 0.1, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_disorder(43, 0.1, 5).unwrap());
        assert!(sample_disorder(1, 1.0, 5).is_err());
        assert!(sample_disorder(1, -0.1, 5).is_err());
    }

    #[test]
    fn disorder_bounded_over_many_draws() {
        let big = sample_disorder(3, 0.1, 10_000).unwrap();
        let max = big.lambda.iter().chain(&big.mu).fold(0.0_f64, |m, x| m.max(x.abs()));
        assert!(max <= 0.1);
        assert!(max > 0.099);
        let mean: f64 = big.lambda.iter().sum::<f64>() / 10_000.0;
        assert!(mean.abs() < 5e-3);
    }

    #[test]
    fn stream_order_is_lambda_then_mu() {
        let d = sample_disorder(11, 0.1, 3).unwrap();
        let mut s = UniformStream::new(11);
        let draws: Vec<f64> = (0..6).map(|_| s.symmetric(0.1)).collect();
        assert_eq!(d.lambda, draws[..3]);
        assert_eq!(d.mu, draws[3..]);
    }

    #[test]
    fn delta_profiles() {
        assert_eq!(inhomogeneous_deltas(0.2, 0.0, 5).unwrap(), vec![0.2; 5]);
        let d = inhomogeneous_deltas(0.2, 0.1, 5).unwrap();
        for (x, e) in d.iter().zip([0.18, 0.19, 0.20, 0.21, 0.22]) {
            assert!((x - e).abs() < 1e-15);
        }
        assert_eq!(inhomogeneous_deltas(1.0, 0.5, 2).unwrap(), vec![0.5, 1.5]);
        assert!(inhomogeneous_deltas(1.0, 1.0, 2).is_err());
    }

    #[test]
    fn single_qubit_hamiltonian() {
        let spec = NetworkSpec::new(reference_qubit(), Topology::isolated(1).unwrap());
        let h = hamiltonian_matrix(&spec).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[-0.02, -0.2, -0.2, 0.02]);
        assert!((h - expect).abs().max() < 1e-15);
    }

    #[test]
    fn bit_route_matches_composed_operators() {
        let d = sample_disorder(5, 0.1, 5).unwrap();
        for topo in [Topology::linear(5, -0.2).unwrap(), Topology::cross(-0.2).unwrap()] {
            let spec = NetworkSpec::new(reference_qubit(), topo)
                .with_deltas(inhomogeneous_deltas(0.2, 0.1, 5).unwrap())
                .with_disorder(d.clone());
            let h = build_hamiltonian(&spec).unwrap();
            assert_eq!(h.dim(), 32);
            let diff = h.sum(&composed_hamiltonian(&spec).scaled(-1.0)).unwrap();
            assert!(diff.max_abs() < 1e-14);
        }
    }

    #[test]
    fn zero_disorder_is_transparent() {
        let spec = NetworkSpec::new(reference_qubit(), Topology::linear(5, -0.2).unwrap());
        let with = spec.clone().with_disorder(DisorderRealization::none(5));
        assert_eq!(build_hamiltonian(&spec).unwrap(), build_hamiltonian(&with).unwrap());
    }

    #[test]
    fn hamiltonian_real_symmetric() {
        let spec = NetworkSpec::new(reference_qubit(), Topology::cross(-0.2).unwrap())
            .with_disorder(sample_disorder(9, 0.1, 5).unwrap());
        let h = hamiltonian_matrix(&spec).unwrap();
        assert_eq!(h, h.transpose());
        assert!(build_hamiltonian(&spec).unwrap().to_real().is_some());
    }

    #[test]
    fn spin_flip_symmetry_at_half_flux() {
        for topo in [Topology::linear(5, -0.2).unwrap(), Topology::cross(-0.2).unwrap()] {
            let spec = NetworkSpec::new(QubitParams::new(1.0, 0.2, 0.5).unwrap(), topo)
                .with_deltas(vec![0.17, 0.2, 0.23, 0.19, 0.21]);
            let h = build_hamiltonian(&spec).unwrap();
            let mut parity = Operator::identity(5).unwrap();
            for i in 1..=5 {
                parity = parity
                    .product(&embed_single_site(PauliKind::SigmaX, i, 5).unwrap())
                    .unwrap();
            }
            assert!(h.commutator(&parity).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn chain_reflection_symmetry() {
        let spec = NetworkSpec::new(reference_qubit(), Topology::linear(5, -0.2).unwrap());
        let h = hamiltonian_matrix(&spec).unwrap();
        assert!((permute_factors(&h, &[4, 3, 2, 1, 0]) - &h).amax() < 1e-14);
    }

    #[test]
    fn cross_leaf_permutation_symmetry() {
        let spec = NetworkSpec::new(reference_qubit(), Topology::cross(-0.2).unwrap());
        let h = hamiltonian_matrix(&spec).unwrap();
        for perm in [[2, 1, 0, 3, 4], [3, 1, 4, 0, 2], [4, 1, 3, 2, 0]] {
            assert!((permute_factors(&h, &perm) - &h).amax() < 1e-14);
        }
        // the hub is not interchangeable with a leaf
        assert!((permute_factors(&h, &[1, 0, 2, 3, 4]) - &h).amax() > 1e-3);
    }

    #[test]
    fn drive_operator_profiles() {
        let base = NetworkSpec::new(reference_qubit(), Topology::linear(5, -0.2).unwrap());
        assert_eq!(
            build_drive_operator(&base).unwrap(),
            pauli::weighted_sigma_z_sum(&[1.0; 5]).unwrap()
        );
        let fifth = base.clone().with_drive_site(5).unwrap();
        assert_eq!(
            build_drive_operator(&fifth).unwrap(),
            embed_single_site(PauliKind::SigmaZ, 5, 5).unwrap()
        );
        let d = sample_disorder(2, 0.1, 5).unwrap();
        let weights: Vec<f64> = d.lambda.iter().map(|l| 1.0 + l).collect();
        let disordered = base.with_disorder(d);
        assert_eq!(
            build_drive_operator(&disordered).unwrap(),
            pauli::weighted_sigma_z_sum(&weights).unwrap()
        );
        assert_eq!(
            drive_diagonal(&disordered),
            build_drive_operator(&disordered).unwrap().to_real().unwrap().diagonal()
        );
    }

    #[test]
    fn spec_validation() {
        let spec = NetworkSpec::new(reference_qubit(), Topology::linear(5, -0.2).unwrap())
            .with_deltas(vec![0.2; 4]);
        assert!(matches!(spec.validate(), Err(Error::InvalidParameter { .. })));
        let spec = NetworkSpec::new(reference_qubit(), Topology::linear(5, -0.2).unwrap());
        assert!(spec.clone().with_drive_site(6).is_err());
        let bad = spec.with_disorder(DisorderRealization {
            lambda: vec![-1.0, 0.0, 0.0, 0.0, 0.0],
            mu: vec![0.0; 5],
            seed: 0,
            amplitude: 0.0,
        });
        assert!(bad.validate().is_err());
    }
}
