//! Linear-response susceptibility in the spectral (Lehmann) representation.
//!
//! ```text
//! χ(ω) = Σ_{n>0} ⟨0|A|n⟩⟨n|B|0⟩ / (ω − ω_n0 + iη) − ⟨0|B|n⟩⟨n|A|0⟩ / (ω + ω_n0 + iη)
//! ```
//!
//! with `ω_n0 = E_n − E_0` and ħ = 1. A response to `f(t) = 𝒜 sin ωt` reads
//! `δ⟨A(t)⟩ = 𝒜 |χ(ω)| sin(ωt − φ(ω))`.

use std::f64::consts::PI;

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::pauli::C64;
use crate::spectra::{diagonalize, Spectrum};

/// Broadening used throughout the response figures (ħω₀).
pub const DEFAULT_ETA: f64 = 2.5e-3;

/// Peak prominence threshold as a fraction of the sweep maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.01;

/// Observable `A = Σ a_i(1+λ_i)σ_z^{(i)}`, perturbation `B = Σ b_i(1+λ_i)σ_z^{(i)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseProbe {
    pub a_weights: Vec<f64>,
    pub b_weights: Vec<f64>,
    pub eta: f64,
}

impl ResponseProbe {
    pub fn new(a_weights: Vec<f64>, b_weights: Vec<f64>, eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::invalid("eta", format!("{eta} must be positive")));
        }
        if a_weights.len() != b_weights.len() {
            return Err(Error::DimensionMismatch {
                expected: a_weights.len(),
                got: b_weights.len(),
            });
        }
        Ok(Self {
            a_weights,
            b_weights,
            eta,
        })
    }

    /// Total current observed and driven: `A = B = Σ_i (1+λ_i)σ_z^{(i)}`.
    pub fn uniform(n: usize, eta: f64) -> Result<Self> {
        Self::new(vec![1.0; n], vec![1.0; n], eta)
    }

    /// Total current observed, line coupled to one 1-based qubit only.
    pub fn single_site_drive(n: usize, site: usize, eta: f64) -> Result<Self> {
        if site == 0 || site > n {
            return Err(Error::SiteOutOfRange { site, n_qubits: n });
        }
        let mut b = vec![0.0; n];
        b[site - 1] = 1.0;
        Self::new(vec![1.0; n], b, eta)
    }

    /// Exchanges observable and perturbation.
    pub fn swapped(&self) -> Self {
        Self {
            a_weights: self.b_weights.clone(),
            b_weights: self.a_weights.clone(),
            eta: self.eta,
        }
    }
}

/// Transition gaps and residues of one (spectrum, probe) pair.
#[derive(Debug, Clone)]
pub struct ResponseKernel {
    gaps: Vec<f64>,
    /// `⟨0|A|n⟩⟨n|B|0⟩`
    forward: Vec<C64>,
    /// `⟨0|B|n⟩⟨n|A|0⟩`
    backward: Vec<C64>,
    eta: f64,
}

impl ResponseKernel {
    pub fn new(s: &Spectrum, probe: &ResponseProbe, spec: &NetworkSpec) -> Result<Self> {
        if !(probe.eta > 0.0) {
            return Err(Error::invalid("eta", format!("{} must be positive", probe.eta)));
        }
        if s.n_qubits() != spec.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: 1 << spec.n_qubits(),
                got: s.dim(),
            });
        }
        let a = diag_of(spec, &probe.a_weights)?;
        let b = diag_of(spec, &probe.b_weights)?;
        let v = s.eigenvectors();
        let ground = v.column(0);
        let a0 = ground.component_mul(&a.map(|x| C64::new(x, 0.0)));
        let b0 = ground.component_mul(&b.map(|x| C64::new(x, 0.0)));
        // ⟨n|A|0⟩ and ⟨n|B|0⟩ for every n
        let na0 = v.adjoint() * a0;
        let nb0 = v.adjoint() * b0;

        let mut gaps = Vec::with_capacity(s.dim() - 1);
        let mut forward = Vec::with_capacity(s.dim() - 1);
        let mut backward = Vec::with_capacity(s.dim() - 1);
        for n in 1..s.dim() {
            gaps.push(s.excitation(n));
            forward.push(na0[n].conj() * nb0[n]);
            backward.push(nb0[n].conj() * na0[n]);
        }
        Ok(Self {
            gaps,
            forward,
            backward,
            eta: probe.eta,
        })
    }

    pub fn chi(&self, omega: f64) -> C64 {
        let ieta = C64::new(0.0, self.eta);
        self.gaps
            .iter()
            .zip(self.forward.iter().zip(&self.backward))
            .map(|(&g, (&fw, &bw))| fw / (omega - g + ieta) - bw / (omega + g + ieta))
            .sum()
    }

    /// `(gap, |⟨0|A|n⟩⟨n|B|0⟩|)` for every excited level.
    pub fn transitions(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.gaps.iter().zip(&self.forward).map(|(&g, w)| (g, w.norm()))
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

fn diag_of(spec: &NetworkSpec, weights: &[f64]) -> Result<DVector<f64>> {
    if weights.len() != spec.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: spec.n_qubits(),
            got: weights.len(),
        });
    }
    let scaled: Vec<f64> = weights
        .iter()
        .zip(spec.current_factors())
        .map(|(w, c)| w * c)
        .collect();
    Ok(crate::pauli::sigma_z_diagonal(&scaled))
}

/// `χ(ω)` for one frequency.
pub fn susceptibility(s: &Spectrum, probe: &ResponseProbe, spec: &NetworkSpec, omega: f64) -> Result<C64> {
    Ok(ResponseKernel::new(s, probe, spec)?.chi(omega))
}

/// One point of a response sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusceptibilitySample {
    pub omega: f64,
    pub chi: C64,
    /// `φ/π`, unwrapped along the sweep it belongs to.
    pub phase_over_pi: f64,
}

impl SusceptibilitySample {
    pub fn amplitude(&self) -> f64 {
        self.chi.norm()
    }

    /// Principal value of `φ/π` in `(−1, 1]`.
    pub fn principal_phase_over_pi(&self) -> f64 {
        principal_over_pi(self.chi)
    }
}

fn principal_over_pi(chi: C64) -> f64 {
    let p = chi.arg() / PI;
    if p <= -1.0 {
        p + 2.0
    } else {
        p
    }
}

/// Local maximum of the amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub position: f64,
    pub height: f64,
    pub prominence: f64,
}

#[derive(Debug, Clone)]
pub struct FrequencySweep {
    pub samples: Vec<SusceptibilitySample>,
    pub peaks: Vec<Peak>,
}

impl FrequencySweep {
    pub fn amplitudes(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.amplitude()).collect()
    }

    pub fn dominant_peak(&self) -> Option<&Peak> {
        self.peaks.iter().max_by(|a, b| a.height.total_cmp(&b.height))
    }

    pub fn peaks_with_prominence(&self, fraction: f64) -> Vec<Peak> {
        let grid: Vec<f64> = self.samples.iter().map(|s| s.omega).collect();
        find_peaks(&grid, &self.amplitudes(), fraction)
    }
}

fn check_grid(grid: &[f64], what: &'static str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Empty(what));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid(what, "grid must be strictly increasing"));
    }
    Ok(())
}

/// Samples with continuous phase: jumps larger than π are folded back.
fn samples_along(omega_grid: &[f64], chis: &[C64]) -> Vec<SusceptibilitySample> {
    let mut out = Vec::with_capacity(chis.len());
    let mut prev: Option<(f64, f64)> = None;
    for (&omega, &chi) in omega_grid.iter().zip(chis) {
        let p = principal_over_pi(chi);
        let unwrapped = match prev {
            None => p,
            Some((raw, acc)) => {
                let d = p - raw;
                acc + d - 2.0 * (d / 2.0).round()
            }
        };
        prev = Some((p, unwrapped));
        out.push(SusceptibilitySample {
            omega,
            chi,
            phase_over_pi: unwrapped,
        });
    }
    out
}

/// `χ` over a strictly increasing frequency grid, with peak table.
pub fn sweep_frequency(
    s: &Spectrum,
    probe: &ResponseProbe,
    spec: &NetworkSpec,
    omega_grid: &[f64],
) -> Result<FrequencySweep> {
    sweep_frequency_with(s, probe, spec, omega_grid, DEFAULT_PROMINENCE)
}

pub fn sweep_frequency_with(
    s: &Spectrum,
    probe: &ResponseProbe,
    spec: &NetworkSpec,
    omega_grid: &[f64],
    prominence: f64,
) -> Result<FrequencySweep> {
    check_grid(omega_grid, "omega grid")?;
    let kernel = ResponseKernel::new(s, probe, spec)?;
    let chis: Vec<C64> = omega_grid.iter().map(|&w| kernel.chi(w)).collect();
    let samples = samples_along(omega_grid, &chis);
    let amps: Vec<f64> = samples.iter().map(|x| x.amplitude()).collect();
    let peaks = find_peaks(omega_grid, &amps, prominence);
    Ok(FrequencySweep { samples, peaks })
}

/// Interior local maxima whose topographic prominence is at least
/// `fraction · max(values)`. Flat tops report their middle sample.
pub fn find_peaks(positions: &[f64], values: &[f64], fraction: f64) -> Vec<Peak> {
    let n = values.len();
    let max = values.iter().cloned().fold(0.0, f64::max);
    if n < 3 || max <= 0.0 {
        return Vec::new();
    }
    let threshold = fraction * max;
    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if values[i - 1] < values[i] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                let mid = (i + j) / 2;
                let height = values[mid];
                let left_min = lowest_until_higher(values, i, height, -1);
                let right_min = lowest_until_higher(values, j, height, 1);
                let prominence = height - left_min.max(right_min);
                if prominence >= threshold {
                    peaks.push(Peak {
                        index: mid,
                        position: positions[mid],
                        height,
                        prominence,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

fn lowest_until_higher(values: &[f64], from: usize, height: f64, dir: isize) -> f64 {
    let mut lowest = height;
    let mut k = from as isize + dir;
    while k >= 0 && (k as usize) < values.len() {
        let v = values[k as usize];
        if v > height {
            break;
        }
        lowest = lowest.min(v);
        k += dir;
    }
    lowest
}

/// `χ(f, ω)` on a flux × frequency grid; rows are flux values.
#[derive(Debug, Clone)]
pub struct FluxFrequencyMap {
    pub f_grid: Vec<f64>,
    pub omega_grid: Vec<f64>,
    pub rows: Vec<Vec<SusceptibilitySample>>,
}

impl FluxFrequencyMap {
    /// `|χ|` versus flux at `omega_grid[column]`.
    pub fn cut_at_omega(&self, column: usize) -> Vec<f64> {
        self.rows.iter().map(|row| row[column].amplitude()).collect()
    }

    pub fn amplitude(&self, f_index: usize, omega_index: usize) -> f64 {
        self.rows[f_index][omega_index].amplitude()
    }
}

/// Rebuilds and rediagonalizes `H₀` at each flux value.
pub fn sweep_flux_frequency(
    template: &NetworkSpec,
    probe: &ResponseProbe,
    f_grid: &[f64],
    omega_grid: &[f64],
) -> Result<FluxFrequencyMap> {
    check_grid(f_grid, "flux grid")?;
    check_grid(omega_grid, "omega grid")?;
    let rows = f_grid
        .par_iter()
        .map(|&f| {
            let spec = template.clone().with_flux(f);
            let s = diagonalize(&spec.hamiltonian()?)?;
            let kernel = ResponseKernel::new(&s, probe, &spec)?;
            let chis: Vec<C64> = omega_grid.iter().map(|&w| kernel.chi(w)).collect();
            Ok(samples_along(omega_grid, &chis))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FluxFrequencyMap {
        f_grid: f_grid.to_vec(),
        omega_grid: omega_grid.to_vec(),
        rows,
    })
}

/// `δ⟨A(t)⟩ = 𝒜 |χ| sin(ωt − φ)`.
pub fn time_domain_response(chi: C64, amplitude: f64, omega: f64, t: f64) -> f64 {
    amplitude * chi.norm() * (omega * t - chi.arg()).sin()
}

/// Evenly spaced grid including both endpoints.
pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..points)
            .map(|k| start + (end - start) * k as f64 / (points - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{sample_disorder, Topology};
    use crate::qubit::QubitParams;

    fn reference(topology: Topology) -> NetworkSpec {
        NetworkSpec::new(QubitParams::new(1.0, 0.2, 0.52).unwrap(), topology)
    }

    fn spectrum(spec: &NetworkSpec) -> Spectrum {
        diagonalize(&spec.hamiltonian().unwrap()).unwrap()
    }

    fn grid() -> Vec<f64> {
        linspace(0.01, 1.2, 4761)
    }

    #[test]
    fn two_level_static_limit() {
        // Closed-form oracle: ⟨g|σ_z|e⟩ = Δ/R and gap 2R.
        let q = QubitParams::new(1.0, 0.2, 0.52).unwrap();
        let es = q.eigensystem().unwrap();
        let r = es.e_plus;
        let weight = (0.2 / r).powi(2);
        let gap = es.gap();
        let eta = DEFAULT_ETA;
        let expect = -2.0 * weight * gap / (gap * gap + eta * eta);

        let spec = NetworkSpec::new(q, Topology::isolated(1).unwrap());
        let chi = susceptibility(&spectrum(&spec), &ResponseProbe::uniform(1, eta).unwrap(), &spec, 0.0).unwrap();
        assert!((chi.re - expect).abs() < 1e-12, "{chi} vs {expect}");
        assert!(chi.im.abs() < 1e-15);
    }

    #[test]
    fn non_positive_eta_rejected() {
        assert!(ResponseProbe::uniform(5, 0.0).is_err());
        assert!(ResponseProbe::uniform(5, -1.0).is_err());
    }

    #[test]
    fn uncoupled_chain_single_resonance() {
        let spec = reference(Topology::linear(5, -1e-6).unwrap());
        let probe = ResponseProbe::uniform(5, DEFAULT_ETA).unwrap();
        let sweep = sweep_frequency(&spectrum(&spec), &probe, &spec, &grid()).unwrap();
        assert_eq!(sweep.peaks.len(), 1);
        assert!((sweep.peaks[0].position - 0.401995).abs() < 0.005);
    }

    #[test]
    fn coupled_chain_main_resonance_and_satellites() {
        let spec = reference(Topology::linear(5, -0.2).unwrap());
        let probe = ResponseProbe::uniform(5, DEFAULT_ETA).unwrap();
        let sweep = sweep_frequency(&spectrum(&spec), &probe, &spec, &grid()).unwrap();
        let main = sweep.dominant_peak().unwrap();
        assert!((main.position - 0.18).abs() < 0.02, "{main:?}");
        assert!(sweep.peaks.iter().any(|p| p.position > main.position));

        // phase steps by about π across the main resonance
        let below = sweep.samples.iter().find(|s| s.omega > main.position - 0.02).unwrap();
        let above = sweep.samples.iter().find(|s| s.omega > main.position + 0.02).unwrap();
        let step = (above.phase_over_pi - below.phase_over_pi).abs();
        assert!((step - 1.0).abs() < 0.1, "phase step {step}");
    }

    #[test]
    fn zero_probe_gives_zero() {
        let spec = reference(Topology::linear(5, -0.2).unwrap());
        let probe = ResponseProbe::new(vec![0.0; 5], vec![1.0; 5], DEFAULT_ETA).unwrap();
        let sweep = sweep_frequency(&spectrum(&spec), &probe, &spec, &linspace(0.0, 1.0, 101)).unwrap();
        assert!(sweep.samples.iter().all(|s| s.chi == C64::new(0.0, 0.0)));
        assert!(sweep.peaks.is_empty());
    }

    #[test]
    fn grid_validation() {
        let spec = reference(Topology::linear(5, -0.2).unwrap());
        let s = spectrum(&spec);
        let probe = ResponseProbe::uniform(5, DEFAULT_ETA).unwrap();
        assert!(matches!(sweep_frequency(&s, &probe, &spec, &[]), Err(Error::Empty(_))));
        assert!(sweep_frequency(&s, &probe, &spec, &[0.1, 0.1]).is_err());
        assert!(sweep_flux_frequency(&spec, &probe, &[], &[0.1]).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        for topo in [Topology::linear(5, -0.2).unwrap(), Topology::cross(-0.2).unwrap()] {
            let spec = reference(topo);
            let kernel = ResponseKernel::new(&spectrum(&spec), &ResponseProbe::single_site_drive(5, 5, DEFAULT_ETA).unwrap(), &spec).unwrap();
            for w in linspace(0.0, 1.5, 301) {
                let d = kernel.chi(-w) - kernel.chi(w).conj();
                assert!(d.norm() < 1e-12, "omega {w}: {d}");
            }
        }
    }

    #[test]
    fn dissipative_sign_and_decay() {
        let spec = reference(Topology::linear(5, -0.2).unwrap());
        let kernel = ResponseKernel::new(&spectrum(&spec), &ResponseProbe::uniform(5, DEFAULT_ETA).unwrap(), &spec).unwrap();
        let g = grid();
        let max = g.iter().map(|&w| kernel.chi(w).norm()).fold(0.0, f64::max);
        for &w in &g {
            assert!(kernel.chi(w).im <= 0.0);
        }
        assert!(kernel.chi(10.0).norm() < 1e-2 * max);
    }

    #[test]
    fn peaks_sit_on_allowed_transitions() {
        for topo in [Topology::linear(5, -0.2).unwrap(), Topology::cross(-0.2).unwrap()] {
            let spec = reference(topo);
            let s = spectrum(&spec);
            let probe = ResponseProbe::single_site_drive(5, 5, DEFAULT_ETA).unwrap();
            let kernel = ResponseKernel::new(&s, &probe, &spec).unwrap();
            let sweep = sweep_frequency_with(&s, &probe, &spec, &grid(), 0.0).unwrap();
            for p in &sweep.peaks {
                let near = kernel
                    .transitions()
                    .any(|(gap, w)| w > 0.0 && (gap - p.position).abs() <= 2.0 * DEFAULT_ETA);
                assert!(near, "peak at {} not near any allowed transition", p.position);
            }
        }
    }

    #[test]
    fn probe_exchange_symmetry() {
        for topo in [Topology::linear(5, -0.2).unwrap(), Topology::cross(-0.2).unwrap()] {
            let spec = reference(topo);
            let s = spectrum(&spec);
            let probe = ResponseProbe::single_site_drive(5, 5, DEFAULT_ETA).unwrap();
            let ab = ResponseKernel::new(&s, &probe, &spec).unwrap();
            let ba = ResponseKernel::new(&s, &probe.swapped(), &spec).unwrap();
            for w in linspace(0.01, 1.0, 200) {
                assert!((ab.chi(w) - ba.chi(w)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn disordered_uncoupled_array_fragments() {
        // A realization with well-separated qubit gaps resolves into five lines.
        let spec = reference(Topology::linear(5, -1e-6).unwrap()).with_disorder(sample_disorder(4, 0.1, 5).unwrap());
        let probe = ResponseProbe::uniform(5, DEFAULT_ETA).unwrap();
        let sweep = sweep_frequency(&spectrum(&spec), &probe, &spec, &grid()).unwrap();
        let mut gaps: Vec<f64> = (0..5)
            .map(|i| 2.0 * spec.bias(i).hypot(spec.tunneling(i)))
            .collect();
        gaps.sort_by(f64::total_cmp);
        let min_sep = gaps.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if min_sep > 4.0 * DEFAULT_ETA {
            assert_eq!(sweep.peaks.len(), 5);
        }
        assert!(sweep.peaks.len() <= 5);
    }

    #[test]
    fn flux_map_cuts() {
        let spec = reference(Topology::linear(5, -0.2).unwrap());
        let probe = ResponseProbe::uniform(5, DEFAULT_ETA).unwrap();
        let f_grid = linspace(0.4, 0.6, 201);
        let map = sweep_flux_frequency(&spec, &probe, &f_grid, &[0.1, 0.5]).unwrap();

        let low = map.cut_at_omega(0);
        let peaks = find_peaks(&f_grid, &low, DEFAULT_PROMINENCE);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].position - 0.5).abs() < 0.005);

        let high = map.cut_at_omega(1);
        // at higher frequency the resonances split into pairs mirrored about f = 1/2
        let peaks = find_peaks(&f_grid, &high, 0.05);
        assert!(peaks.len() >= 2 && peaks.len() % 2 == 0, "{peaks:?}");
        for (a, b) in peaks.iter().zip(peaks.iter().rev()) {
            assert!((a.position + b.position - 1.0).abs() < 2e-3);
        }

        for (k, &f) in f_grid.iter().enumerate() {
            let mirror = f_grid.iter().position(|&g| (g - (1.0 - f)).abs() < 1e-12).unwrap();
            for col in 0..2 {
                let (a, b) = (map.amplitude(k, col), map.amplitude(mirror, col));
                assert!((a - b).abs() <= 1e-9 * a.max(1.0));
            }
        }
    }

    #[test]
    fn time_domain_phases() {
        let w = 0.3;
        let t = 1.7;
        let real = time_domain_response(C64::new(2.0, 0.0), 0.5, w, t);
        assert!((real - (w * t).sin()).abs() < 1e-15);
        let lag = time_domain_response(C64::new(0.0, 2.0), 0.5, w, t);
        assert!((lag - (w * t - PI / 2.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn unwrapping_removes_two_pi_jumps() {
        let chis: Vec<C64> = (0..50)
            .map(|k| C64::from_polar(1.0, 0.2 * k as f64))
            .collect();
        let omegas = linspace(0.0, 1.0, 50);
        let samples = samples_along(&omegas, &chis);
        for (k, s) in samples.iter().enumerate() {
            assert!((s.phase_over_pi - 0.2 * k as f64 / PI).abs() < 1e-12);
            assert!(s.principal_phase_over_pi() > -1.0 && s.principal_phase_over_pi() <= 1.0);
        }
    }

    #[test]
    fn peak_finder_basics() {
        let x: Vec<f64> = (0..9).map(|k| k as f64).collect();
        let y = [0.0, 1.0, 0.0, 0.5, 0.5, 0.5, 0.2, 0.3, 0.0];
        let peaks = find_peaks(&x, &y, 0.0);
        assert_eq!(peaks.iter().map(|p| p.index).collect::<Vec<_>>(), vec![1, 4, 7]);
        assert!((peaks[1].prominence - 0.5).abs() < 1e-15);
        assert!((peaks[2].prominence - 0.1).abs() < 1e-15);
        assert_eq!(find_peaks(&x, &y, 0.2).len(), 2);
    }
}
