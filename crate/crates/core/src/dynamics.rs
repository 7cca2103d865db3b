//! Time-dependent Schrödinger propagation under `H(t) = H₀ + f(t)·C` with
//! `f(t) = 𝒜 sin ωt` switched on at `t = 0`.
//!
//! Every step is a product of exponentials of Hermitian matrices, evaluated to
//! rounding accuracy (power series for short steps, eigendecomposition
//! otherwise), so the evolution is unitary regardless of the step size.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::pauli::{expectation, sigma_z_profile, Operator, StateVector, C64};
use crate::spectra::diagonalize;

const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// `ψ ← exp(−ih H(t+h/2)) ψ`, second order.
    Midpoint,
    /// Two-exponential commutator-free Magnus scheme, fourth order.
    #[default]
    CommutatorFree4,
}

impl Integrator {
    /// Default step for drives up to `omega_max`.
    pub fn default_step(self, omega_max: f64) -> f64 {
        match self {
            Integrator::Midpoint => 2.0 * PI / (256.0 * omega_max),
            Integrator::CommutatorFree4 => 2.0 * PI / (128.0 * omega_max),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DriveSpec {
    pub amplitude: f64,
    pub omega: f64,
    pub coupling: Operator,
}

impl DriveSpec {
    pub fn new(amplitude: f64, omega: f64, coupling: Operator) -> Result<Self> {
        let d = Self {
            amplitude,
            omega,
            coupling,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::invalid("drive_amplitude", "must be finite and >= 0"));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::invalid("omega", "must be finite and > 0"));
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        self.amplitude * (self.omega * t).sin()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationConfig {
    pub step: f64,
    pub t_max: f64,
    pub sample_times: Vec<f64>,
    pub integrator: Integrator,
}

impl PropagationConfig {
    pub fn new(step: f64, t_max: f64, sample_times: Vec<f64>) -> Result<Self> {
        let c = Self {
            step,
            t_max,
            sample_times,
            integrator: Integrator::default(),
        };
        c.validate()?;
        Ok(c)
    }

    /// `n` equally spaced instants `t_j = j·t_max/(n−1)`.
    pub fn uniform(step: f64, t_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n_t", "need at least two sample instants"));
        }
        let times = (0..n).map(|j| t_max * j as f64 / (n - 1) as f64).collect();
        Self::new(step, t_max, times)
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::invalid("step", "must be finite and > 0"));
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(Error::invalid("t_max", "must be finite and >= 0"));
        }
        if self.sample_times.is_empty() {
            return Err(Error::Empty("sample_times"));
        }
        if self
            .sample_times
            .iter()
            .any(|&t| !(0.0..=self.t_max).contains(&t))
        {
            return Err(Error::invalid("sample_times", "must lie within [0, t_max]"));
        }
        if self.sample_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("sample_times", "must be nondecreasing"));
        }
        Ok(())
    }
}

/// `H₀` and `C` in the cheapest representation that holds them.
enum Generator {
    Real {
        h0: DMatrix<f64>,
        c: DMatrix<f64>,
    },
    Complex {
        h0: DMatrix<C64>,
        c: DMatrix<C64>,
    },
}

/// `V`, `λ` of a Hermitian matrix; applies `exp(−iτM)`.
enum Eigen {
    Real(DMatrix<f64>, DVector<f64>),
    Complex(DMatrix<C64>, DVector<f64>),
}

impl Eigen {
    fn apply(&self, tau: f64, psi: &DVector<C64>) -> DVector<C64> {
        let phase = |lambda: f64| C64::from_polar(1.0, -lambda * tau);
        match self {
            Eigen::Real(v, lambda) => {
                let re = psi.map(|z| z.re);
                let im = psi.map(|z| z.im);
                let (pr, pi) = (v.tr_mul(&re), v.tr_mul(&im));
                let mut cr = DVector::zeros(lambda.len());
                let mut ci = DVector::zeros(lambda.len());
                for k in 0..lambda.len() {
                    let z = C64::new(pr[k], pi[k]) * phase(lambda[k]);
                    cr[k] = z.re;
                    ci[k] = z.im;
                }
                let (or, oi) = (v * cr, v * ci);
                DVector::from_fn(or.len(), |i, _| C64::new(or[i], oi[i]))
            }
            Eigen::Complex(v, lambda) => {
                let mut coef = v.ad_mul(psi);
                for k in 0..lambda.len() {
                    coef[k] *= phase(lambda[k]);
                }
                v * coef
            }
        }
    }
}

impl Generator {
    fn new(h0: &Operator, c: &Operator) -> Self {
        match (h0.to_real(), c.to_real()) {
            (Some(h0), Some(c)) => Generator::Real { h0, c },
            _ => Generator::Complex {
                h0: h0.matrix().clone(),
                c: c.matrix().clone(),
            },
        }
    }

    /// Eigensystem of `s·H₀ + a·C`.
    fn eigen(&self, s: f64, a: f64) -> Eigen {
        match self {
            Generator::Real { h0, c } => {
                let eig = SymmetricEigen::new(h0 * s + c * a);
                Eigen::Real(eig.eigenvectors, eig.eigenvalues)
            }
            Generator::Complex { h0, c } => {
                let m = h0 * C64::new(s, 0.0) + c * C64::new(a, 0.0);
                let eig = SymmetricEigen::new(m);
                Eigen::Complex(eig.eigenvectors, eig.eigenvalues)
            }
        }
    }

    /// `exp(−iτ(s·H₀ + a·C)) ψ`.
    fn exp_apply(&self, s: f64, a: f64, tau: f64, psi: &DVector<C64>) -> DVector<C64> {
        if let Generator::Real { h0, c } = self {
            let mut m = h0 * s + c * a;
            let n = m.nrows();
            let shift = m.trace() / n as f64;
            for i in 0..n {
                m[(i, i)] -= shift;
            }
            let bound = (0..n)
                .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
                .fold(0.0, f64::max);
            if tau * bound <= TAYLOR_RADIUS {
                return taylor_real(&m, tau, psi) * C64::from_polar(1.0, -shift * tau);
            }
        }
        self.eigen(s, a).apply(tau, psi)
    }
}

/// Largest `τ‖M‖_∞` handled by the series; beyond it the eigendecomposition is used.
const TAYLOR_RADIUS: f64 = 1.0;

/// Power series of `exp(−iτM)ψ` for real symmetric `M`, summed until the
/// terms drop below rounding. With `τ‖M‖ ≤ 1` that takes at most ~20 terms.
fn taylor_real(m: &DMatrix<f64>, tau: f64, psi: &DVector<C64>) -> DVector<C64> {
    let n = psi.len();
    let mut re = psi.map(|z| z.re);
    let mut im = psi.map(|z| z.im);
    let mut sum_re = re.clone();
    let mut sum_im = im.clone();
    let mut next_re = DVector::zeros(n);
    let mut next_im = DVector::zeros(n);
    for k in 1..=40 {
        let f = tau / k as f64;
        // (−iτM/k)(x + iy) = τM y/k − iτM x/k
        next_re.gemv(f, m, &im, 0.0);
        next_im.gemv(-f, m, &re, 0.0);
        std::mem::swap(&mut re, &mut next_re);
        std::mem::swap(&mut im, &mut next_im);
        sum_re += &re;
        sum_im += &im;
        if re.amax().max(im.amax()) < 1e-18 {
            break;
        }
    }
    DVector::from_fn(n, |i, _| C64::new(sum_re[i], sum_im[i]))
}

struct Stepper<'a> {
    gen: Generator,
    drive: &'a DriveSpec,
    integrator: Integrator,
    /// Eigensystem of `H₀`, reused when the drive is off.
    free: Option<Eigen>,
}

impl<'a> Stepper<'a> {
    fn new(h0: &Operator, drive: &'a DriveSpec, integrator: Integrator) -> Self {
        let gen = Generator::new(h0, &drive.coupling);
        let free = (drive.amplitude == 0.0).then(|| gen.eigen(1.0, 0.0));
        Self {
            gen,
            drive,
            integrator,
            free,
        }
    }

    fn step(&self, t: f64, h: f64, psi: &DVector<C64>) -> DVector<C64> {
        if let Some(free) = &self.free {
            return free.apply(h, psi);
        }
        match self.integrator {
            Integrator::Midpoint => self.gen.exp_apply(1.0, self.drive.value(t + h / 2.0), h, psi),
            Integrator::CommutatorFree4 => {
                let r = 3f64.sqrt() / 6.0;
                let (alpha, beta) = (0.25 + r, 0.25 - r);
                let f1 = self.drive.value(t + (0.5 - r) * h);
                let f2 = self.drive.value(t + (0.5 + r) * h);
                let first = self.gen.exp_apply(0.5, alpha * f1 + beta * f2, h, psi);
                self.gen.exp_apply(0.5, beta * f1 + alpha * f2, h, &first)
            }
        }
    }
}

/// States at each of `config.sample_times`, starting from `initial` at `t = 0`.
///
/// Each interval between consecutive samples is split into the fewest equal
/// substeps no longer than `config.step`.
pub fn propagate(
    h0: &Operator,
    drive: &DriveSpec,
    config: &PropagationConfig,
    initial: &StateVector,
) -> Result<Vec<StateVector>> {
    drive.validate()?;
    config.validate()?;
    if h0.dim() != initial.dim() || drive.coupling.dim() != h0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h0.dim(),
            got: if initial.dim() != h0.dim() {
                initial.dim()
            } else {
                drive.coupling.dim()
            },
        });
    }
    let norm0 = initial.norm();
    if (norm0 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm0));
    }

    let stepper = Stepper::new(h0, drive, config.integrator);
    let mut psi = initial.amplitudes().clone();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(config.sample_times.len());
    for &target in &config.sample_times {
        let span = target - t;
        if span > 0.0 {
            let n = ((span / config.step) - 1e-9).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for k in 0..n {
                psi = stepper.step(t + k as f64 * h, h, &psi);
            }
            t = target;
        }
        let drift = (psi.norm() - 1.0).abs();
        if !(drift <= NORM_DRIFT_LIMIT) {
            return Err(Error::NormDrift {
                drift,
                time: t,
                step: config.step,
            });
        }
        out.push(StateVector::from_raw(psi.clone()));
    }
    Ok(out)
}

/// `⟨σ_z^{(i)}⟩` at `measure_time` for every drive frequency, starting from
/// the ground state of `H₀`. Rows follow `omega_grid`.
pub fn driven_observable_scan(
    spec: &NetworkSpec,
    omega_grid: &[f64],
    measure_time: f64,
    drive_amplitude: f64,
    step: Option<f64>,
) -> Result<Vec<Vec<f64>>> {
    if omega_grid.is_empty() {
        return Err(Error::Empty("omega grid"));
    }
    let omega_max = omega_grid.iter().cloned().fold(0.0, f64::max);
    let h0 = spec.hamiltonian()?;
    let coupling = spec.drive_operator()?;
    let ground = diagonalize(&h0)?.ground_state();
    let integrator = Integrator::default();
    let step = step.unwrap_or_else(|| integrator.default_step(omega_max));
    let config = PropagationConfig::new(step, measure_time, vec![measure_time])?;
    omega_grid
        .par_iter()
        .map(|&omega| {
            let drive = DriveSpec::new(drive_amplitude, omega, coupling.clone())?;
            let states = propagate(&h0, &drive, &config, &ground)?;
            Ok(sigma_z_profile(&states[0]))
        })
        .collect()
}

/// Settings of the time-domain susceptibility estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Total number of drive periods propagated.
    pub periods: usize,
    /// Trailing periods used in the fit.
    pub fit_periods: usize,
    pub samples_per_period: usize,
    pub integrator: Integrator,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            periods: 40,
            fit_periods: 30,
            samples_per_period: 32,
            integrator: Integrator::default(),
        }
    }
}

/// Hann-weighted least-squares fit `x(t) ≈ p sin ωt + q cos ωt` over the
/// sampled span. Returns `(p, q)`.
pub fn fit_harmonic(times: &[f64], values: &[f64], omega: f64) -> Result<(f64, f64)> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            got: values.len(),
        });
    }
    if times.len() < 3 {
        return Err(Error::Empty("harmonic fit samples"));
    }
    let (t0, t1) = (times[0], times[times.len() - 1]);
    let (mut ss, mut sc, mut cc, mut xs, mut xc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &x) in times.iter().zip(values) {
        let w = (PI * (t - t0) / (t1 - t0)).sin().powi(2);
        let (s, c) = (omega * t).sin_cos();
        ss += w * s * s;
        sc += w * s * c;
        cc += w * c * c;
        xs += w * x * s;
        xc += w * x * c;
    }
    let det = ss * cc - sc * sc;
    if det.abs() < 1e-300 {
        return Err(Error::invalid("omega", "harmonic fit is singular"));
    }
    Ok(((xs * cc - xc * sc) / det, (xc * ss - xs * sc) / det))
}

/// Susceptibility `⟨⟨A; C⟩⟩(ω)` estimated by driving the ground state of `h0`
/// and projecting `δ⟨A⟩(t)` on the drive frequency. Undamped, so it compares
/// to the spectral form away from resonances.
pub fn estimate_susceptibility(
    h0: &Operator,
    observable: &Operator,
    drive: &DriveSpec,
    options: &OracleOptions,
) -> Result<C64> {
    drive.validate()?;
    if !(drive.amplitude > 0.0) {
        return Err(Error::invalid("drive_amplitude", "must be > 0 for a response estimate"));
    }
    if options.fit_periods == 0 || options.fit_periods > options.periods || options.samples_per_period < 4 {
        return Err(Error::invalid("oracle", "need 0 < fit_periods <= periods and >= 4 samples per period"));
    }
    let spectrum = diagonalize(h0)?;
    let ground = spectrum.ground_state();
    let e = spectrum.eigenvalues();
    let spread = e[e.len() - 1] - e[0];
    let step = options.integrator.default_step(drive.omega.max(spread));

    let period = 2.0 * PI / drive.omega;
    let t_max = options.periods as f64 * period;
    let t_fit = (options.periods - options.fit_periods) as f64 * period;
    let n = options.fit_periods * options.samples_per_period;
    let times: Vec<f64> = (0..=n)
        .map(|k| t_fit + (t_max - t_fit) * k as f64 / n as f64)
        .collect();
    let config = PropagationConfig::new(step, t_max, times.clone())?.with_integrator(options.integrator);

    let baseline = expectation(observable, &ground)?;
    let states = propagate(h0, drive, &config, &ground)?;
    let deltas = states
        .iter()
        .map(|s| Ok(expectation(observable, s)? - baseline))
        .collect::<Result<Vec<f64>>>()?;
    let (p, q) = fit_harmonic(&times, &deltas, drive.omega)?;
    Ok(C64::new(p, -q) / drive.amplitude)
}
