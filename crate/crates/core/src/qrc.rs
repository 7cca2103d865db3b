//! Frequency-encoded quantum reservoir computing.
//!
//! An input `s ∈ [0,1]` sets the drive frequency `ω = ω_min + s(ω_max − ω_min)`;
//! the network starts in its ground state, is driven for `t_max`, and the
//! qubit polarizations sampled at `n_t` instants form the feature vector `m`.
//! Features are folded into a classical state
//! `r_k = γ Ŝ^{n_S} r_{k−1} + B̂ m_k` read out linearly.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{propagate, DriveSpec, Integrator, PropagationConfig};
use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::pauli::{sigma_x_profile, sigma_z_profile, Operator, StateVector};
use crate::spectra::diagonalize;

/// Content of the trailing feature slot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiasMode {
    /// Constant 1.
    #[default]
    Constant,
    /// The current input `s_k`.
    Input,
}

/// Per-qubit observables recorded at each instant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableSet {
    #[default]
    SigmaZ,
    /// `σ_z` of every qubit followed by `σ_x` of every qubit.
    SigmaZx,
}

impl ObservableSet {
    pub fn per_qubit(self) -> usize {
        match self {
            ObservableSet::SigmaZ => 1,
            ObservableSet::SigmaZx => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReservoirConfig {
    pub gamma: f64,
    pub n_shift: usize,
    pub l_r: usize,
    pub n_t: usize,
    pub t_max: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub drive_amplitude: f64,
    pub washout: usize,
    pub bias: BiasMode,
    pub observables: ObservableSet,
    pub integrator: Integrator,
    /// Propagation step; `None` picks the integrator default for `omega_max`.
    pub step: Option<f64>,
}

impl Default for ReservoirConfig {
    fn default() -> Self {
        Self {
            gamma: 0.6,
            n_shift: 1,
            l_r: 400,
            n_t: 6,
            t_max: 2.0 * PI / 0.2,
            omega_min: 0.2,
            omega_max: 0.6,
            drive_amplitude: 1e-3,
            washout: 50,
            bias: BiasMode::Constant,
            observables: ObservableSet::SigmaZ,
            integrator: Integrator::default(),
            step: None,
        }
    }
}

impl ReservoirConfig {
    /// Length of `m`: observables × instants + 1.
    pub fn feature_len(&self, n_qubits: usize) -> usize {
        self.observables.per_qubit() * n_qubits * self.n_t + 1
    }

    pub fn step(&self) -> f64 {
        self.step
            .unwrap_or_else(|| self.integrator.default_step(self.omega_max))
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::invalid("reservoir.gamma", format!("{} must lie in (0, 1)", self.gamma)));
        }
        if !(self.omega_min > 0.0 && self.omega_min.is_finite()) {
            return Err(Error::invalid("reservoir.omega_min", "must be positive"));
        }
        if !(self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            return Err(Error::invalid(
                "reservoir.omega_max",
                format!("{} must exceed omega_min = {}", self.omega_max, self.omega_min),
            ));
        }
        if self.n_t < 2 {
            return Err(Error::invalid("reservoir.n_t", "need at least two sample instants"));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::invalid("reservoir.t_max", "must be positive"));
        }
        if !(self.drive_amplitude >= 0.0 && self.drive_amplitude.is_finite()) {
            return Err(Error::invalid("reservoir.drive_amplitude", "must be >= 0"));
        }
        if let Some(h) = self.step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::invalid("reservoir.step", "must be positive"));
            }
        }
        let need = self.feature_len(n_qubits);
        if self.l_r < need {
            return Err(Error::invalid(
                "reservoir.l_r",
                format!("{} is smaller than the feature length {need}", self.l_r),
            ));
        }
        Ok(())
    }
}

/// `m_k`: time-major observables with a trailing bias slot.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub entries: Vec<f64>,
}

/// `r_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirState {
    pub entries: Vec<f64>,
}

impl ReservoirState {
    pub fn zeros(l_r: usize) -> Self {
        Self {
            entries: vec![0.0; l_r],
        }
    }
}

pub fn encode_frequency(s: f64, cfg: &ReservoirConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::invalid("input", format!("{s} outside [0, 1]")));
    }
    Ok(cfg.omega_min + s * (cfg.omega_max - cfg.omega_min))
}

/// Drives one network and memoizes the raw observable block per input.
///
/// Inputs are keyed by their exact bit pattern, so repeated values (for
/// instance shared training windows) are propagated once.
pub struct FeatureMap {
    cfg: ReservoirConfig,
    h0: Operator,
    coupling: Operator,
    ground: StateVector,
    times: PropagationConfig,
    cache: Arc<Mutex<HashMap<u64, Vec<f64>>>>,
}

impl FeatureMap {
    pub fn new(spec: &NetworkSpec, cfg: &ReservoirConfig) -> Result<Self> {
        spec.validate()?;
        cfg.validate(spec.n_qubits())?;
        let h0 = spec.hamiltonian()?;
        let ground = diagonalize(&h0)?.ground_state();
        let times = PropagationConfig::uniform(cfg.step(), cfg.t_max, cfg.n_t)?.with_integrator(cfg.integrator);
        Ok(Self {
            cfg: cfg.clone(),
            coupling: spec.drive_operator()?,
            h0,
            ground,
            times,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn config(&self) -> &ReservoirConfig {
        &self.cfg
    }

    /// Same network and measurements with a different reservoir dimension;
    /// the feature cache is shared.
    pub fn with_reservoir_size(&self, l_r: usize) -> Result<Self> {
        let cfg = ReservoirConfig { l_r, ..self.cfg.clone() };
        cfg.validate(self.h0.n_qubits())?;
        Ok(Self {
            cfg,
            h0: self.h0.clone(),
            coupling: self.coupling.clone(),
            ground: self.ground.clone(),
            times: self.times.clone(),
            cache: Arc::clone(&self.cache),
        })
    }

    /// Number of distinct inputs measured so far.
    pub fn cached_inputs(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }

    pub fn feature_len(&self) -> usize {
        self.cfg.feature_len(self.h0.n_qubits())
    }

    /// Observables at the sample instants for a drive at `omega`, without bias.
    pub fn observe(&self, omega: f64) -> Result<Vec<f64>> {
        let drive = DriveSpec::new(self.cfg.drive_amplitude, omega, self.coupling.clone())?;
        let states = propagate(&self.h0, &drive, &self.times, &self.ground)?;
        let mut out = Vec::with_capacity(self.feature_len() - 1);
        for psi in &states {
            out.extend(sigma_z_profile(psi));
            if self.cfg.observables == ObservableSet::SigmaZx {
                out.extend(sigma_x_profile(psi));
            }
        }
        Ok(out)
    }

    fn block(&self, s: f64) -> Result<Vec<f64>> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&s.to_bits()) {
            return Ok(hit.clone());
        }
        let block = self.observe(encode_frequency(s, &self.cfg)?)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert(s.to_bits(), block.clone());
        Ok(block)
    }

    pub fn features(&self, s: f64) -> Result<FeatureVector> {
        let mut entries = self.block(s)?;
        entries.push(match self.cfg.bias {
            BiasMode::Constant => 1.0,
            BiasMode::Input => s,
        });
        Ok(FeatureVector { entries })
    }

    /// Measures every uncached input in parallel.
    pub fn prefetch(&self, inputs: &[f64]) -> Result<()> {
        let mut todo: Vec<f64> = {
            let cache = self.cache.lock().expect("cache lock");
            inputs
                .iter()
                .copied()
                .filter(|s| !cache.contains_key(&s.to_bits()))
                .collect()
        };
        todo.sort_by(f64::total_cmp);
        todo.dedup_by(|a, b| a.to_bits() == b.to_bits());
        let blocks = todo
            .par_iter()
            .map(|&s| Ok((s.to_bits(), self.observe(encode_frequency(s, &self.cfg)?)?)))
            .collect::<Result<Vec<_>>>()?;
        self.cache.lock().expect("cache lock").extend(blocks);
        Ok(())
    }
}

/// One-off feature measurement at frequency `omega` (bias 1).
pub fn measure_features(spec: &NetworkSpec, omega: f64, cfg: &ReservoirConfig) -> Result<FeatureVector> {
    let map = FeatureMap::new(spec, cfg)?;
    let mut entries = map.observe(omega)?;
    entries.push(1.0);
    Ok(FeatureVector { entries })
}

/// `(Ŝr)_i = r_{(i+n) mod l}`.
pub fn shift(r: &ReservoirState, n_shift: usize) -> ReservoirState {
    let l = r.entries.len();
    if l == 0 {
        return r.clone();
    }
    ReservoirState {
        entries: (0..l).map(|i| r.entries[(i + n_shift) % l]).collect(),
    }
}

/// Places `m_q` at `q·⌊l_r/len(m)⌋`, zeros elsewhere.
pub fn lengthen(m: &FeatureVector, l_r: usize) -> Result<ReservoirState> {
    let len = m.entries.len();
    if len == 0 {
        return Err(Error::Empty("feature vector"));
    }
    if l_r < len {
        return Err(Error::invalid("l_r", format!("{l_r} is smaller than the feature length {len}")));
    }
    let stride = l_r / len;
    let mut entries = vec![0.0; l_r];
    for (q, &v) in m.entries.iter().enumerate() {
        entries[q * stride] = v;
    }
    Ok(ReservoirState { entries })
}

pub fn reservoir_step(r_prev: &ReservoirState, m: &FeatureVector, cfg: &ReservoirConfig) -> Result<ReservoirState> {
    if r_prev.entries.len() != cfg.l_r {
        return Err(Error::DimensionMismatch {
            expected: cfg.l_r,
            got: r_prev.entries.len(),
        });
    }
    let mut next = lengthen(m, cfg.l_r)?;
    let shifted = shift(r_prev, cfg.n_shift);
    for (x, s) in next.entries.iter_mut().zip(&shifted.entries) {
        *x += cfg.gamma * s;
    }
    Ok(next)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Readout {
    pub weights: Vec<f64>,
}

impl Readout {
    pub fn predict(&self, r: &ReservoirState) -> f64 {
        self.weights.iter().zip(&r.entries).map(|(w, x)| w * x).sum()
    }
}

/// Minimum-norm least squares `R w ≈ y`, singular values below
/// `1e-10·σ_max` treated as zero.
pub fn train_readout(states: &[ReservoirState], targets: &[f64]) -> Result<Readout> {
    if states.is_empty() {
        return Err(Error::Empty("training states"));
    }
    if states.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: states.len(),
            got: targets.len(),
        });
    }
    let l = states[0].entries.len();
    if let Some(bad) = states.iter().find(|r| r.entries.len() != l) {
        return Err(Error::DimensionMismatch {
            expected: l,
            got: bad.entries.len(),
        });
    }
    let r = DMatrix::from_fn(states.len(), l, |i, j| states[i].entries[j]);
    if r.amax() == 0.0 {
        return Err(Error::ZeroDesign);
    }
    let svd = r.svd(true, true);
    let cutoff = 1e-10 * svd.singular_values.max();
    let w = svd
        .solve(&DVector::from_column_slice(targets), cutoff)
        .map_err(|e| Error::invalid("readout", e))?;
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("readout", "non-finite weights"));
    }
    Ok(Readout {
        weights: w.iter().copied().collect(),
    })
}

/// Autonomous forecast: each clamped prediction becomes the next input.
///
/// Yields `ỹ` before clamping; the reservoir is only advanced when the next
/// value is requested, so stopping early costs no extra propagation.
pub struct ClosedLoop<'a> {
    map: &'a FeatureMap,
    readout: &'a Readout,
    state: ReservoirState,
    pending: Option<f64>,
    step: usize,
    done: bool,
}

impl<'a> ClosedLoop<'a> {
    pub fn new(map: &'a FeatureMap, readout: &'a Readout, warm_state: ReservoirState) -> Self {
        Self {
            map,
            readout,
            state: warm_state,
            pending: None,
            step: 0,
            done: false,
        }
    }

    fn advance(&mut self) -> Result<f64> {
        if let Some(s) = self.pending.take() {
            let m = self.map.features(s)?;
            self.state = reservoir_step(&self.state, &m, self.map.config())?;
        }
        let y = self.readout.predict(&self.state);
        if !y.is_finite() {
            return Err(Error::NonFinitePrediction(self.step));
        }
        self.pending = Some(y.clamp(0.0, 1.0));
        self.step += 1;
        Ok(y)
    }
}

impl Iterator for ClosedLoop<'_> {
    type Item = Result<f64>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.advance();
        self.done = out.is_err();
        Some(out)
    }
}

pub fn forecast_closed_loop(
    map: &FeatureMap,
    readout: &Readout,
    warm_state: &ReservoirState,
    horizon: usize,
) -> Result<Vec<f64>> {
    ClosedLoop::new(map, readout, warm_state.clone())
        .take(horizon)
        .collect()
}

/// Number of leading steps with `((ỹ − y)/σ)² < ε²`.
pub fn vpt(predicted: &[f64], truth: &[f64], epsilon: f64, sigma: f64) -> Result<usize> {
    if predicted.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: predicted.len(),
        });
    }
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma", "must be positive"));
    }
    Ok(predicted
        .iter()
        .zip(truth)
        .take_while(|(p, y)| ((*p - *y) / sigma).powi(2) < epsilon * epsilon)
        .count())
}

/// Population standard deviation.
pub fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Training and test lengths of one forecasting run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForecastProtocol {
    pub n_train: usize,
    pub horizon: usize,
    pub vpt_epsilon: f64,
}

impl Default for ForecastProtocol {
    fn default() -> Self {
        Self {
            n_train: 1000,
            horizon: 600,
            vpt_epsilon: 0.3,
        }
    }
}

impl ForecastProtocol {
    /// Samples consumed: washout, training pairs, and the test horizon.
    pub fn window_len(&self, washout: usize) -> usize {
        washout + self.n_train + 1 + self.horizon
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_train == 0 {
            return Err(Error::invalid("protocol.n_train", "must be positive"));
        }
        if !(self.vpt_epsilon > 0.0) {
            return Err(Error::invalid("protocol.vpt_epsilon", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ForecastOutcome {
    /// Open-loop one-step predictions over the training rows.
    pub fitted: Vec<f64>,
    /// Closed-loop predictions, possibly cut short at the first violation.
    pub predictions: Vec<f64>,
    /// Truth aligned with the full horizon.
    pub truth: Vec<f64>,
    pub vpt: usize,
    pub sigma: f64,
    pub readout: Readout,
}

/// Trains on the head of `window` and forecasts its tail.
///
/// Inputs `u_0 … u_{W+N}` drive the reservoir; rows `W … W+N−1` are regressed
/// on `u_{k+1}`, and the closed loop starts from the state after `u_{W+N}`.
/// `σ` is the standard deviation of the whole window. With `stop_early` the
/// forecast ends at the first step outside the VPT band.
pub fn run_forecast(
    map: &FeatureMap,
    protocol: &ForecastProtocol,
    window: &[f64],
    stop_early: bool,
) -> Result<ForecastOutcome> {
    protocol.validate()?;
    let cfg = map.config();
    let need = protocol.window_len(cfg.washout);
    if window.len() != need {
        return Err(Error::DimensionMismatch {
            expected: need,
            got: window.len(),
        });
    }
    let known = cfg.washout + protocol.n_train + 1;
    map.prefetch(&window[..known])?;

    let mut r = ReservoirState::zeros(cfg.l_r);
    let mut rows = Vec::with_capacity(protocol.n_train);
    for (k, &u) in window[..known].iter().enumerate() {
        r = reservoir_step(&r, &map.features(u)?, cfg)?;
        if k >= cfg.washout && k < known - 1 {
            rows.push(r.clone());
        }
    }
    let targets = &window[cfg.washout + 1..known];
    let readout = train_readout(&rows, targets)?;
    let fitted = rows.iter().map(|x| readout.predict(x)).collect();

    let truth = window[known..].to_vec();
    let sigma = std_dev(window);
    let mut predictions = Vec::with_capacity(protocol.horizon);
    for (y, p) in truth.iter().zip(ClosedLoop::new(map, &readout, r)) {
        let p = p?;
        predictions.push(p);
        if stop_early && ((p - y) / sigma).powi(2) >= protocol.vpt_epsilon.powi(2) {
            break;
        }
    }
    let vpt = vpt(&predictions, &truth[..predictions.len()], protocol.vpt_epsilon, sigma)?;
    Ok(ForecastOutcome {
        fitted,
        predictions,
        truth,
        vpt,
        sigma,
        readout,
    })
}
