//! Mackey–Glass delay equation `ds/dt = β s(t−τ) / (1 + s(t−τ)ⁿ) − Γ s(t)`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DIVERGENCE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MgConfig {
    pub beta: f64,
    pub gamma_loss: f64,
    pub tau: f64,
    pub n_exp: f64,
    /// Spacing of returned samples.
    pub dt_sample: f64,
    /// Internal RK4 steps per sample.
    pub oversample: usize,
    /// Constant value of `s(t ≤ 0)`.
    pub history_value: f64,
    /// Leading samples dropped before output.
    pub transient: usize,
}

impl Default for MgConfig {
    fn default() -> Self {
        Self {
            beta: 0.2,
            gamma_loss: 0.1,
            tau: 17.0,
            n_exp: 10.0,
            dt_sample: 3.0,
            oversample: 30,
            history_value: 1.2,
            transient: 1000,
        }
    }
}

impl MgConfig {
    pub fn step(&self) -> f64 {
        self.dt_sample / self.oversample as f64
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("beta", self.beta),
            ("gamma_loss", self.gamma_loss),
            ("n_exp", self.n_exp),
            ("history_value", self.history_value),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("mg.{name}"), "must be finite"));
            }
        }
        if !(self.dt_sample > 0.0 && self.dt_sample.is_finite()) {
            return Err(Error::invalid("mg.dt_sample", "must be positive"));
        }
        if self.oversample == 0 {
            return Err(Error::invalid("mg.oversample", "must be at least 1"));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::invalid("mg.tau", "must be finite and >= 0"));
        }
        if self.tau > 0.0 && self.tau < self.step() {
            return Err(Error::invalid(
                "mg.tau",
                format!("delay {} is shorter than the internal step {}", self.tau, self.step()),
            ));
        }
        Ok(())
    }

    /// Time of output sample `index`.
    pub fn sample_time(&self, index: usize) -> f64 {
        (self.transient + index) as f64 * self.dt_sample
    }

    fn rhs(&self, s: f64, delayed: f64) -> f64 {
        self.beta * delayed / (1.0 + delayed.powf(self.n_exp)) - self.gamma_loss * s
    }
}

/// `(s, ds/dt)` on the internal grid, reaching back one delay.
struct History {
    h: f64,
    initial: f64,
    /// Global step index of `points[0]`.
    first: usize,
    points: VecDeque<(f64, f64)>,
    capacity: usize,
}

impl History {
    fn new(cfg: &MgConfig) -> Self {
        let h = cfg.step();
        Self {
            h,
            initial: cfg.history_value,
            first: 0,
            points: VecDeque::new(),
            capacity: (cfg.tau / h).ceil() as usize + 3,
        }
    }

    fn push(&mut self, s: f64, ds: f64) {
        self.points.push_back((s, ds));
        if self.points.len() > self.capacity {
            self.points.pop_front();
            self.first += 1;
        }
    }

    /// `s` at time `steps·h`, with `steps` possibly fractional.
    fn at(&self, steps: f64) -> f64 {
        if steps <= 0.0 {
            return self.initial;
        }
        let last = self.first + self.points.len() - 1;
        let mut k = steps.floor() as usize;
        let mut theta = steps - k as f64;
        if k >= last {
            // rounding past the newest stored point
            k = last - 1;
            theta = 1.0;
        }
        let k = k.max(self.first);
        let (s0, d0) = self.points[k - self.first];
        let (s1, d1) = self.points[k + 1 - self.first];
        let t2 = theta * theta;
        let t3 = t2 * theta;
        (2.0 * t3 - 3.0 * t2 + 1.0) * s0
            + (t3 - 2.0 * t2 + theta) * self.h * d0
            + (-2.0 * t3 + 3.0 * t2) * s1
            + (t3 - t2) * self.h * d1
    }
}

/// Fixed-step RK4 integration; returns `n_samples` values spaced by
/// `dt_sample`, after dropping `transient` samples. The delayed argument is
/// interpolated with cubic Hermite polynomials on the stored grid.
pub fn integrate(cfg: &MgConfig, n_samples: usize) -> Result<Vec<f64>> {
    cfg.validate()?;
    if n_samples == 0 {
        return Err(Error::Empty("n_samples"));
    }
    let h = cfg.step();
    let lag = cfg.tau / h;
    let delay_free = cfg.tau == 0.0;
    let mut hist = History::new(cfg);

    let mut s = cfg.history_value;
    let d0 = cfg.rhs(s, if delay_free { s } else { cfg.history_value });
    hist.push(s, d0);

    let total = cfg.transient + n_samples;
    let mut out = Vec::with_capacity(n_samples);
    if cfg.transient == 0 {
        out.push(s);
    }
    let mut step = 0usize;
    for sample in 1..total {
        for _ in 0..cfg.oversample {
            let n = step as f64;
            let delayed = |c: f64, stage: f64| if delay_free { stage } else { hist.at(n + c - lag) };
            let k1 = cfg.rhs(s, delayed(0.0, s));
            let y2 = s + 0.5 * h * k1;
            let k2 = cfg.rhs(y2, delayed(0.5, y2));
            let y3 = s + 0.5 * h * k2;
            let k3 = cfg.rhs(y3, delayed(0.5, y3));
            let y4 = s + h * k3;
            let k4 = cfg.rhs(y4, delayed(1.0, y4));
            s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            step += 1;
            if !(s.abs() <= DIVERGENCE) {
                return Err(Error::Divergence(step as f64 * h));
            }
            let ds = cfg.rhs(s, if delay_free { s } else { hist.at(step as f64 - lag) });
            hist.push(s, ds);
        }
        if sample >= cfg.transient {
            out.push(s);
        }
    }
    Ok(out)
}

/// Affine min-max map onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub min: f64,
    pub max: f64,
}

impl Normalizer {
    pub fn fit(series: &[f64]) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::Empty("series"));
        }
        let min = series.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = series.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(max > min) {
            return Err(Error::invalid("series", "constant series cannot be normalized"));
        }
        Ok(Self { min, max })
    }

    pub fn apply(&self, x: f64) -> f64 {
        (x - self.min) / (self.max - self.min)
    }

    pub fn invert(&self, y: f64) -> f64 {
        self.min + y * (self.max - self.min)
    }
}

pub fn normalize(series: &[f64]) -> Result<(Vec<f64>, Normalizer)> {
    let norm = Normalizer::fit(series)?;
    Ok((series.iter().map(|&x| norm.apply(x)).collect(), norm))
}

pub fn denormalize(series: &[f64], norm: &Normalizer) -> Vec<f64> {
    series.iter().map(|&y| norm.invert(y)).collect()
}
