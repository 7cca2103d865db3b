//! Strict experiment configuration.
//!
//! A config names one experiment plus optional blocks. Unknown keys are
//! rejected, as are blocks the experiment does not read. Missing blocks and
//! fields take the per-experiment defaults; [`ExperimentConfig::resolve`]
//! fills them in so the resolved form can be stored and replayed verbatim.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mackey_glass::MgConfig;
use crate::network::{inhomogeneous_deltas, sample_disorder, NetworkSpec, Topology};
use crate::qrc::{ForecastProtocol, ReservoirConfig};
use crate::qubit::QubitParams;
use crate::response::DEFAULT_ETA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Spectrum,
    Currents,
    Correlations,
    StaticFlux,
    ResponseSweep,
    ResponseMap,
    DisorderResponse,
    DrivenScan,
    QrcRun,
    QrcSweep,
    MackeyGlass,
}

/// Optional configuration blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Network,
    Probe,
    Flux,
    Disorder,
    Drive,
    Reservoir,
    Protocol,
    Mg,
    Series,
    Sweep,
}

impl Block {
    pub fn name(self) -> &'static str {
        match self {
            Block::Network => "network",
            Block::Probe => "probe",
            Block::Flux => "flux",
            Block::Disorder => "disorder",
            Block::Drive => "drive",
            Block::Reservoir => "reservoir",
            Block::Protocol => "protocol",
            Block::Mg => "mg",
            Block::Series => "series",
            Block::Sweep => "sweep",
        }
    }
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 11] = [
        ExperimentKind::Spectrum,
        ExperimentKind::Currents,
        ExperimentKind::Correlations,
        ExperimentKind::StaticFlux,
        ExperimentKind::ResponseSweep,
        ExperimentKind::ResponseMap,
        ExperimentKind::DisorderResponse,
        ExperimentKind::DrivenScan,
        ExperimentKind::QrcRun,
        ExperimentKind::QrcSweep,
        ExperimentKind::MackeyGlass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Spectrum => "spectrum",
            ExperimentKind::Currents => "currents",
            ExperimentKind::Correlations => "correlations",
            ExperimentKind::StaticFlux => "static-flux",
            ExperimentKind::ResponseSweep => "response-sweep",
            ExperimentKind::ResponseMap => "response-map",
            ExperimentKind::DisorderResponse => "disorder-response",
            ExperimentKind::DrivenScan => "driven-scan",
            ExperimentKind::QrcRun => "qrc-run",
            ExperimentKind::QrcSweep => "qrc-sweep",
            ExperimentKind::MackeyGlass => "mackey-glass",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::Spectrum => "energy levels of H0 with near-degenerate grouping",
            ExperimentKind::Currents => "loop currents of the ground and first excited state",
            ExperimentKind::Correlations => "ground-state current correlations C(1, i)",
            ExperimentKind::StaticFlux => "ground-state flux sum_i <sigma_z_i> versus external flux",
            ExperimentKind::ResponseSweep => "susceptibility versus drive frequency, with peak table",
            ExperimentKind::ResponseMap => "susceptibility on a flux x frequency grid",
            ExperimentKind::DisorderResponse => "frequency sweeps for a set of disorder seeds",
            ExperimentKind::DrivenScan => "driven <sigma_z_i> at a fixed time versus drive frequency",
            ExperimentKind::QrcRun => "train and forecast one Mackey-Glass window with the reservoir",
            ExperimentKind::QrcSweep => "valid prediction time over inhomogeneity, size, topology and seeds",
            ExperimentKind::MackeyGlass => "raw and normalized Mackey-Glass series",
        }
    }

    /// Blocks read by this experiment; any other block is a config error.
    pub fn blocks(self) -> &'static [Block] {
        use Block::*;
        match self {
            ExperimentKind::Spectrum | ExperimentKind::Currents | ExperimentKind::Correlations => &[Network],
            ExperimentKind::StaticFlux => &[Network, Flux],
            ExperimentKind::ResponseSweep => &[Network, Probe],
            ExperimentKind::ResponseMap => &[Network, Probe, Flux],
            ExperimentKind::DisorderResponse => &[Network, Probe, Disorder],
            ExperimentKind::DrivenScan => &[Network, Drive],
            ExperimentKind::QrcRun => &[Network, Reservoir, Protocol, Mg, Series],
            ExperimentKind::QrcSweep => &[Network, Reservoir, Protocol, Mg, Series, Sweep],
            ExperimentKind::MackeyGlass => &[Mg, Series],
        }
    }

    /// Network parameters this experiment reproduces when none are given.
    fn default_network(self) -> NetworkConfig {
        let base = NetworkConfig {
            topology: Some(TopologyKind::Linear),
            n_qubits: Some(5),
            coupling_energy: Some(-0.2),
            i_s: Some(1.0),
            delta: Some(0.2),
            f: Some(0.52),
            delta_dispersion: Some(0.0),
            deltas: None,
            drive_site: None,
            drive_weights: None,
            disorder_amplitude: Some(0.0),
        };
        match self {
            ExperimentKind::DisorderResponse => NetworkConfig {
                coupling_energy: Some(-1e-6),
                disorder_amplitude: Some(0.1),
                ..base
            },
            ExperimentKind::DrivenScan | ExperimentKind::QrcRun | ExperimentKind::QrcSweep => NetworkConfig {
                f: Some(0.45),
                delta_dispersion: Some(0.1),
                drive_site: Some(5),
                ..base
            },
            _ => base,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyKind {
    Linear,
    Cross,
    Isolated,
}

impl TopologyKind {
    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::Linear => "linear",
            TopologyKind::Cross => "cross",
            TopologyKind::Isolated => "isolated",
        }
    }
}

/// Network fields; absent entries take the experiment's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub topology: Option<TopologyKind>,
    pub n_qubits: Option<usize>,
    /// Nearest-neighbour coupling energy `M I_S²` (negative).
    pub coupling_energy: Option<f64>,
    pub i_s: Option<f64>,
    pub delta: Option<f64>,
    pub f: Option<f64>,
    /// Tunneling energies spread linearly over `Δ[1−δ, 1+δ]`.
    pub delta_dispersion: Option<f64>,
    /// Explicit per-qubit tunneling energies; overrides `delta_dispersion`.
    pub deltas: Option<Vec<f64>>,
    /// Couple the line to this 1-based qubit only.
    pub drive_site: Option<usize>,
    /// Explicit line-coupling profile; overrides `drive_site`.
    pub drive_weights: Option<Vec<f64>>,
    /// Half-width of the uniform fabrication disorder, drawn from `seed`.
    pub disorder_amplitude: Option<f64>,
}

impl NetworkConfig {
    fn merged(&self, defaults: NetworkConfig) -> NetworkConfig {
        NetworkConfig {
            topology: self.topology.or(defaults.topology),
            n_qubits: self.n_qubits.or(defaults.n_qubits),
            coupling_energy: self.coupling_energy.or(defaults.coupling_energy),
            i_s: self.i_s.or(defaults.i_s),
            delta: self.delta.or(defaults.delta),
            f: self.f.or(defaults.f),
            delta_dispersion: self.delta_dispersion.or(defaults.delta_dispersion),
            deltas: self.deltas.clone().or(defaults.deltas),
            drive_site: self.drive_site.or(defaults.drive_site),
            drive_weights: self.drive_weights.clone().or(defaults.drive_weights),
            disorder_amplitude: self.disorder_amplitude.or(defaults.disorder_amplitude),
        }
    }

    fn n(&self) -> usize {
        if self.topology == Some(TopologyKind::Cross) {
            5
        } else {
            self.n_qubits.unwrap_or(5)
        }
    }

    /// Builds the network; `seed` draws the disorder, if any.
    pub fn build(&self, seed: u64) -> Result<NetworkSpec> {
        self.build_inner(seed).map_err(|e| prefix_field(e, "network"))
    }

    fn build_inner(&self, seed: u64) -> Result<NetworkSpec> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::invalid(name, "missing"));
        let n = self.n();
        if self.topology == Some(TopologyKind::Cross) && self.n_qubits.is_some_and(|k| k != 5) {
            return Err(Error::invalid("n_qubits", "the cross topology has exactly 5 qubits"));
        }
        let m = need(self.coupling_energy, "coupling_energy")?;
        let topology = match self.topology.unwrap_or(TopologyKind::Linear) {
            TopologyKind::Linear => Topology::linear(n, m)?,
            TopologyKind::Cross => Topology::cross(m)?,
            TopologyKind::Isolated => Topology::isolated(n)?,
        };
        let base = QubitParams::new(need(self.i_s, "i_s")?, need(self.delta, "delta")?, need(self.f, "f")?)?;
        let deltas = match &self.deltas {
            Some(d) => d.clone(),
            None => inhomogeneous_deltas(base.delta, self.delta_dispersion.unwrap_or(0.0), n)?,
        };
        let mut spec = NetworkSpec::new(base, topology).with_deltas(deltas);
        spec = match (&self.drive_weights, self.drive_site) {
            (Some(w), _) => spec.with_drive_weights(w.clone()),
            (None, Some(site)) => spec.with_drive_site(site)?,
            (None, None) => spec,
        };
        let amplitude = self.disorder_amplitude.unwrap_or(0.0);
        if amplitude != 0.0 {
            spec = spec.with_disorder(sample_disorder(seed, amplitude, n)?);
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn prefix_field(e: Error, block: &str) -> Error {
    match e {
        Error::InvalidParameter { field, reason } => Error::InvalidParameter {
            field: format!("{block}.{field}"),
            reason,
        },
        other => other,
    }
}

/// Susceptibility probe and frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    pub eta: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    /// Defaults to 4001 for single sweeps and 401 per flux row for maps.
    pub omega_points: Option<usize>,
    /// Peak prominence as a fraction of the sweep maximum.
    pub prominence: f64,
    /// Observable weights `a_i`; the perturbation uses the network's line coupling.
    pub observable_weights: Option<Vec<f64>>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            eta: DEFAULT_ETA,
            omega_min: 0.0,
            omega_max: 1.0,
            omega_points: None,
            prominence: crate::response::DEFAULT_PROMINENCE,
            observable_weights: None,
        }
    }
}

/// Evenly spaced grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluxGridConfig {
    pub f_min: f64,
    pub f_max: f64,
    pub f_points: usize,
}

impl Default for FluxGridConfig {
    fn default() -> Self {
        Self {
            f_min: 0.4,
            f_max: 0.6,
            f_points: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DisorderConfig {
    /// Explicit seeds; otherwise `seed, seed+1, …, seed+n_seeds−1`.
    pub seeds: Option<Vec<u64>>,
    pub n_seeds: usize,
}

impl Default for DisorderConfig {
    fn default() -> Self {
        Self {
            seeds: None,
            n_seeds: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveConfig {
    pub amplitude: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    /// Defaults to `2π/omega_min`.
    pub measure_time: Option<f64>,
    /// Defaults to the integrator's step for `omega_max`.
    pub step: Option<f64>,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            amplitude: 1e-3,
            omega_min: 0.2,
            omega_max: 0.6,
            omega_points: 201,
            measure_time: None,
            step: None,
        }
    }
}

/// Mackey–Glass series bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeriesConfig {
    /// Samples written by the `mackey-glass` experiment.
    pub n_samples: usize,
    /// Forecasting windows start at a seed-drawn offset in `0..=max_offset`
    /// into one shared normalized series.
    pub max_offset: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            n_samples: 2000,
            max_offset: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Tunneling inhomogeneity values δ.
    pub delta_dispersions: Vec<f64>,
    pub reservoir_sizes: Vec<usize>,
    pub topologies: Vec<TopologyKind>,
    pub seeds: Option<Vec<u64>>,
    pub n_seeds: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            delta_dispersions: vec![0.0, 0.05, 0.1, 0.15, 0.2],
            reservoir_sizes: vec![200, 400],
            topologies: vec![TopologyKind::Linear, TopologyKind::Cross],
            seeds: None,
            n_seeds: 10,
        }
    }
}

fn seed_list(explicit: &Option<Vec<u64>>, n: usize, base: u64) -> Vec<u64> {
    explicit
        .clone()
        .unwrap_or_else(|| (0..n as u64).map(|k| base.wrapping_add(k)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux: Option<FluxGridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disorder: Option<DisorderConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reservoir: Option<ReservoirConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ForecastProtocol>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mg: Option<MgConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            seed: 0,
            output_dir: None,
            network: None,
            probe: None,
            flux: None,
            disorder: None,
            drive: None,
            reservoir: None,
            protocol: None,
            mg: None,
            series: None,
            sweep: None,
        }
    }

    /// Parses TOML or JSON. A run manifest is accepted too; its resolved
    /// config is used.
    pub fn from_str_with_format(text: &str, json: bool) -> Result<Self> {
        if json {
            let value: serde_json::Value =
                serde_json::from_str(text).map_err(|e| Error::Config(format!("JSON: {e}")))?;
            let inner = match value.get("resolved_config") {
                Some(cfg) => cfg.clone(),
                None => value,
            };
            serde_json::from_value(inner).map_err(|e| Error::Config(format!("JSON: {e}")))
        } else {
            toml::from_str(text).map_err(|e| Error::Config(format!("TOML: {e}")))
        }
    }

    /// Reads a `.toml` or `.json` file; other extensions are tried as JSON first.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Self::from_str_with_format(&text, false),
            Some("json") => Self::from_str_with_format(&text, true),
            _ => Self::from_str_with_format(&text, true).or_else(|_| Self::from_str_with_format(&text, false)),
        }
    }

    fn present_blocks(&self) -> Vec<Block> {
        let mut out = Vec::new();
        let mut check = |present: bool, b: Block| {
            if present {
                out.push(b)
            }
        };
        check(self.network.is_some(), Block::Network);
        check(self.probe.is_some(), Block::Probe);
        check(self.flux.is_some(), Block::Flux);
        check(self.disorder.is_some(), Block::Disorder);
        check(self.drive.is_some(), Block::Drive);
        check(self.reservoir.is_some(), Block::Reservoir);
        check(self.protocol.is_some(), Block::Protocol);
        check(self.mg.is_some(), Block::Mg);
        check(self.series.is_some(), Block::Series);
        check(self.sweep.is_some(), Block::Sweep);
        out
    }

    /// Fills every block the experiment reads with its defaults and checks
    /// the result. Resolving twice is a no-op.
    pub fn resolve(&self) -> Result<Self> {
        let kind = self.experiment;
        let accepted = kind.blocks();
        if let Some(b) = self.present_blocks().into_iter().find(|b| !accepted.contains(b)) {
            let names: Vec<&str> = accepted.iter().map(|b| b.name()).collect();
            return Err(Error::Config(format!(
                "block `{}` is not used by experiment `{kind}` (accepted: {})",
                b.name(),
                names.join(", ")
            )));
        }
        let has = |b: Block| accepted.contains(&b);
        let mut out = Self::new(kind);
        out.seed = self.seed;
        out.output_dir = self.output_dir.clone();
        if has(Block::Network) {
            out.network = Some(self.network.clone().unwrap_or_default().merged(kind.default_network()));
        }
        if has(Block::Probe) {
            let mut p = self.probe.clone().unwrap_or_default();
            let points = if kind == ExperimentKind::ResponseMap { 401 } else { 4001 };
            p.omega_points = Some(p.omega_points.unwrap_or(points));
            out.probe = Some(p);
        }
        if has(Block::Flux) {
            out.flux = Some(self.flux.unwrap_or_default());
        }
        if has(Block::Disorder) {
            let mut d = self.disorder.clone().unwrap_or_default();
            d.seeds = Some(seed_list(&d.seeds, d.n_seeds, self.seed));
            d.n_seeds = d.seeds.as_ref().map_or(0, Vec::len);
            out.disorder = Some(d);
        }
        if has(Block::Drive) {
            let mut d = self.drive.clone().unwrap_or_default();
            d.measure_time = Some(d.measure_time.unwrap_or(2.0 * PI / d.omega_min));
            out.drive = Some(d);
        }
        if has(Block::Reservoir) {
            out.reservoir = Some(self.reservoir.clone().unwrap_or_default());
        }
        if has(Block::Protocol) {
            out.protocol = Some(self.protocol.unwrap_or_default());
        }
        if has(Block::Mg) {
            out.mg = Some(self.mg.clone().unwrap_or_default());
        }
        if has(Block::Series) {
            out.series = Some(self.series.unwrap_or_default());
        }
        if has(Block::Sweep) {
            let mut s = self.sweep.clone().unwrap_or_default();
            s.seeds = Some(seed_list(&s.seeds, s.n_seeds, self.seed));
            s.n_seeds = s.seeds.as_ref().map_or(0, Vec::len);
            out.sweep = Some(s);
        }
        out.validate()?;
        Ok(out)
    }

    /// Semantic checks on a resolved config, with block-qualified field names.
    fn validate(&self) -> Result<()> {
        let n = match &self.network {
            Some(net) => {
                net.build(self.seed)?;
                net.n()
            }
            None => 0,
        };
        if let Some(p) = &self.probe {
            if !(p.eta > 0.0) {
                return Err(Error::invalid("probe.eta", "must be positive"));
            }
            grid_check("probe.omega", p.omega_min, p.omega_max, p.omega_points.unwrap_or(0))?;
            if !(0.0..1.0).contains(&p.prominence) {
                return Err(Error::invalid("probe.prominence", "must lie in [0, 1)"));
            }
            if let Some(w) = &p.observable_weights {
                if w.len() != n {
                    return Err(Error::invalid("probe.observable_weights", format!("need {n} entries")));
                }
            }
        }
        if let Some(fl) = &self.flux {
            grid_check("flux.f", fl.f_min, fl.f_max, fl.f_points)?;
        }
        if let Some(d) = &self.disorder {
            if d.seeds.as_ref().is_none_or(Vec::is_empty) {
                return Err(Error::invalid("disorder.seeds", "need at least one seed"));
            }
        }
        if let Some(d) = &self.drive {
            if !(d.amplitude >= 0.0 && d.amplitude.is_finite()) {
                return Err(Error::invalid("drive.amplitude", "must be >= 0"));
            }
            if !(d.omega_min > 0.0) {
                return Err(Error::invalid("drive.omega_min", "must be positive"));
            }
            grid_check("drive.omega", d.omega_min, d.omega_max, d.omega_points)?;
            if !d.measure_time.is_some_and(|t| t >= 0.0 && t.is_finite()) {
                return Err(Error::invalid("drive.measure_time", "must be finite and >= 0"));
            }
            if d.step.is_some_and(|h| !(h > 0.0)) {
                return Err(Error::invalid("drive.step", "must be positive"));
            }
        }
        if let Some(r) = &self.reservoir {
            r.validate(n)?;
        }
        if let Some(p) = &self.protocol {
            p.validate()?;
        }
        if let Some(m) = &self.mg {
            m.validate()?;
        }
        if let Some(s) = &self.series {
            if self.experiment == ExperimentKind::MackeyGlass && s.n_samples == 0 {
                return Err(Error::invalid("series.n_samples", "must be positive"));
            }
        }
        if let Some(s) = &self.sweep {
            if s.delta_dispersions.is_empty() || s.reservoir_sizes.is_empty() || s.topologies.is_empty() {
                return Err(Error::invalid("sweep", "delta_dispersions, reservoir_sizes and topologies must be non-empty"));
            }
            if s.seeds.as_ref().is_none_or(Vec::is_empty) {
                return Err(Error::invalid("sweep.seeds", "need at least one seed"));
            }
            let net = self.network.clone().unwrap_or_default();
            let r = self.reservoir.clone().unwrap_or_default();
            for &topology in &s.topologies {
                for &d in &s.delta_dispersions {
                    let cell = NetworkConfig {
                        topology: Some(topology),
                        delta_dispersion: Some(d),
                        deltas: None,
                        ..net.clone()
                    };
                    cell.build(self.seed).map_err(|e| prefix_field(e, "sweep"))?;
                    for &l_r in &s.reservoir_sizes {
                        ReservoirConfig { l_r, ..r.clone() }
                            .validate(cell.n())
                            .map_err(|e| prefix_field(e, "sweep"))?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn grid_check(field: &str, lo: f64, hi: f64, points: usize) -> Result<()> {
    if points == 0 {
        return Err(Error::invalid(format!("{field}_points"), "must be positive"));
    }
    if !(lo.is_finite() && hi.is_finite()) || (points > 1 && !(hi > lo)) {
        return Err(Error::invalid(format!("{field}_max"), "must exceed the minimum"));
    }
    Ok(())
}
