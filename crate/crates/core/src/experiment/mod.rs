//! Config-driven experiments writing CSV tables and a JSON manifest.

mod config;

pub use config::{
    Block, DisorderConfig, DriveConfig, ExperimentConfig, ExperimentKind, FluxGridConfig, NetworkConfig,
    ProbeConfig, SeriesConfig, SweepConfig, TopologyKind,
};

use std::fs::File;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::dynamics::driven_observable_scan;
use crate::error::{Error, Result};
use crate::mackey_glass::{integrate, normalize, MgConfig, Normalizer};
use crate::network::{NetworkSpec, UniformStream};
use crate::qrc::{run_forecast, FeatureMap, ForecastOutcome, ForecastProtocol, ReservoirConfig};
use crate::response::{linspace, sweep_flux_frequency, sweep_frequency_with, FrequencySweep, ResponseProbe};
use crate::spectra::{
    current_correlation, degeneracy_groups, diagonalize, loop_currents, sigma_z_expectations, static_flux,
    DEFAULT_DEGENERACY_TOL,
};

pub const MANIFEST: &str = "manifest.json";

/// What a run produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub experiment: ExperimentKind,
    pub outputs: Vec<String>,
    /// Experiment-specific scalars (peak positions, VPT medians, ...).
    pub summary: serde_json::Value,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// CSV table with a fixed header; floats use the shortest round-trip form.
struct Table {
    name: String,
    writer: csv::Writer<File>,
}

impl Table {
    fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        let mut writer = csv::Writer::from_path(dir.join(name)).map_err(csv_err)?;
        writer.write_record(header).map_err(csv_err)?;
        Ok(Self {
            name: name.to_string(),
            writer,
        })
    }

    fn row(&mut self, fields: &[String]) -> Result<()> {
        self.writer.write_record(fields).map_err(csv_err)
    }

    fn finish(mut self, outputs: &mut Vec<String>) -> Result<()> {
        self.writer.flush()?;
        outputs.push(self.name);
        Ok(())
    }
}

macro_rules! fields {
    ($($x:expr),* $(,)?) => { vec![$($x.to_string()),*] };
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Resolves `cfg`, runs it into `out_dir` and writes the manifest last.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunReport> {
    let resolved = cfg.resolve()?;
    std::fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let report = dispatch(&resolved, out_dir)?;
    let manifest = json!({
        "experiment": resolved.experiment,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": resolved.seed,
        "resolved_config": resolved,
        "outputs": report.outputs,
        "summary": report.summary,
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.into()))?;
    std::fs::write(out_dir.join(MANIFEST), text + "\n")?;
    Ok(report)
}

fn dispatch(cfg: &ExperimentConfig, dir: &Path) -> Result<RunReport> {
    let mut outputs = Vec::new();
    let summary = match cfg.experiment {
        ExperimentKind::Spectrum => spectrum(cfg, dir, &mut outputs)?,
        ExperimentKind::Currents => currents(cfg, dir, &mut outputs)?,
        ExperimentKind::Correlations => correlations(cfg, dir, &mut outputs)?,
        ExperimentKind::StaticFlux => flux_curve(cfg, dir, &mut outputs)?,
        ExperimentKind::ResponseSweep => response_sweep(cfg, dir, &mut outputs)?,
        ExperimentKind::ResponseMap => response_map(cfg, dir, &mut outputs)?,
        ExperimentKind::DisorderResponse => disorder_response(cfg, dir, &mut outputs)?,
        ExperimentKind::DrivenScan => driven_scan(cfg, dir, &mut outputs)?,
        ExperimentKind::QrcRun => qrc_run(cfg, dir, &mut outputs)?,
        ExperimentKind::QrcSweep => qrc_sweep(cfg, dir, &mut outputs)?,
        ExperimentKind::MackeyGlass => mackey_glass(cfg, dir, &mut outputs)?,
    };
    Ok(RunReport {
        experiment: cfg.experiment,
        outputs,
        summary,
    })
}

fn network(cfg: &ExperimentConfig) -> Result<NetworkSpec> {
    cfg.network.as_ref().expect("resolved").build(cfg.seed)
}

fn spectrum(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let s = diagonalize(&network(cfg)?.hamiltonian()?)?;
    let groups = degeneracy_groups(&s, DEFAULT_DEGENERACY_TOL)?;
    let mut t = Table::create(dir, "eigenvalues.csv", &["index", "energy", "excitation", "group"])?;
    for (g, range) in groups.iter().enumerate() {
        for k in range.clone() {
            t.row(&fields![k, s.eigenvalues()[k], s.excitation(k), g])?;
        }
    }
    t.finish(outputs)?;
    Ok(json!({
        "ground_energy": s.ground_energy(),
        "gap": s.excitation(1),
        "groups": groups.len(),
    }))
}

fn currents(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let spec = network(cfg)?;
    let s = diagonalize(&spec.hamiltonian()?)?;
    let mut t = Table::create(dir, "currents.csv", &["level", "qubit", "sigma_z", "current"])?;
    let mut per_level = Vec::new();
    for level in 0..2 {
        let sz = sigma_z_expectations(&s, level)?;
        let cur = loop_currents(&s, level, &spec)?;
        for q in 0..spec.n_qubits() {
            t.row(&fields![level, q + 1, sz[q], cur[q]])?;
        }
        per_level.push(cur);
    }
    t.finish(outputs)?;
    Ok(json!({ "ground": per_level[0], "first_excited": per_level[1] }))
}

fn correlations(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let spec = network(cfg)?;
    let s = diagonalize(&spec.hamiltonian()?)?;
    let n = spec.n_qubits();
    let mut t = Table::create(dir, "correlations.csv", &["i", "j", "correlation"])?;
    let mut first_row = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let c = current_correlation(&s, 0, i, j)?;
            if i == 1 {
                first_row.push(c);
            }
            t.row(&fields![i, j, c])?;
        }
    }
    t.finish(outputs)?;
    Ok(json!({ "from_qubit_1": first_row }))
}

fn flux_curve(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let spec = network(cfg)?;
    let grid = cfg.flux.expect("resolved");
    let mut t = Table::create(dir, "static_flux.csv", &["f", "flux", "degenerate_ground_state"])?;
    let mut degenerate = 0;
    for f in linspace(grid.f_min, grid.f_max, grid.f_points) {
        let s = diagonalize(&spec.clone().with_flux(f).hamiltonian()?)?;
        let sf = static_flux(&s);
        degenerate += sf.degenerate_ground_state as usize;
        t.row(&fields![f, sf.flux, sf.degenerate_ground_state])?;
    }
    t.finish(outputs)?;
    Ok(json!({ "degenerate_points": degenerate }))
}

fn probe_for(cfg: &ExperimentConfig, spec: &NetworkSpec) -> Result<ResponseProbe> {
    let p = cfg.probe.as_ref().expect("resolved");
    let a = p
        .observable_weights
        .clone()
        .unwrap_or_else(|| vec![1.0; spec.n_qubits()]);
    ResponseProbe::new(a, spec.drive_weights.clone(), p.eta)
}

fn omega_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    let p = cfg.probe.as_ref().expect("resolved");
    linspace(p.omega_min, p.omega_max, p.omega_points.expect("resolved"))
}

const CHI_HEADER: [&str; 5] = ["re_chi", "im_chi", "amplitude", "phase_over_pi", "principal_phase_over_pi"];

fn sweep_for(cfg: &ExperimentConfig, spec: &NetworkSpec) -> Result<FrequencySweep> {
    let s = diagonalize(&spec.hamiltonian()?)?;
    let prominence = cfg.probe.as_ref().expect("resolved").prominence;
    sweep_frequency_with(&s, &probe_for(cfg, spec)?, spec, &omega_grid(cfg), prominence)
}

fn response_sweep(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let spec = network(cfg)?;
    let sweep = sweep_for(cfg, &spec)?;
    let mut header = vec!["f", "omega"];
    header.extend(CHI_HEADER);
    let mut t = Table::create(dir, "response.csv", &header)?;
    for x in &sweep.samples {
        t.row(&fields![
            spec.base.f,
            x.omega,
            x.chi.re,
            x.chi.im,
            x.amplitude(),
            x.phase_over_pi,
            x.principal_phase_over_pi()
        ])?;
    }
    t.finish(outputs)?;
    let mut p = Table::create(dir, "peaks.csv", &["omega", "amplitude", "prominence"])?;
    for peak in &sweep.peaks {
        p.row(&fields![peak.position, peak.height, peak.prominence])?;
    }
    p.finish(outputs)?;
    Ok(json!({
        "peaks": sweep.peaks.iter().map(|p| p.position).collect::<Vec<_>>(),
        "dominant_peak": sweep.dominant_peak().map(|p| p.position),
    }))
}

fn response_map(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let spec = network(cfg)?;
    let grid = cfg.flux.expect("resolved");
    let f_grid = linspace(grid.f_min, grid.f_max, grid.f_points);
    let map = sweep_flux_frequency(&spec, &probe_for(cfg, &spec)?, &f_grid, &omega_grid(cfg))?;
    let mut header = vec!["f", "omega"];
    header.extend(CHI_HEADER);
    let mut t = Table::create(dir, "response_map.csv", &header)?;
    let mut max_amp = 0.0f64;
    for (f, row) in map.f_grid.iter().zip(&map.rows) {
        for x in row {
            max_amp = max_amp.max(x.amplitude());
            t.row(&fields![
                f,
                x.omega,
                x.chi.re,
                x.chi.im,
                x.amplitude(),
                x.phase_over_pi,
                x.principal_phase_over_pi()
            ])?;
        }
    }
    t.finish(outputs)?;
    Ok(json!({ "max_amplitude": max_amp }))
}

fn disorder_response(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let seeds = cfg.disorder.as_ref().and_then(|d| d.seeds.clone()).expect("resolved");
    let net = cfg.network.as_ref().expect("resolved");
    let mut header = vec!["seed", "f", "omega"];
    header.extend(CHI_HEADER);
    let mut t = Table::create(dir, "disorder_response.csv", &header)?;
    let mut p = Table::create(dir, "disorder_peaks.csv", &["seed", "omega", "amplitude", "prominence"])?;
    let mut counts = Vec::new();
    for &seed in &seeds {
        let spec = net.build(seed)?;
        let sweep = sweep_for(cfg, &spec)?;
        for x in &sweep.samples {
            t.row(&fields![
                seed,
                spec.base.f,
                x.omega,
                x.chi.re,
                x.chi.im,
                x.amplitude(),
                x.phase_over_pi,
                x.principal_phase_over_pi()
            ])?;
        }
        for peak in &sweep.peaks {
            p.row(&fields![seed, peak.position, peak.height, peak.prominence])?;
        }
        counts.push(sweep.peaks.len());
    }
    t.finish(outputs)?;
    p.finish(outputs)?;
    Ok(json!({ "seeds": seeds, "peak_counts": counts }))
}

fn driven_scan(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let spec = network(cfg)?;
    let d = cfg.drive.as_ref().expect("resolved");
    let grid = linspace(d.omega_min, d.omega_max, d.omega_points);
    let rows = driven_observable_scan(&spec, &grid, d.measure_time.expect("resolved"), d.amplitude, d.step)?;
    let mut t = Table::create(dir, "driven_scan.csv", &["omega", "qubit", "sigma_z"])?;
    for (omega, row) in grid.iter().zip(&rows) {
        for (q, v) in row.iter().enumerate() {
            t.row(&fields![omega, q + 1, v])?;
        }
    }
    t.finish(outputs)?;
    Ok(json!({ "frequencies": grid.len() }))
}

/// Normalized Mackey–Glass series long enough for every window offset.
pub fn forecast_series(mg: &MgConfig, series: &SeriesConfig, window_len: usize) -> Result<(Vec<f64>, Normalizer)> {
    let raw = integrate(mg, series.max_offset + window_len)?;
    normalize(&raw)
}

/// Window start drawn from `seed`, in `0..=max_offset`.
pub fn window_offset(seed: u64, max_offset: usize) -> usize {
    UniformStream::new(seed).below(max_offset + 1)
}

fn train_rmse(outcome: &ForecastOutcome, window: &[f64], washout: usize) -> f64 {
    let targets = &window[washout + 1..];
    let sq: f64 = outcome.fitted.iter().zip(targets).map(|(p, y)| (p - y).powi(2)).sum();
    (sq / outcome.fitted.len() as f64).sqrt()
}

fn qrc_run(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let spec = network(cfg)?;
    let rc = cfg.reservoir.as_ref().expect("resolved");
    let protocol = cfg.protocol.expect("resolved");
    let series = cfg.series.expect("resolved");
    let len = protocol.window_len(rc.washout);
    let (full, norm) = forecast_series(cfg.mg.as_ref().expect("resolved"), &series, len)?;
    let offset = window_offset(cfg.seed, series.max_offset);
    let window = &full[offset..offset + len];
    let map = FeatureMap::new(&spec, rc)?;
    let outcome = run_forecast(&map, &protocol, window, false)?;

    let mut t = Table::create(dir, "qrc_run.csv", &["k", "phase", "s_k", "y_k", "y_tilde_k"])?;
    let w = rc.washout;
    let known = w + protocol.n_train + 1;
    // row k: input u_k (fed back from predictions once k ≥ known), target u_{k+1}
    for k in 0..len - 1 {
        let (phase, prediction) = if k < w {
            ("washout", None)
        } else if k < known - 1 {
            ("train", Some(outcome.fitted[k - w]))
        } else {
            ("forecast", outcome.predictions.get(k + 1 - known).copied())
        };
        let input = if k < known { window[k].to_string() } else { String::new() };
        t.row(&fields![k, phase, input, window[k + 1], opt(prediction)])?;
    }
    t.finish(outputs)?;
    Ok(json!({
        "offset": offset,
        "vpt": outcome.vpt,
        "sigma": outcome.sigma,
        "train_rmse": train_rmse(&outcome, window, w),
        "normalizer": norm,
    }))
}

/// One VPT measurement of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub topology: TopologyKind,
    pub delta_dispersion: f64,
    pub l_r: usize,
    pub seed: u64,
    pub offset: usize,
    pub vpt: usize,
    pub train_rmse: f64,
}

/// Everything a VPT sweep needs besides the grid itself.
#[derive(Debug, Clone)]
pub struct SweepSetup {
    pub network: NetworkConfig,
    pub reservoir: ReservoirConfig,
    pub protocol: ForecastProtocol,
    pub mg: MgConfig,
    pub series: SeriesConfig,
}

/// Valid prediction time over topology × δ × l_r × seed. Seeds pick window
/// offsets, so the same seed gives the same data window in every cell.
/// Features are computed once per (topology, δ) and shared across sizes.
pub fn vpt_sweep(setup: &SweepSetup, sweep: &SweepConfig, base_seed: u64) -> Result<Vec<SweepPoint>> {
    let seeds = sweep
        .seeds
        .clone()
        .unwrap_or_else(|| (0..sweep.n_seeds as u64).map(|k| base_seed.wrapping_add(k)).collect());
    let len = setup.protocol.window_len(setup.reservoir.washout);
    let (full, _) = forecast_series(&setup.mg, &setup.series, len)?;
    let mut out = Vec::new();
    for &topology in &sweep.topologies {
        for &delta_dispersion in &sweep.delta_dispersions {
            let spec = NetworkConfig {
                topology: Some(topology),
                delta_dispersion: Some(delta_dispersion),
                deltas: None,
                ..setup.network.clone()
            }
            .build(base_seed)?;
            let shared = FeatureMap::new(&spec, &setup.reservoir)?;
            for &l_r in &sweep.reservoir_sizes {
                let map = shared.with_reservoir_size(l_r)?;
                for &seed in &seeds {
                    let offset = window_offset(seed, setup.series.max_offset);
                    let window = &full[offset..offset + len];
                    let outcome = run_forecast(&map, &setup.protocol, window, true)?;
                    out.push(SweepPoint {
                        topology,
                        delta_dispersion,
                        l_r,
                        seed,
                        offset,
                        vpt: outcome.vpt,
                        train_rmse: train_rmse(&outcome, window, setup.reservoir.washout),
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

/// Median VPT per (topology, δ, l_r), in sweep order.
pub fn vpt_medians(points: &[SweepPoint]) -> Vec<(TopologyKind, f64, usize, f64)> {
    let mut keys: Vec<(TopologyKind, f64, usize)> = Vec::new();
    for p in points {
        let key = (p.topology, p.delta_dispersion, p.l_r);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(t, d, l)| {
            let v: Vec<f64> = points
                .iter()
                .filter(|p| p.topology == t && p.delta_dispersion == d && p.l_r == l)
                .map(|p| p.vpt as f64)
                .collect();
            (t, d, l, median(&v).expect("non-empty cell"))
        })
        .collect()
}

fn qrc_sweep(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let setup = SweepSetup {
        network: cfg.network.clone().expect("resolved"),
        reservoir: cfg.reservoir.clone().expect("resolved"),
        protocol: cfg.protocol.expect("resolved"),
        mg: cfg.mg.clone().expect("resolved"),
        series: cfg.series.expect("resolved"),
    };
    let points = vpt_sweep(&setup, cfg.sweep.as_ref().expect("resolved"), cfg.seed)?;
    let mut t = Table::create(
        dir,
        "qrc_sweep.csv",
        &["delta_dispersion", "l_r", "topology", "seed", "vpt", "offset", "train_rmse"],
    )?;
    for p in &points {
        t.row(&fields![p.delta_dispersion, p.l_r, p.topology.name(), p.seed, p.vpt, p.offset, p.train_rmse])?;
    }
    t.finish(outputs)?;
    let medians = vpt_medians(&points);
    let mut m = Table::create(dir, "qrc_sweep_medians.csv", &["delta_dispersion", "l_r", "topology", "median_vpt"])?;
    for (topology, d, l, v) in &medians {
        m.row(&fields![d, l, topology.name(), v])?;
    }
    m.finish(outputs)?;
    let summary: Vec<_> = medians
        .iter()
        .map(|(t, d, l, v)| json!({ "topology": t, "delta_dispersion": d, "l_r": l, "median_vpt": v }))
        .collect();
    Ok(json!({ "medians": summary }))
}

fn mackey_glass(cfg: &ExperimentConfig, dir: &Path, outputs: &mut Vec<String>) -> Result<serde_json::Value> {
    let mg = cfg.mg.as_ref().expect("resolved");
    let n = cfg.series.expect("resolved").n_samples;
    let raw = integrate(mg, n)?;
    let (scaled, norm) = normalize(&raw)?;
    let mut t = Table::create(dir, "mackey_glass.csv", &["index", "t", "s_raw", "s_normalized"])?;
    for (k, (s, y)) in raw.iter().zip(&scaled).enumerate() {
        t.row(&fields![k, mg.sample_time(k), s, y])?;
    }
    t.finish(outputs)?;
    Ok(json!({ "normalizer": norm }))
}

/// Output directory precedence: explicit argument, then config, then `out/<experiment>`.
pub fn output_dir(cfg: &ExperimentConfig, explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(cfg.experiment.name()))
}
