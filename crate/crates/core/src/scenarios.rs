//! Scenario configuration, presets for the reference parameter regimes,
//! parameter sweeps and CSV/manifest output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::correlations::{evaluate_trajectory_with, CorrelationRecord, MeasurementSearch};
use crate::dynamics::{check_trajectory, integrate, observables, InitialState, IntegrateOptions, Observables, TrajectoryReport};
use crate::error::{Error, Result};
use crate::model::{linear_ghz, spectrum_sweep, PulseParams, SystemParams};
use crate::ode::{Method, Stats};

pub const PRESET_NAMES: &[&str] = &["fig4a", "fig4b", "fig5", "fig6", "fig7", "spectrum1", "spectrum2"];

pub const CSV_COLUMNS: &[&str] =
    &["t_ps", "cc", "eof", "mutual_info", "classical", "discord", "n_photon", "pop_x1", "pop_x2", "pump_px", "top_fock"];

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub manifold: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    pub steps: usize,
}

impl SpectrumSpec {
    pub fn new(manifold: usize) -> Self {
        Self { manifold, delta_min: -50.0, delta_max: 50.0, steps: 401 }
    }

    /// Evenly spaced detunings in GHz, endpoints included.
    pub fn deltas(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.delta_min],
            n => {
                let step = (self.delta_max - self.delta_min) / (n - 1) as f64;
                (0..n).map(|k| self.delta_min + k as f64 * step).collect()
            }
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Everything needed to reproduce one batch of outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Label used as the output file stem.
    pub name: String,
    pub params: SystemParams,
    #[serde(default)]
    pub initial_state: InitialState,
    pub t_end: f64,
    pub sample_dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub integrator: IntegrateOptions,
    #[serde(default)]
    pub search: MeasurementSearch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSpec>,
    /// Parallel sweep workers; `None` uses every available core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::Config(format!("name '{}' is not usable as a file stem", self.name)));
        }
        self.params.validate()?;
        if !(self.t_end > 0.0) {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.sample_dt > 0.0) {
            return Err(Error::Config(format!("sample_dt must be positive, got {}", self.sample_dt)));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::Config(format!("sweep over '{}' has no values", sweep.parameter)));
            }
            for &v in &sweep.values {
                let mut p = self.params;
                p.set(&sweep.parameter, v)?;
                p.validate()?;
            }
        }
        if let Some(spec) = &self.spectrum {
            crate::model::manifold_basis(spec.manifold)?;
            if spec.steps == 0 {
                return Err(Error::Config("spectrum needs at least one detuning step".into()));
            }
        }
        match self.integrator.method {
            Method::Adaptive { rtol, atol } if !(rtol > 0.0 && atol > 0.0) => {
                return Err(Error::Config("integrator tolerances must be positive".into()))
            }
            Method::Fixed { step } if !(step > 0.0) => return Err(Error::Config("fixed step must be positive".into())),
            _ => {}
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str, path: &Path) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|source| Error::ParseConfig { path: path.to_owned(), source })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Self::from_toml_str(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config is always representable as TOML")
    }

    /// Parameter sets to run: one per sweep value, or just the base set.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        match &self.sweep {
            None => Ok(vec![SweepPoint { value: None, params: self.params }]),
            Some(sweep) => sweep
                .values
                .iter()
                .map(|&v| {
                    let mut params = self.params;
                    params.set(&sweep.parameter, v)?;
                    Ok(SweepPoint { value: Some(v), params })
                })
                .collect(),
        }
    }

    /// Output file name for one sweep point.
    pub fn file_name(&self, value: Option<f64>) -> String {
        match (&self.sweep, value) {
            (Some(sweep), Some(v)) => format!("{}_{}={}.csv", self.name, sweep.parameter, format_sig(v)),
            _ => format!("{}.csv", self.name),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: Option<f64>,
    pub params: SystemParams,
}

/// Resolved configuration for a named preset.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let base = SystemParams::default();
    let pulse = |p0: f64| PulseParams { p0_over_2pi: p0, tau_p: 20.0, t0: None };
    let mut config = ScenarioConfig {
        name: name.to_owned(),
        params: base,
        initial_state: InitialState::default(),
        t_end: 150.0,
        sample_dt: 0.25,
        sweep: None,
        output_dir: default_output_dir(),
        integrator: IntegrateOptions::default(),
        search: MeasurementSearch::default(),
        spectrum: None,
        workers: None,
    };
    // Figure presets start from the symmetric one-exciton state; its EoF
    // maxima land near 30, 62 and 94 ps in the undriven case.
    if name.starts_with("fig") {
        config.initial_state = InitialState::Symmetric;
    }
    let sweep = |parameter: &str, values: &[f64]| Some(Sweep { parameter: parameter.to_owned(), values: values.to_vec() });
    match name {
        "fig4a" => {
            config.params.forster_over_2pi = 15.0;
        }
        "fig4b" => {
            config.params.pc_over_2pi = 1.0;
            config.params.pulse = pulse(1.0);
        }
        "fig5" => {
            config.params.pc_over_2pi = 1.0;
            config.params.pulse = pulse(1.0);
            config.sweep = sweep("forster_over_2pi", &[5.0, 10.0, 15.0, 20.0]);
        }
        "fig6" => {
            config.params.pc_over_2pi = 0.5;
            config.params.forster_over_2pi = 15.0;
            config.params.pulse = pulse(0.5);
            config.sweep = sweep("p0_over_2pi", &[0.5, 1.0, 1.5, 2.0, 2.5]);
        }
        "fig7" => {
            config.params.pc_over_2pi = 1.0;
            config.params.forster_over_2pi = 15.0;
            config.params.pulse = pulse(1.0);
            config.sweep = sweep("tau_p", &[1.0, 5.0, 10.0, 15.0, 20.0]);
        }
        "spectrum1" => config.spectrum = Some(SpectrumSpec::new(1)),
        "spectrum2" => config.spectrum = Some(SpectrumSpec::new(2)),
        _ => return Err(Error::UnknownPreset { name: name.to_owned() }),
    }
    Ok(config)
}

/// Formats with 12 significant digits, fixed notation for moderate
/// exponents, trailing zeros removed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s.to_owned()
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

/// Results of one trajectory: correlations plus cavity/dot observables.
#[derive(Clone, Debug)]
pub struct TrajectoryResult {
    pub params: SystemParams,
    pub records: Vec<CorrelationRecord>,
    pub observables: Vec<Observables>,
    pub pump: Vec<f64>,
    pub report: TrajectoryReport,
    pub stats: Stats,
}

/// Integrates one parameter set and evaluates every measure along the way.
pub fn simulate(config: &ScenarioConfig, params: &SystemParams) -> Result<TrajectoryResult> {
    let space = params.space()?;
    let rho0 = config.initial_state.density(&space);
    let traj = integrate(&space, params, &rho0, (0.0, config.t_end), config.sample_dt, &config.integrator)?;
    let report = check_trajectory(&space, &traj)?;
    let records = evaluate_trajectory_with(&space, &traj, &config.search)?;
    Ok(TrajectoryResult {
        params: *params,
        observables: observables(&space, &traj),
        pump: traj.pump_values.clone(),
        records,
        report,
        stats: traj.stats,
    })
}

pub fn write_csv(path: &Path, result: &TrajectoryResult) -> Result<()> {
    let io_err = |source| Error::Io { path: path.to_owned(), source };
    let mut out = String::with_capacity(result.records.len() * 160);
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for ((r, o), px) in result.records.iter().zip(&result.observables).zip(&result.pump) {
        let row = [r.t, r.cc, r.eof, r.mutual_info, r.classical, r.discord, o.n_photon, o.pop_x1, o.pop_x2, *px, o.top_fock];
        let cells: Vec<String> = row.iter().map(|&v| format_sig(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub file: String,
    pub status: RunStatus,
    /// Pulse centre actually used, ps.
    pub t0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<TrajectoryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: ScenarioConfig,
    pub runs: Vec<RunRecord>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
    pub files: Vec<PathBuf>,
}

impl RunOutput {
    pub fn failures(&self) -> usize {
        self.manifest.runs.iter().filter(|r| r.status == RunStatus::Failed).count()
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_owned(), source })
}

fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<PathBuf> {
    let path = dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    fs::write(&path, text).map_err(|source| Error::Io { path: path.clone(), source })?;
    Ok(path)
}

fn run_point(config: &ScenarioConfig, point: &SweepPoint) -> (RunRecord, Option<PathBuf>) {
    let file = config.file_name(point.value);
    let mut record = RunRecord {
        value: point.value,
        file: file.clone(),
        status: RunStatus::Failed,
        t0: point.params.pulse.center(),
        rows: None,
        report: None,
        stats: None,
        error: None,
    };
    let path = config.output_dir.join(&file);
    match simulate(config, &point.params).and_then(|res| write_csv(&path, &res).map(|_| res)) {
        Ok(res) => {
            record.status = RunStatus::Ok;
            record.rows = Some(res.records.len());
            record.report = Some(res.report);
            record.stats = Some(res.stats);
            (record, Some(path))
        }
        Err(e) => {
            record.error = Some(e.to_string());
            (record, None)
        }
    }
}

#[cfg(feature = "parallel")]
fn run_points(config: &ScenarioConfig, points: &[SweepPoint]) -> Result<Vec<(RunRecord, Option<PathBuf>)>> {
    use rayon::prelude::*;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(|p| run_point(config, p)).collect()))
}

#[cfg(not(feature = "parallel"))]
fn run_points(config: &ScenarioConfig, points: &[SweepPoint]) -> Result<Vec<(RunRecord, Option<PathBuf>)>> {
    Ok(points.iter().map(|p| run_point(config, p)).collect())
}

/// Runs every sweep point, writing one CSV each plus `manifest.json`.
///
/// A failing sweep point is recorded in the manifest and does not stop its
/// siblings.
pub fn run(config: &ScenarioConfig) -> Result<RunOutput> {
    config.validate()?;
    if config.spectrum.is_some() {
        let path = run_spectrum(config)?;
        let manifest = Manifest {
            tool: TOOL_NAME.to_owned(),
            version: TOOL_VERSION.to_owned(),
            config: config.clone(),
            runs: vec![RunRecord {
                value: None,
                file: config.file_name(None),
                status: RunStatus::Ok,
                t0: config.params.pulse.center(),
                rows: config.spectrum.map(|s| s.steps),
                report: None,
                stats: None,
                error: None,
            }],
        };
        let manifest_path = write_manifest(&config.output_dir, &manifest)?;
        return Ok(RunOutput { manifest_path, manifest, files: vec![path] });
    }

    create_dir(&config.output_dir)?;
    let points = config.points()?;
    let results = run_points(config, &points)?;
    let mut files = Vec::new();
    let mut runs = Vec::new();
    for (record, path) in results {
        files.extend(path);
        runs.push(record);
    }
    let manifest = Manifest { tool: TOOL_NAME.to_owned(), version: TOOL_VERSION.to_owned(), config: config.clone(), runs };
    let manifest_path = write_manifest(&config.output_dir, &manifest)?;
    Ok(RunOutput { manifest_path, manifest, files })
}

/// Dressed-state energies (GHz) versus detuning for the configured manifold.
pub fn spectrum_table(config: &ScenarioConfig) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let spec = config.spectrum.unwrap_or(SpectrumSpec::new(1));
    let rows = spectrum_sweep(&config.params, spec.manifold, &spec.deltas())?;
    let k = rows.first().map_or(0, |r| r.eigenvalues.len());
    let mut header = vec!["delta_ghz".to_owned()];
    header.extend((1..=k).map(|i| format!("eig{i}")));
    let table =
        rows.into_iter().map(|r| std::iter::once(r.delta_over_2pi).chain(r.eigenvalues.into_iter().map(linear_ghz)).collect()).collect();
    Ok((header, table))
}

/// Writes the spectrum CSV and returns its path.
pub fn run_spectrum(config: &ScenarioConfig) -> Result<PathBuf> {
    let (header, table) = spectrum_table(config)?;
    create_dir(&config.output_dir)?;
    let path = config.output_dir.join(config.file_name(None));
    let mut out = header.join(",");
    out.push('\n');
    for row in table {
        out.push_str(&row.iter().map(|&v| format_sig(v)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    fs::write(&path, out).map_err(|source| Error::Io { path: path.clone(), source })?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_values() {
        let a = preset("fig4a").unwrap();
        assert_eq!(a.params.forster_over_2pi, 15.0);
        assert_eq!((a.params.pc_over_2pi, a.params.pulse.p0_over_2pi), (0.0, 0.0));
        assert_eq!((a.params.g_over_2pi, a.params.kappa_over_2pi, a.params.gamma_over_2pi), (10.0, 5.0, 0.025));

        let f6 = preset("fig6").unwrap();
        assert_eq!(f6.sweep, Some(Sweep { parameter: "p0_over_2pi".into(), values: vec![0.5, 1.0, 1.5, 2.0, 2.5] }));
        assert_eq!((f6.params.forster_over_2pi, f6.params.pulse.tau_p, f6.params.pc_over_2pi), (15.0, 20.0, 0.5));

        let f7 = preset("fig7").unwrap();
        assert_eq!(f7.sweep.as_ref().unwrap().parameter, "tau_p");
        assert_eq!(f7.sweep.unwrap().values, vec![1.0, 5.0, 10.0, 15.0, 20.0]);
        assert_eq!((f7.params.pc_over_2pi, f7.params.pulse.p0_over_2pi, f7.params.forster_over_2pi), (1.0, 1.0, 15.0));

        assert_eq!(preset("fig5").unwrap().points().unwrap().len(), 4);
        assert_eq!(preset("spectrum2").unwrap().spectrum.unwrap().manifold, 2);

        let err = preset("fig9").unwrap_err();
        assert!(err.is_usage());
        assert!(err.to_string().contains("fig4a, fig4b"));
    }

    #[test]
    fn every_preset_validates_and_round_trips_through_toml() {
        for name in PRESET_NAMES {
            let config = preset(name).unwrap();
            config.validate().unwrap();
            let back = ScenarioConfig::from_toml_str(&config.to_toml(), Path::new("mem")).unwrap();
            assert_eq!(back, config);
        }
    }

    #[test]
    fn file_names() {
        assert_eq!(preset("fig6").unwrap().file_name(Some(0.5)), "fig6_p0_over_2pi=0.5.csv");
        assert_eq!(preset("fig7").unwrap().file_name(Some(10.0)), "fig7_tau_p=10.csv");
        assert_eq!(preset("fig4a").unwrap().file_name(None), "fig4a.csv");
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(150.0), "150");
        assert_eq!(format_sig(0.25), "0.25");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(-2.0 / 3.0 * 1e-7), "-6.66666666667e-8");
        assert_eq!(format_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(format_sig(0.0001234), "0.0001234");
    }

    #[test]
    fn invalid_configs() {
        let mut c = preset("fig5").unwrap();
        c.sweep.as_mut().unwrap().values.clear();
        assert!(c.validate().is_err());
        let mut c = preset("fig4a").unwrap();
        c.t_end = -1.0;
        assert!(c.validate().is_err());
        let mut c = preset("fig4a").unwrap();
        c.params.n_max = 1;
        assert!(c.validate().is_err());
        let mut c = preset("fig4a").unwrap();
        c.sweep = Some(Sweep { parameter: "bogus".into(), values: vec![1.0] });
        assert!(c.validate().is_err());
    }

    #[test]
    fn spectrum_grid() {
        let spec = SpectrumSpec::new(1);
        let d = spec.deltas();
        assert_eq!(d.len(), 401);
        assert_eq!(d[0], -50.0);
        assert_eq!(d[200], 0.0);
        assert_eq!(d[400], 50.0);
    }
}
