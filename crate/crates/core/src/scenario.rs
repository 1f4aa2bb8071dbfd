//! JSON scenario files and their CSV + JSON-sidecar outputs.
//!
//! A scenario names one mode and the sections that mode needs; unknown keys
//! are rejected. Outputs are written to a temporary file in the target
//! directory and renamed into place, so a crashed run leaves nothing behind
//! under the final name.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cavity::{CavityConfig, Mirror};
use crate::crosscheck::{run_suite, Suite};
use crate::error::{Error, Warning};
use crate::force::{dissipative_force_time, theta_from_temperature};
use crate::planner::{plan, PlanInputs};
use crate::radiation::{energy_density_cavity, flux_single_mirror, motion_timescale, FluxSeries};
use crate::spectrum::{photon_spectrum, MeasurementWindow, Source, SpectrumGrid, WindowShape};
use crate::trajectory::{Motion, Trajectory};
use crate::units::UnitSystem;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("physics validation failed: {0}")]
    Physics(Error),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("crosscheck suite {0} failed")]
    CheckFailed(String),
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Schema(_) => 2,
            ScenarioError::Physics(_) => 3,
            ScenarioError::Numerical(_) => 4,
            ScenarioError::Read { .. } | ScenarioError::Write { .. } | ScenarioError::CheckFailed(_) => 1,
        }
    }
}

impl From<Error> for ScenarioError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            ScenarioError::Numerical(e)
        } else {
            ScenarioError::Physics(e)
        }
    }
}

type Result<T> = std::result::Result<T, ScenarioError>;

fn schema(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Schema(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Force,
    SingleMirrorFlux,
    CavityEnergy,
    Spectrum,
    Plan,
    Crosscheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitsPreset {
    #[default]
    Natural,
    Si,
}

impl UnitsPreset {
    pub fn system(self) -> UnitSystem {
        match self {
            UnitsPreset::Natural => UnitSystem::natural(),
            UnitsPreset::Si => UnitSystem::si(),
        }
    }

    fn label(self) -> &'static str {
        match self {
            UnitsPreset::Natural => "natural (c = hbar = k_B = 1)",
            UnitsPreset::Si => "SI",
        }
    }
}

/// Either a symmetric cavity built from finesse, η and drive frequency
/// (`order` gives Ω = order·π/τ), or explicit mirrors and motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySpec {
    #[serde(default = "unit_length")]
    pub length: f64,
    pub finesse: Option<f64>,
    pub eta: Option<f64>,
    pub order: Option<u32>,
    pub omega: Option<f64>,
    pub r_left: Option<f64>,
    pub r_right: Option<f64>,
    pub motion: Option<Motion>,
}

fn unit_length() -> f64 {
    1.0
}

impl CavitySpec {
    fn build(&self, units: UnitSystem) -> Result<CavityConfig> {
        let explicit = self.r_left.is_some() || self.r_right.is_some() || self.motion.is_some();
        let driven = self.finesse.is_some() || self.eta.is_some();
        match (driven, explicit) {
            (true, true) => Err(schema("cavity: give either finesse/eta or r_left/r_right/motion, not both")),
            (false, false) => Err(schema("cavity: missing key `finesse` (or `r_left`, `r_right`, `motion`)")),
            (true, false) => {
                let finesse = self.finesse.ok_or_else(|| schema("cavity: missing key `finesse`"))?;
                let eta = self.eta.ok_or_else(|| schema("cavity: missing key `eta`"))?;
                Ok(match (self.order, self.omega) {
                    (Some(n), None) => CavityConfig::resonant(finesse, eta, n, self.length, units)?,
                    (None, Some(w)) => CavityConfig::driven(finesse, eta, w, self.length, units)?,
                    _ => return Err(schema("cavity: give exactly one of `order`, `omega`")),
                })
            }
            (false, true) => {
                let r1 = self.r_left.ok_or_else(|| schema("cavity: missing key `r_left`"))?;
                let r2 = self.r_right.ok_or_else(|| schema("cavity: missing key `r_right`"))?;
                let motion = self.motion.clone().ok_or_else(|| schema("cavity: missing key `motion`"))?;
                let traj = Trajectory::new(motion, &units)?;
                Ok(CavityConfig::new(Mirror::new(r1)?, Mirror::new(r2)?, self.length, traj, units)?)
            }
        }
    }
}

/// Uniform grid `points` samples from `start`, excluding `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 || !(self.stop > self.start) {
            return Err(schema("grid: need `points` > 0 and `stop` > `start`"));
        }
        let h = (self.stop - self.start) / self.points as f64;
        Ok((0..self.points).map(|i| self.start + h * i as f64).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeSpec {
    Rectangular,
    #[default]
    Tapered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub periods: usize,
    #[serde(default)]
    pub shape: ShapeSpec,
    #[serde(default = "default_taper")]
    pub taper: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_taper() -> f64 {
    0.1
}

fn default_samples() -> usize {
    1024
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub cutoff: Option<f64>,
    pub input_cutoff: Option<f64>,
    pub samples_per_period: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    pub epsilon: Option<f64>,
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    pub mode: Mode,
    #[serde(default)]
    pub units: UnitsPreset,
    pub mirror: Option<Motion>,
    pub cavity: Option<CavitySpec>,
    pub grid: Option<GridSpec>,
    /// θ directly, or via `temperature` in kelvin.
    pub theta: Option<f64>,
    pub temperature: Option<f64>,
    pub window: Option<WindowSpec>,
    pub spectrum: Option<SpectrumSpec>,
    pub split: Option<SplitSpec>,
    pub plan: Option<PlanInputs>,
    pub suite: Option<String>,
    /// Output file stem; defaults to `name`.
    pub output: Option<String>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        if s.schema != SCHEMA_VERSION {
            return Err(schema(format!("`schema` must be {SCHEMA_VERSION}, got {}", s.schema)));
        }
        if s.name.is_empty() {
            return Err(schema("`name` must not be empty"));
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ScenarioError::Read { path: path.to_path_buf(), source })?;
        let s = Self::from_json(&text)?;
        Ok((s, text))
    }

    fn mirror(&self) -> Result<Trajectory> {
        let m = self.mirror.clone().ok_or_else(|| schema("missing key `mirror`"))?;
        Ok(Trajectory::new(m, &self.units.system())?)
    }

    fn cavity(&self) -> Result<CavityConfig> {
        self.cavity.as_ref().ok_or_else(|| schema("missing key `cavity`"))?.build(self.units.system())
    }

    fn grid(&self) -> Result<Vec<f64>> {
        self.grid.ok_or_else(|| schema("missing key `grid`"))?.values()
    }

    fn stem(&self) -> &str {
        self.output.as_deref().unwrap_or(&self.name)
    }
}

/// Table produced by a run, before serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub summary: serde_json::Value,
    pub warnings: Vec<Warning>,
    /// Crosscheck rows that failed, if any.
    pub failed: bool,
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn flux_table(f: &FluxSeries) -> Table {
    Table {
        columns: vec!["u", "flux_right", "flux_left", "flux_total"],
        rows: (0..f.u_grid.len())
            .map(|i| vec![num(f.u_grid[i]), num(f.right[i]), num(f.left[i]), num(f.total[i])])
            .collect(),
    }
}

/// Evaluates a scenario without touching the file system.
pub fn evaluate(s: &Scenario) -> Result<Outcome> {
    let units = s.units.system();
    match s.mode {
        Mode::Force => {
            let traj = s.mirror()?;
            let theta = match (s.theta, s.temperature) {
                (Some(_), Some(_)) => return Err(schema("give either `theta` or `temperature`, not both")),
                (Some(t), None) => t,
                (None, Some(k)) => theta_from_temperature(k, &units),
                (None, None) => 0.0,
            };
            let f = dissipative_force_time(&traj, theta, &units, &s.grid()?)?;
            Ok(Outcome {
                table: Table {
                    columns: vec!["t", "force"],
                    rows: f.t_grid.iter().zip(&f.force).map(|(t, x)| vec![num(*t), num(*x)]).collect(),
                },
                summary: serde_json::json!({ "theta": theta }),
                warnings: vec![],
                failed: false,
            })
        }
        Mode::SingleMirrorFlux => {
            let traj = s.mirror()?;
            let f = flux_single_mirror(&traj, &s.grid()?, units.hbar)?;
            Ok(Outcome {
                summary: serde_json::json!({ "energy_right": f.integrate(&f.right), "energy_left": f.integrate(&f.left) }),
                table: flux_table(&f),
                warnings: f.warnings.clone(),
                failed: false,
            })
        }
        Mode::CavityEnergy => {
            let cav = s.cavity()?;
            let split = s.split.unwrap_or_default();
            let grid = match s.grid {
                Some(g) => g.values()?,
                None => {
                    let p = cav.motion().period().unwrap_or(2.0 * cav.tau());
                    GridSpec { start: 0.0, stop: 3.0 * p, points: 600 }.values()?
                }
            };
            let eps = split
                .epsilon
                .unwrap_or_else(|| 1e-3 * motion_timescale(cav.motion()).min(cav.tau()));
            let f = energy_density_cavity(&cav, &grid, split.n_max, eps)?;
            Ok(Outcome {
                summary: serde_json::json!({
                    "finesse": cav.finesse(), "eta": cav.eta(), "tau": cav.tau(),
                    "epsilon": eps, "n_max": f.meta.n_max,
                    "parametric_threshold": cav.parametric_threshold(),
                }),
                table: flux_table(&f),
                warnings: f.warnings.clone(),
                failed: false,
            })
        }
        Mode::Spectrum => {
            let (source, period, tau) = match (&s.mirror, &s.cavity) {
                (Some(_), Some(_)) => return Err(schema("give either `mirror` or `cavity`, not both")),
                (Some(_), None) => {
                    let t = s.mirror()?;
                    let p = t.period().ok_or_else(|| schema("mirror: spectrum needs periodic motion"))?;
                    (Source::SingleMirror(t), p, None)
                }
                (None, Some(_)) => {
                    let c = s.cavity()?;
                    let p = c.motion().period().ok_or_else(|| schema("cavity: spectrum needs periodic motion"))?;
                    let tau = c.tau();
                    (Source::Cavity(c), p, Some(tau))
                }
                (None, None) => return Err(schema("missing key `mirror` or `cavity`")),
            };
            let w = s.window.ok_or_else(|| schema("missing key `window`"))?;
            let shape = match w.shape {
                ShapeSpec::Rectangular => WindowShape::Rectangular,
                ShapeSpec::Tapered => WindowShape::Tapered(w.taper),
            };
            let win = MeasurementWindow::periods(period, w.periods, shape, w.samples)?;
            let spec = s.spectrum.unwrap_or_default();
            let base = SpectrumGrid::for_source(&source);
            let grid = SpectrumGrid {
                cutoff: spec.cutoff.unwrap_or(base.cutoff),
                input_cutoff: spec.input_cutoff,
                samples_per_period: spec.samples_per_period.unwrap_or(base.samples_per_period),
            };
            let r = photon_spectrum(&source, &win, &grid)?;
            let mut rows: Vec<Vec<String>> = r
                .omega_grid
                .iter()
                .zip(&r.density)
                .map(|(w, d)| vec![num(*w), num(*d), String::new(), String::new()])
                .collect();
            rows.extend(r.comb_lines.iter().map(|l| {
                vec![num(l.omega), String::new(), l.k.to_string(), num(l.photons)]
            }));
            Ok(Outcome {
                table: Table { columns: vec!["omega", "dN_domega", "comb_k", "comb_N_k"], rows },
                summary: serde_json::json!({
                    "total_photons": r.total, "n_max": r.n_max,
                    "samples_per_period": r.samples_per_period,
                    "duration": win.duration(), "tau": tau,
                    "strongest_line": r.strongest_line(),
                }),
                warnings: r.warnings.clone(),
                failed: false,
            })
        }
        Mode::Plan => {
            let inputs = s.plan.ok_or_else(|| schema("missing key `plan`"))?;
            let p = plan(&inputs, &units)?;
            let rows = [
                ("eta", p.eta, "1"),
                ("amplitude", p.amplitude, "length"),
                ("acceleration", p.acceleration, "length/time^2"),
                ("photon_rate", p.photon_rate, "1/time"),
                ("thermal_occupation", p.thermal_occupation, "1"),
            ]
            .iter()
            .map(|(k, v, u)| vec![k.to_string(), num(*v), u.to_string()])
            .collect();
            Ok(Outcome {
                table: Table { columns: vec!["quantity", "value", "unit"], rows },
                summary: serde_json::to_value(&p).expect("plan serializes"),
                warnings: p.warnings.clone(),
                failed: false,
            })
        }
        Mode::Crosscheck => {
            let name = s.suite.as_deref().ok_or_else(|| schema("missing key `suite`"))?;
            let suite: Suite = name.parse().map_err(schema)?;
            let report = run_suite(suite)?;
            Ok(Outcome {
                table: Table {
                    columns: vec!["check", "measured", "expected", "pass"],
                    rows: report
                        .rows
                        .iter()
                        .map(|r| vec![format!("\"{}\"", r.name), num(r.measured), format!("\"{}\"", r.expected), r.pass.to_string()])
                        .collect(),
                },
                summary: serde_json::to_value(&report).expect("report serializes"),
                warnings: vec![],
                failed: !report.passed(),
            })
        }
    }
}

pub fn scenario_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn render_csv(s: &Scenario, hash: &str, table: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# radiance {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# scenario: {}", s.name);
    let _ = writeln!(out, "# scenario_sha256: {hash}");
    let _ = writeln!(out, "# mode: {}", serde_json::to_value(s.mode).expect("mode").as_str().unwrap_or(""));
    let _ = writeln!(out, "# units: {}", s.units.label());
    let _ = writeln!(out, "{}", table.columns.join(","));
    for r in &table.rows {
        let _ = writeln!(out, "{}", r.join(","));
    }
    out
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let err = |source| ScenarioError::Write { path: path.to_path_buf(), source };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(err)?;
    let mut tmp = tempfile::Builder::new().prefix(".radiance-").suffix(".tmp").tempfile_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub csv: PathBuf,
    pub sidecar: PathBuf,
    pub warnings: Vec<Warning>,
    pub summary: serde_json::Value,
}

/// Loads, evaluates and writes `<out_dir>/<stem>.csv` and `<stem>.json`.
pub fn run_scenario(path: &Path, out_dir: &Path) -> Result<RunOutput> {
    let (s, text) = Scenario::load(path)?;
    let hash = scenario_hash(&text);
    let outcome = evaluate(&s)?;
    let csv = out_dir.join(format!("{}.csv", s.stem()));
    let sidecar = out_dir.join(format!("{}.json", s.stem()));
    write_atomic(&csv, render_csv(&s, &hash, &outcome.table).as_bytes())?;
    let meta = serde_json::json!({
        "radiance_version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA_VERSION,
        "scenario": s,
        "scenario_sha256": hash,
        "columns": outcome.table.columns,
        "warnings": outcome.warnings.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>(),
        "summary": outcome.summary,
    });
    let mut body = serde_json::to_string_pretty(&meta).expect("sidecar serializes");
    body.push('\n');
    write_atomic(&sidecar, body.as_bytes())?;
    if outcome.failed {
        return Err(ScenarioError::CheckFailed(s.suite.unwrap_or_default()));
    }
    Ok(RunOutput { csv, sidecar, warnings: outcome.warnings, summary: outcome.summary })
}
