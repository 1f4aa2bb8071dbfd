//! Self-contained verification suites: analytic limits, cross-engine
//! agreement, the single-mirror photon-count calibration and the comb
//! selection rule.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cavity::{CavityConfig, Mirror};
use crate::error::{Error, Result};
use crate::force::{dissipative_force_time, line_coefficient, susceptibility};
use crate::radiation::flux_single_mirror;
use crate::raymap::{
    bounce_time, mobius_resum, n_max_for_transfer, path_sum_transfer, quasi_static_error_bound,
    NullCoordinate,
};
use crate::spectrum::{
    photon_spectrum, single_mirror_reference, total_photon_number, MeasurementWindow, Source,
    SpectrumGrid, WindowShape,
};
use crate::trajectory::{Motion, Trajectory};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    AnalyticLimits,
    EngineAgreement,
    PhotonCountCalibration,
    CombSelection,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::AnalyticLimits,
        Suite::EngineAgreement,
        Suite::PhotonCountCalibration,
        Suite::CombSelection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AnalyticLimits => "analytic-limits",
            Suite::EngineAgreement => "engine-agreement",
            Suite::PhotonCountCalibration => "eq6-calibration",
            Suite::CombSelection => "comb-selection",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// How a measured value is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Expect {
    /// |measured| < limit
    Below { limit: f64 },
    /// |measured − target| ≤ tolerance·|target|
    Relative { target: f64, tolerance: f64 },
    /// measured > limit
    Above { limit: f64 },
}

impl Expect {
    fn accepts(&self, x: f64) -> bool {
        match *self {
            Expect::Below { limit } => x.abs() < limit,
            Expect::Relative { target, tolerance } => (x - target).abs() <= tolerance * target.abs(),
            Expect::Above { limit } => x > limit,
        }
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Below { limit } => write!(f, "< {limit:.3e}"),
            Expect::Relative { target, tolerance } => write!(f, "{target:.6e} ± {:.2}%", 100.0 * tolerance),
            Expect::Above { limit } => write!(f, "> {limit:.3e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub measured: f64,
    pub expected: Expect,
    pub pass: bool,
}

impl CheckRow {
    fn new(name: impl Into<String>, measured: f64, expected: Expect) -> Self {
        Self { name: name.into(), measured, pass: expected.accepts(measured), expected }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite.name())?;
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
        writeln!(f, "{:<width$}  {:>14}  {:<28}  result", "check", "measured", "expected")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<width$}  {:>14.6e}  {:<28}  {}",
                r.name,
                r.measured,
                r.expected.to_string(),
                if r.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite) -> Result<Report> {
    let rows = match suite {
        Suite::AnalyticLimits => analytic_limits()?,
        Suite::EngineAgreement => engine_agreement()?,
        Suite::PhotonCountCalibration => photon_count_calibration()?,
        Suite::CombSelection => comb_selection()?,
    };
    Ok(Report { suite, rows })
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn sinusoid(amplitude: f64, omega: f64) -> Result<Trajectory> {
    Trajectory::natural(Motion::Sinusoid { q0: 0.0, amplitude, omega, phase: 0.0 })
}

/// Peak |flux| of a unit-frequency sinusoid with the given peak velocity.
fn sinusoid_flux_scale(peak_velocity: f64) -> Result<f64> {
    let tr = sinusoid(peak_velocity, 1.0)?;
    let f = flux_single_mirror(&tr, &linspace(0.0, 2.0 * PI, 400), 1.0)?;
    Ok(max_abs(f.right.iter().chain(&f.left).copied()))
}

fn analytic_limits() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();

    let beta = 0.3;
    let tr = Trajectory::natural(Motion::UniformVelocity { q0: 0.0, velocity: beta })?;
    let f = flux_single_mirror(&tr, &linspace(-20.0, 20.0, 401), 1.0)?;
    let scale = sinusoid_flux_scale(beta)?;
    rows.push(CheckRow::new(
        "uniform velocity flux / sinusoid scale",
        max_abs(f.right.iter().chain(&f.left).copied()) / scale,
        Expect::Below { limit: 1e-10 },
    ));

    let alpha = 0.5;
    let tr = Trajectory::natural(Motion::UniformAcceleration { proper_acceleration: alpha, t0: 0.0, x0: 0.0 })?;
    // both horizons sit at u = ±c/α
    let us = linspace(-0.9 / alpha, 0.9 / alpha, 401);
    let f = flux_single_mirror(&tr, &us, 1.0)?;
    let mut peak_velocity = 0.0f64;
    for &u in &us {
        let t = bounce_time(&tr, NullCoordinate::right(u))?.t_refl;
        peak_velocity = peak_velocity.max(tr.kinematics(t).velocity.abs());
    }
    let scale = sinusoid_flux_scale(peak_velocity)?;
    rows.push(CheckRow::new(
        "uniform acceleration flux / sinusoid scale",
        max_abs(f.right.iter().chain(&f.left).copied()) / scale,
        Expect::Below { limit: 1e-10 },
    ));

    let (a, w) = (1e-3, 1.0);
    let tr = sinusoid(a, w)?;
    let us = linspace(0.0, 4.0 * PI, 801);
    let f = flux_single_mirror(&tr, &us, 1.0)?;
    let push = f.momentum_transfer(1.0);
    let expect: Vec<f64> = us.iter().map(|&u| tr.kinematics(u).jerk / (6.0 * PI)).collect();
    rows.push(CheckRow::new(
        "sinusoid momentum flux vs jerk force (rel RMS)",
        relative_rms(&push, &expect),
        Expect::Below { limit: 5e-3 },
    ));

    let units = UnitSystem::natural();
    let (periods, m) = (8usize, 4096usize);
    let tr = Trajectory::natural(Motion::Sinusoid { q0: 0.0, amplitude: a, omega: w, phase: 0.3 })?;
    let dt = periods as f64 * 2.0 * PI / w / m as f64;
    let ts: Vec<f64> = (0..m).map(|i| i as f64 * dt).collect();
    let q: Vec<f64> = ts.iter().map(|&t| tr.position(t)).collect();
    let qw = line_coefficient(&q, periods)?;
    for theta in [0.0, 3.0] {
        let force = dissipative_force_time(&tr, theta, &units, &ts)?;
        let fw = line_coefficient(&force.force, periods)?;
        let chi = susceptibility(w, theta, &units);
        rows.push(CheckRow::new(
            format!("susceptibility vs FFT of force, theta = {theta}"),
            (fw - chi * qw).norm() / fw.norm(),
            Expect::Below { limit: 1e-6 },
        ));
    }
    Ok(rows)
}

fn relative_rms(x: &[f64], reference: &[f64]) -> f64 {
    let d: f64 = x.iter().zip(reference).map(|(a, b)| (a - b).powi(2)).sum();
    let r: f64 = reference.iter().map(|b| b * b).sum();
    (d / r).sqrt()
}

fn engine_agreement() -> Result<Vec<CheckRow>> {
    let units = UnitSystem::natural();
    let mut rows = Vec::new();
    let omegas: Vec<f64> = (1..1200).map(|i| 12.0 * PI * i as f64 / 1200.0).collect();
    for finesse in [10.0, 100.0] {
        let m = Mirror::for_finesse(finesse)?;
        let cav = CavityConfig::new(m, m, 1.0, Trajectory::stationary(), units)?;
        let n = n_max_for_transfer(&cav, 1e-9);
        let us = [0.0, 0.37];
        let mut worst = 0.0f64;
        for &w in &omegas {
            let a = mobius_resum(&cav, &us, w)?;
            let b = path_sum_transfer(&cav, &us, w, n)?;
            for (x, y) in a.values.iter().zip(&b.values) {
                worst = worst.max((x - y).norm());
            }
        }
        rows.push(CheckRow::new(
            format!("static transfer, finesse {finesse}: max |path sum − resummed|"),
            worst,
            Expect::Below { limit: 1e-6 },
        ));
    }

    // quasi-static moving mirror at the validity limit 𝓕Ωτa/L = 0.02
    let finesse = 10.0;
    let m = Mirror::for_finesse(finesse)?;
    let big_omega = 3.0 * PI;
    let a = 0.02 / (finesse * big_omega);
    let cav = CavityConfig::new(m, m, 1.0, sinusoid(a, big_omega)?, units)?;
    let n = n_max_for_transfer(&cav, 1e-9);
    let us = linspace(0.0, 2.0 / 3.0, 24);
    let mut worst = 0.0f64;
    for w in [PI, 3.0 * PI, 5.5] {
        let x = mobius_resum(&cav, &us, w)?;
        let y = path_sum_transfer(&cav, &us, w, n)?;
        let bound = quasi_static_error_bound(&cav, w);
        for (p, q) in x.values.iter().zip(&y.values) {
            worst = worst.max((p - q).norm() / bound);
        }
    }
    rows.push(CheckRow::new(
        "moving transfer: max deviation / declared bound",
        worst,
        Expect::Below { limit: 1.0 },
    ));
    Ok(rows)
}

fn photon_count_calibration() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (a, w) in [(1e-3, 1.0), (2e-3, 1.0), (1e-3, 2.0)] {
        let src = Source::SingleMirror(sinusoid(a, w)?);
        let win = MeasurementWindow::periods(2.0 * PI / w, 200, WindowShape::Rectangular, 1024)?;
        let n = total_photon_number(&src, &win, &SpectrumGrid::for_source(&src))?;
        let expect = single_mirror_reference(a, w, win.duration(), 1.0);
        rows.push(CheckRow::new(
            format!("photon count a = {a:e}, Omega = {w}"),
            n,
            Expect::Relative { target: expect, tolerance: 0.02 },
        ));
    }
    Ok(rows)
}

/// Ω = 5π/τ, 𝓕 = 30, η = 0.9: the comb-selection configuration.
pub fn comb_selection_cavity() -> Result<CavityConfig> {
    CavityConfig::resonant(30.0, 0.9, 5, 1.0, UnitSystem::natural())
}

fn comb_selection() -> Result<Vec<CheckRow>> {
    let cav = comb_selection_cavity()?;
    let period = cav.motion().period().ok_or_else(|| Error::param("motion", "not periodic"))?;
    let tau = cav.tau();
    let src = Source::Cavity(cav);
    let win = MeasurementWindow::periods(period, 200, WindowShape::Tapered(0.1), 1024)?;
    let grid = SpectrumGrid { cutoff: 16.0 * PI / tau, ..SpectrumGrid::for_source(&src) };
    let s = photon_spectrum(&src, &win, &grid)?;
    let strongest = s.strongest_line();
    let rel = |k: usize| s.line(k).map_or(0.0, |l| l.photons) / strongest;
    let mut rows = Vec::new();
    for k in [1, 2, 3, 4, 6, 7] {
        rows.push(CheckRow::new(format!("line k = {k} / strongest"), rel(k), Expect::Above { limit: 0.0 }));
    }
    for k in [5, 10, 15] {
        rows.push(CheckRow::new(format!("line k = {k} / strongest"), rel(k), Expect::Below { limit: 1e-3 }));
    }
    let above = s.comb_lines.iter().filter(|l| l.k > 5).map(|l| l.photons).fold(0.0, f64::max);
    rows.push(CheckRow::new(
        "strongest line above Omega / strongest",
        above / strongest,
        Expect::Above { limit: 1e-2 },
    ));
    Ok(rows)
}
