//! Dissipative radiation-reaction force on a single perfect mirror.
//!
//! Time domain: F(t) = −(ħθ²/6πc²)·q′(t) + (ħ/6πc²)·q‴(t), the thermal drag
//! plus the vacuum jerk term. Frequency domain uses x(t) = ∫ x[ω] e^(−iωt) dω/2π,
//! so d/dt ↔ −iω and F[ω] = χ[ω]·q[ω] with χ[ω] = (ħ/6πc²)·i·(θ²ω + ω³).

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::radiation::check_sampled_noise;
use crate::trajectory::Trajectory;
use crate::units::UnitSystem;

pub use crate::units::theta_from_temperature;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    pub omega: f64,
    pub theta: f64,
    pub value: Complex64,
}

impl Susceptibility {
    pub fn evaluate(omega: f64, theta: f64, units: &UnitSystem) -> Self {
        Self { omega, theta, value: susceptibility(omega, theta, units) }
    }

    /// The velocity-proportional (thermal) addend alone.
    pub fn thermal_part(&self, units: &UnitSystem) -> Complex64 {
        prefactor(units) * Complex64::i() * self.theta * self.theta * self.omega
    }

    /// The ω³ (vacuum) addend alone.
    pub fn vacuum_part(&self, units: &UnitSystem) -> Complex64 {
        prefactor(units) * Complex64::i() * self.omega.powi(3)
    }
}

fn prefactor(units: &UnitSystem) -> f64 {
    units.hbar / (6.0 * PI * units.c * units.c)
}

/// χ[ω] = (ħ/6πc²)·i·(θ²ω + ω³).
pub fn susceptibility(omega: f64, theta: f64, units: &UnitSystem) -> Complex64 {
    Complex64::new(0.0, prefactor(units) * (theta * theta * omega + omega.powi(3)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceSeries {
    pub t_grid: Vec<f64>,
    pub force: Vec<f64>,
    pub theta: f64,
}

pub fn dissipative_force_time(
    traj: &Trajectory,
    theta: f64,
    units: &UnitSystem,
    t_grid: &[f64],
) -> Result<ForceSeries> {
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::param("theta", "must be finite and non-negative"));
    }
    if (traj.c() - units.c).abs() > 1e-12 * units.c {
        return Err(Error::param("units", "trajectory and unit system disagree on c"));
    }
    check_sampled_noise(traj, units.hbar)?;
    let k = prefactor(units);
    let force = t_grid
        .iter()
        .map(|&t| {
            let kin = traj.kinematics(t);
            -k * theta * theta * kin.velocity + k * kin.jerk
        })
        .collect();
    Ok(ForceSeries { t_grid: t_grid.to_vec(), force, theta })
}

/// Fourier coefficient of a uniformly sampled signal at bin `line`, in the
/// module convention x[ω] ∝ Σ x(t) e^(+iωt). Samples must cover whole periods
/// of that line for the coefficient to be leakage free.
pub fn line_coefficient(samples: &[f64], line: usize) -> Result<Complex64> {
    let n = samples.len();
    if line >= n {
        return Err(Error::param("line", "must be below the sample count"));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    // the inverse transform carries the e^(+i…) kernel
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Ok(buf[line] / n as f64)
}
