//! Order-of-magnitude feasibility numbers for a resonantly driven cavity.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::cavity::eta;
use crate::error::{Error, Result, Warning};
use crate::units::UnitSystem;

/// Typical sound velocity in solids; peak mirror velocities above it are
/// flagged but not rejected.
pub const SOUND_SPEED_ADVISORY: f64 = 3000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanInputs {
    pub finesse: f64,
    /// Mechanical angular frequency Ω.
    pub mech_frequency: f64,
    /// Optical line ω at which thermal occupation is assessed; defaults to Ω.
    #[serde(default)]
    pub optical_frequency: Option<f64>,
    pub peak_velocity: f64,
    pub temperature: f64,
    /// Caller asserts Ω is tuned to an odd multiple of π/τ.
    #[serde(default)]
    pub resonance_asserted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentPlan {
    pub finesse: f64,
    pub mech_frequency: f64,
    pub optical_frequency: f64,
    pub peak_velocity: f64,
    pub temperature: f64,
    pub eta: f64,
    /// v/Ω
    pub amplitude: f64,
    /// Ω·v
    pub acceleration: f64,
    /// Photons per second leaving the cavity.
    pub photon_rate: f64,
    pub thermal_occupation: f64,
    pub vacuum_ok: bool,
    #[serde(skip)]
    pub warnings: Vec<Warning>,
}

/// Bose occupation n̄ = 1/(e^(ħω/k_B T) − 1) and whether it stays below one
/// photon per mode.
pub fn thermal_occupation(omega: f64, temperature: f64, units: &UnitSystem) -> Result<(f64, bool)> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::param("omega", "must be finite and positive"));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::param("temperature", "must be finite and non-negative"));
    }
    if temperature == 0.0 {
        return Ok((0.0, true));
    }
    let x = units.hbar * omega / (units.k_b * temperature);
    let n = 1.0 / x.exp_m1();
    Ok((n, n < 1.0))
}

pub fn plan(inputs: &PlanInputs, units: &UnitSystem) -> Result<ExperimentPlan> {
    let PlanInputs { finesse, mech_frequency: omega, peak_velocity: v, temperature, .. } = *inputs;
    for (name, x) in [("finesse", finesse), ("mech_frequency", omega)] {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::param(name, "must be finite and positive"));
        }
    }
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::param("peak_velocity", "must be finite and non-negative"));
    }
    if v >= units.c {
        return Err(Error::SuperluminalTrajectory { peak: v, c: units.c });
    }
    let optical = inputs.optical_frequency.unwrap_or(omega);
    let (n_bar, vacuum_ok) = thermal_occupation(optical, temperature, units)?;

    let mut warnings = Vec::new();
    if !inputs.resonance_asserted {
        warnings.push(Warning::ResonanceNotConfigured);
    }
    if v > SOUND_SPEED_ADVISORY * units.c / UnitSystem::si().c {
        warnings.push(Warning::VelocityAboveSoundSpeed { velocity: v, limit: SOUND_SPEED_ADVISORY });
    }
    let beta = v / units.c;
    Ok(ExperimentPlan {
        finesse,
        mech_frequency: omega,
        optical_frequency: optical,
        peak_velocity: v,
        temperature,
        eta: eta(finesse, v, units),
        amplitude: v / omega,
        acceleration: omega * v,
        photon_rate: finesse * omega * beta * beta / (3.0 * PI),
        thermal_occupation: n_bar,
        vacuum_ok,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> PlanInputs {
        PlanInputs {
            finesse: 1e9,
            mech_frequency: 2.0 * PI * 5e9,
            optical_frequency: None,
            peak_velocity: 0.3,
            temperature: 0.01,
            resonance_asserted: true,
        }
    }

    #[test]
    fn occupation_examples() {
        let si = UnitSystem::si();
        assert_eq!(thermal_occupation(1.0, 0.0, &si).unwrap(), (0.0, true));
        let (n, ok) = thermal_occupation(2.0 * PI * 5e9, 0.01, &si).unwrap();
        assert!(ok && n > 3e-11 && n < 5e-11, "{n}");
        let (n, ok) = thermal_occupation(2.0 * PI * 5e9, 1.0, &si).unwrap();
        assert!(!ok && (n - 3.7).abs() < 0.1, "{n}");
    }

    #[test]
    fn occupation_monotone_in_temperature() {
        let si = UnitSystem::si();
        let mut last = true;
        for i in 0..200 {
            let (_, ok) = thermal_occupation(2.0 * PI * 5e9, 0.005 * i as f64, &si).unwrap();
            assert!(last || !ok);
            last = ok;
        }
    }

    #[test]
    fn desk_numbers() {
        let p = plan(&desk(), &UnitSystem::si()).unwrap();
        assert!((p.eta - 1.0).abs() < 0.01);
        assert!(p.amplitude > 0.5e-11 && p.amplitude < 2e-11);
        assert!(p.acceleration > 0.5e10 && p.acceleration < 2e10);
        assert!(p.photon_rate > 1.0 && p.photon_rate < 30.0);
        assert!(p.thermal_occupation < 1e-9 && p.vacuum_ok);
        assert_eq!(p.amplitude * p.mech_frequency, p.peak_velocity);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn rate_scales_linearly_in_finesse() {
        let si = UnitSystem::si();
        let a = plan(&desk(), &si).unwrap();
        let b = plan(&PlanInputs { finesse: 1.0, ..desk() }, &si).unwrap();
        assert!((a.photon_rate / b.photon_rate / 1e9 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn still_mirror_emits_nothing() {
        let p = plan(&PlanInputs { peak_velocity: 0.0, ..desk() }, &UnitSystem::si()).unwrap();
        assert_eq!((p.eta, p.amplitude, p.acceleration, p.photon_rate), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn advisory_warnings() {
        let p = plan(
            &PlanInputs { resonance_asserted: false, peak_velocity: 4000.0, ..desk() },
            &UnitSystem::si(),
        )
        .unwrap();
        assert!(p.warnings.contains(&Warning::ResonanceNotConfigured));
        assert!(p.warnings.iter().any(|w| matches!(w, Warning::VelocityAboveSoundSpeed { .. })));
    }
}
