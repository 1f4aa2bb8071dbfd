//! Physical constants and field temperature.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Speed of light, reduced Planck constant and Boltzmann constant.
///
/// Engines default to [`UnitSystem::natural`]; the SI preset is what the
/// experiment planner works in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub c: f64,
    pub hbar: f64,
    pub k_b: f64,
}

impl UnitSystem {
    pub fn new(c: f64, hbar: f64, k_b: f64) -> Result<Self> {
        for (name, v) in [("c", c), ("hbar", hbar), ("k_b", k_b)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be finite and positive, got {v}")));
            }
        }
        Ok(Self { c, hbar, k_b })
    }

    /// c = ħ = k_B = 1.
    pub const fn natural() -> Self {
        Self {
            c: 1.0,
            hbar: 1.0,
            k_b: 1.0,
        }
    }

    /// CODATA 2018 exact values.
    pub const fn si() -> Self {
        Self {
            c: 299_792_458.0,
            hbar: 1.054_571_817e-34,
            k_b: 1.380_649e-23,
        }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

/// Field temperature together with its angular-frequency equivalent θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTemperature {
    kelvin: f64,
    theta: f64,
}

impl FieldTemperature {
    pub fn new(kelvin: f64, units: &UnitSystem) -> Result<Self> {
        if !(kelvin.is_finite() && kelvin >= 0.0) {
            return Err(Error::param("T_field", format!("must be >= 0, got {kelvin}")));
        }
        Ok(Self {
            kelvin,
            theta: theta_from_temperature(kelvin, units),
        })
    }

    pub fn zero() -> Self {
        Self {
            kelvin: 0.0,
            theta: 0.0,
        }
    }

    pub fn kelvin(&self) -> f64 {
        self.kelvin
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// θ = 2π k_B T / ħ.
pub fn theta_from_temperature(kelvin: f64, units: &UnitSystem) -> f64 {
    2.0 * PI * units.k_b * kelvin / units.hbar
}
