//! Lossless mirrors, finesse, and the globally oscillating two-mirror cavity.

use std::f64::consts::PI;

use crate::error::{Error, Result, Warning};
use crate::trajectory::{Motion, Trajectory};
use crate::units::UnitSystem;

const UNITARITY_TOL: f64 = 1e-12;

/// Lossless point scatterer with real amplitudes, r² + t² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mirror {
    r: f64,
    t: f64,
}

impl Mirror {
    /// Mirror with reflection amplitude `r`; t = √(1 - r²).
    pub fn new(r: f64) -> Result<Self> {
        if r == 1.0 {
            return Err(Error::PerfectMirror);
        }
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidMirror {
                r,
                t: f64::NAN,
                reason: "reflection amplitude must lie in [0, 1)",
            });
        }
        Ok(Self {
            r,
            t: (1.0 - r * r).sqrt(),
        })
    }

    pub fn from_amplitudes(r: f64, t: f64) -> Result<Self> {
        if r == 1.0 {
            return Err(Error::PerfectMirror);
        }
        if !(0.0..1.0).contains(&r) || !(t > 0.0 && t <= 1.0) {
            return Err(Error::InvalidMirror {
                r,
                t,
                reason: "need 0 <= r < 1 and 0 < t <= 1",
            });
        }
        if (r * r + t * t - 1.0).abs() > UNITARITY_TOL {
            return Err(Error::InvalidMirror {
                r,
                t,
                reason: "r² + t² must equal 1",
            });
        }
        Ok(Self { r, t })
    }

    /// Symmetric-cavity mirror giving the requested finesse.
    pub fn for_finesse(finesse: f64) -> Result<Self> {
        if !(finesse.is_finite() && finesse >= 0.0) {
            return Err(Error::param("finesse", "must be finite and >= 0"));
        }
        if finesse == 0.0 {
            return Self::new(0.0);
        }
        // F s² + π s - F = 0 with s = √(r1 r2) = r
        let s = (-PI + (PI * PI + 4.0 * finesse * finesse).sqrt()) / (2.0 * finesse);
        Self::new(s)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// 𝓕 = π √(r1 r2) / (1 - r1 r2).
pub fn finesse(m1: &Mirror, m2: &Mirror) -> f64 {
    let rr = m1.r * m2.r;
    PI * rr.sqrt() / (1.0 - rr)
}

/// Finesse straight from reflection amplitudes, rejecting the closed limit.
pub fn finesse_of(r1: f64, r2: f64) -> Result<f64> {
    Ok(finesse(&Mirror::new(r1)?, &Mirror::new(r2)?))
}

/// η = 𝓕·v/c.
pub fn eta(finesse: f64, peak_velocity: f64, units: &UnitSystem) -> f64 {
    finesse * peak_velocity / units.c
}

/// Largest η for which the round-trip Doppler gain ((1+β)/(1-β))² of a
/// cavity oscillating at an odd resonance stays below the loss 1/(r1 r2).
pub fn parametric_threshold(m1: &Mirror, m2: &Mirror) -> f64 {
    let s = (m1.r * m2.r).sqrt();
    finesse(m1, m2) * (1.0 - s) / (1.0 + s)
}

/// Signs of the real orthogonal single-mirror S-matrix.
///
/// The outer face of each mirror reflects with `-outer_sign·r`, the inner face
/// with `+outer_sign·r`, and transmission carries `transmission_sign·t`. The
/// default is S = [[-r, t], [t, r]] with the outer face first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignConvention {
    pub outer_sign: f64,
    pub transmission_sign: f64,
}

impl Default for SignConvention {
    fn default() -> Self {
        Self {
            outer_sign: 1.0,
            transmission_sign: 1.0,
        }
    }
}

/// Two mirrors at rest distance L sharing one global displacement q(t):
/// the left mirror sits at q(t), the right one at L + q(t).
#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    left: Mirror,
    right: Mirror,
    length: f64,
    motion: Trajectory,
    units: UnitSystem,
    convention: SignConvention,
    finesse: f64,
    eta: f64,
}

impl CavityConfig {
    pub fn new(
        left: Mirror,
        right: Mirror,
        length: f64,
        motion: Trajectory,
        units: UnitSystem,
    ) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::param("length", "cavity length must be positive"));
        }
        if (motion.c() - units.c).abs() > 1e-12 * units.c {
            return Err(Error::param("motion", "trajectory built with a different speed of light"));
        }
        if let Some(a) = motion.amplitude() {
            if a >= length / 10.0 {
                return Err(Error::param(
                    "amplitude",
                    format!("motion amplitude {a} must stay below L/10 = {}", length / 10.0),
                ));
            }
        }
        let finesse = finesse(&left, &right);
        let eta = eta(finesse, motion.peak_velocity(), &units);
        Ok(Self {
            left,
            right,
            length,
            motion,
            units,
            convention: SignConvention::default(),
            finesse,
            eta,
        })
    }

    /// Symmetric cavity of finesse `finesse` driven at Ω = order·π/τ with the
    /// amplitude that yields the requested η.
    pub fn resonant(
        finesse: f64,
        eta: f64,
        order: u32,
        length: f64,
        units: UnitSystem,
    ) -> Result<Self> {
        Self::driven(finesse, eta, order as f64 * PI * units.c / length, length, units)
    }

    /// Symmetric cavity of given finesse driven at angular frequency `omega`
    /// with peak velocity η·c/𝓕.
    pub fn driven(
        finesse: f64,
        eta: f64,
        omega: f64,
        length: f64,
        units: UnitSystem,
    ) -> Result<Self> {
        if !(finesse > 0.0) {
            return Err(Error::param("finesse", "must be positive"));
        }
        if !(eta >= 0.0) {
            return Err(Error::param("eta", "must be >= 0"));
        }
        let mirror = Mirror::for_finesse(finesse)?;
        let velocity = eta * units.c / finesse;
        let motion = Trajectory::new(
            Motion::Sinusoid {
                q0: 0.0,
                amplitude: velocity / omega,
                omega,
                phase: 0.0,
            },
            &units,
        )?;
        Self::new(mirror, mirror, length, motion, units)
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn left(&self) -> &Mirror {
        &self.left
    }

    pub fn right(&self) -> &Mirror {
        &self.right
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn motion(&self) -> &Trajectory {
        &self.motion
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    /// One-way time of flight τ = L/c.
    pub fn tau(&self) -> f64 {
        self.length / self.units.c
    }

    pub fn finesse(&self) -> f64 {
        self.finesse
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// r1·r2
    pub fn round_trip_reflectance(&self) -> f64 {
        self.left.r * self.right.r
    }

    pub fn parametric_threshold(&self) -> f64 {
        parametric_threshold(&self.left, &self.right)
    }

    /// Cavity seen from the other side: mirrors swapped and q → -q.
    pub fn mirrored(&self) -> Self {
        Self {
            left: self.right,
            right: self.left,
            motion: self.motion.reflected(),
            ..self.clone()
        }
    }

    pub fn warnings(&self) -> Vec<Warning> {
        let mut out = Vec::new();
        if self.eta >= 1.0 {
            out.push(Warning::EtaAboveUnity { eta: self.eta });
        }
        let threshold = self.parametric_threshold();
        if self.motion.period().is_some() && self.eta >= threshold {
            out.push(Warning::AboveParametricThreshold {
                eta: self.eta,
                threshold,
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_reflection_means_zero_finesse() {
        assert_eq!(finesse_of(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn finesse_of_high_reflectors() {
        // π·0.99/(1 - 0.9801) = 156.290...
        let f = finesse_of(0.99, 0.99).unwrap();
        assert!((f - 156.2903).abs() < 1e-3, "{f}");
    }

    #[test]
    fn closed_cavity_is_rejected() {
        assert_eq!(finesse_of(1.0, 0.9), Err(Error::PerfectMirror));
        assert_eq!(Mirror::new(1.0), Err(Error::PerfectMirror));
    }

    #[test]
    fn unitarity_holds_and_is_enforced() {
        for i in 0..1000 {
            let r = i as f64 / 1000.0;
            let m = Mirror::new(r).unwrap();
            assert!((m.r() * m.r() + m.t() * m.t() - 1.0).abs() <= 1e-12);
        }
        assert!(Mirror::from_amplitudes(0.6, 0.8).is_ok());
        assert!(Mirror::from_amplitudes(0.6, 0.81).is_err());
        assert!(Mirror::new(-0.1).is_err());
    }

    #[test]
    fn finesse_is_strictly_monotone() {
        let values: Vec<f64> = (1..=100)
            .map(|i| {
                let rr = i as f64 / 101.0;
                finesse_of(rr.sqrt(), rr.sqrt()).unwrap()
            })
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn mirror_for_finesse_inverts_finesse() {
        for f in [0.5, 10.0, 30.0, 100.0, 1e4] {
            let m = Mirror::for_finesse(f).unwrap();
            assert!((finesse(&m, &m) - f).abs() < 1e-9 * f);
        }
    }

    #[test]
    fn eta_examples() {
        let si = UnitSystem::si();
        let e = eta(1e9, 0.3, &UnitSystem::new(3e8, si.hbar, si.k_b).unwrap());
        assert!((e - 1.0).abs() < 1e-12);
        assert_eq!(eta(30.0, 0.0, &UnitSystem::natural()), 0.0);
        assert!((eta(30.0, 0.03, &UnitSystem::natural()) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn resonant_cavity_reproduces_requested_parameters() {
        let cav = CavityConfig::resonant(30.0, 0.6, 3, 1.0, UnitSystem::natural()).unwrap();
        assert!((cav.finesse() - 30.0).abs() < 1e-9);
        assert!((cav.eta() - 0.6).abs() < 1e-12);
        assert_eq!(cav.tau(), 1.0);
        assert_eq!(cav.motion().period(), Some(2.0 / 3.0));
    }

    #[test]
    fn large_amplitude_is_rejected() {
        let units = UnitSystem::natural();
        let m = Mirror::new(0.9).unwrap();
        let traj = Trajectory::natural(Motion::Sinusoid {
            q0: 0.0,
            amplitude: 0.2,
            omega: 1.0,
            phase: 0.0,
        })
        .unwrap();
        assert!(CavityConfig::new(m, m, 1.0, traj, units).is_err());
    }

    #[test]
    fn parametric_threshold_stays_below_pi_over_four() {
        for f in [1.0, 10.0, 30.0, 100.0, 1e6] {
            let m = Mirror::for_finesse(f).unwrap();
            let th = parametric_threshold(&m, &m);
            assert!(th > 0.0 && th < PI / 4.0, "{f}: {th}");
        }
        let m = Mirror::for_finesse(1e6).unwrap();
        assert!((parametric_threshold(&m, &m) - PI / 4.0).abs() < 1e-5);
    }

    #[test]
    fn warnings_flag_eta_regimes() {
        let units = UnitSystem::natural();
        let low = CavityConfig::resonant(30.0, 0.3, 3, 1.0, units).unwrap();
        assert!(low.warnings().is_empty());
        let high = CavityConfig::resonant(30.0, 0.9, 3, 1.0, units).unwrap();
        assert!(matches!(
            high.warnings()[..],
            [Warning::AboveParametricThreshold { .. }]
        ));
    }
}
