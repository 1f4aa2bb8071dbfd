use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A mirror with r = 1 closes the cavity; nothing leaves it, so the
    /// outside emission is not defined.
    #[error("perfect mirror (r = 1): a closed cavity emits nothing outside")]
    PerfectMirror,

    #[error("invalid mirror amplitudes r = {r}, t = {t}: {reason}")]
    InvalidMirror { r: f64, t: f64, reason: &'static str },

    #[error("superluminal trajectory: peak |q'| = {peak} is not below c = {c} (subluminality required)")]
    SuperluminalTrajectory { peak: f64, c: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("bounce solver did not converge for null coordinate {coordinate}: {reason}")]
    NoConvergence { coordinate: f64, reason: &'static str },

    #[error("sampled-trajectory derivative noise {estimate:e} exceeds 10% of the flux scale {scale:e}")]
    DerivativeNoise { estimate: f64, scale: f64 },

    #[error("aliasing: frequency {frequency} exceeds the grid Nyquist bound {nyquist}")]
    Aliasing { frequency: f64, nyquist: f64 },

    #[error("point-split check failed: Richardson estimate over eps, eps/2, eps/4 differs from the analytic kernel by {deviation:e} (limit {limit:e})")]
    SplitInstability { deviation: f64, limit: f64 },

    #[error("not converged: {check} changed by {relative_change:e} (limit {limit:e})")]
    NonConverged {
        check: &'static str,
        relative_change: f64,
        limit: f64,
    },
}

impl Error {
    /// True for failures of a numerical procedure (as opposed to inputs that
    /// violate a physical invariant).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::DerivativeNoise { .. }
                | Error::Aliasing { .. }
                | Error::SplitInstability { .. }
                | Error::NonConverged { .. }
        )
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Non-fatal conditions reported alongside a result.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The multiple-scattering series was cut at `n_max` round trips.
    Truncation { n_max: usize, residual_bound: f64 },
    /// The requested round-trip count exceeded the default cap of 10 finesse.
    TruncationCapExceeded { n_max: usize, cap: usize },
    /// The homographic resummation is outside its declared validity range.
    QuasiStaticViolation { parameter: f64, limit: f64 },
    /// η ≥ 1 was requested.
    EtaAboveUnity { eta: f64 },
    /// Round-trip Doppler gain can beat the mirror losses; the path sum grows
    /// with the number of round trips instead of converging.
    AboveParametricThreshold { eta: f64, threshold: f64 },
    /// The tuned-resonance rate formula was used without asserting resonance.
    ResonanceNotConfigured,
    /// Peak velocity above a typical sound velocity in solids.
    VelocityAboveSoundSpeed { velocity: f64, limit: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::Truncation { n_max, residual_bound } => write!(
                f,
                "path sum truncated at {n_max} round trips (unitarity residual <= {residual_bound:e})"
            ),
            Warning::TruncationCapExceeded { n_max, cap } => {
                write!(f, "round-trip count {n_max} exceeds the default cap {cap}")
            }
            Warning::QuasiStaticViolation { parameter, limit } => write!(
                f,
                "quasi-static parameter {parameter:e} exceeds its validity limit {limit:e}"
            ),
            Warning::EtaAboveUnity { eta } => write!(f, "eta = {eta} >= 1"),
            Warning::AboveParametricThreshold { eta, threshold } => write!(
                f,
                "eta = {eta} is above the parametric threshold {threshold:.4}; output grows with the truncation order"
            ),
            Warning::ResonanceNotConfigured => write!(
                f,
                "photon rate uses the tuned-resonance formula but resonance was not asserted"
            ),
            Warning::VelocityAboveSoundSpeed { velocity, limit } => write!(
                f,
                "peak velocity {velocity} m/s exceeds the sound-velocity advisory {limit} m/s"
            ),
        }
    }
}
