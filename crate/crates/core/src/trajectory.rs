//! Mirror worldlines q(t) with derivatives up to the jerk.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::UnitSystem;

/// q and its first three time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Kinematics {
    pub position: f64,
    pub velocity: f64,
    pub acceleration: f64,
    pub jerk: f64,
}

/// Worldline families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Motion {
    Static {
        #[serde(default)]
        q0: f64,
    },
    UniformVelocity {
        #[serde(default)]
        q0: f64,
        velocity: f64,
    },
    /// Hyperbolic motion with signed proper acceleration, passing through
    /// `x0` at `t0` with zero velocity.
    UniformAcceleration {
        proper_acceleration: f64,
        #[serde(default)]
        t0: f64,
        #[serde(default)]
        x0: f64,
    },
    /// q0 + a·sin(Ω t + φ0)
    Sinusoid {
        #[serde(default)]
        q0: f64,
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    Sampled(SampledPath),
}

/// Uniformly sampled positions. Positions are cubic-interpolated; derivatives
/// come from second-order central differences (error O(h²)) interpolated
/// the same way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledPath {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

/// Nodes lost at each end to the widest (jerk) stencil plus interpolation.
const SAMPLED_MARGIN: usize = 3;

impl SampledPath {
    pub fn from_fn(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        Self {
            t0,
            dt,
            values: (0..n).map(|i| f(t0 + i as f64 * dt)).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param("dt", "sample spacing must be positive"));
        }
        if self.values.len() < 2 * SAMPLED_MARGIN + 2 {
            return Err(Error::param(
                "values",
                format!("need at least {} samples", 2 * SAMPLED_MARGIN + 2),
            ));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("values", "samples must be finite"));
        }
        Ok(())
    }

    /// Time range on which all derivative stencils are available.
    pub fn window(&self) -> (f64, f64) {
        let n = self.values.len();
        (
            self.t0 + SAMPLED_MARGIN as f64 * self.dt,
            self.t0 + (n - 1 - SAMPLED_MARGIN) as f64 * self.dt,
        )
    }

    fn node_derivative(&self, i: usize, order: usize, stride: usize) -> f64 {
        let q = &self.values;
        let h = self.dt * stride as f64;
        let at = |k: isize| q[(i as isize + k * stride as isize) as usize];
        match order {
            0 => q[i],
            1 => (at(1) - at(-1)) / (2.0 * h),
            2 => (at(1) - 2.0 * at(0) + at(-1)) / (h * h),
            _ => (at(2) - 2.0 * at(1) + 2.0 * at(-1) - at(-2)) / (2.0 * h * h * h),
        }
    }

    fn interpolate(&self, t: f64, order: usize) -> f64 {
        let n = self.values.len();
        let x = (t - self.t0) / self.dt;
        // Four-point cubic Lagrange over nodes i-1..=i+2, kept inside the stencil range.
        let lo = if order >= 3 { 2 } else { 1 };
        let i = (x.floor() as isize).clamp(lo as isize + 1, (n - lo - 3) as isize) as usize;
        let s = x - i as f64;
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        (0..4)
            .map(|k| w[k] * self.node_derivative(i + k - 1, order, 1))
            .sum()
    }

    fn kinematics(&self, t: f64) -> Kinematics {
        Kinematics {
            position: self.interpolate(t, 0),
            velocity: self.interpolate(t, 1),
            acceleration: self.interpolate(t, 2),
            jerk: self.interpolate(t, 3),
        }
    }

    /// Largest |q'''| difference between the h and 2h stencils, divided by 3:
    /// the leading-order estimate of the jerk stencil error.
    pub fn jerk_error_estimate(&self) -> f64 {
        let n = self.values.len();
        (4..n - 4)
            .map(|i| (self.node_derivative(i, 3, 2) - self.node_derivative(i, 3, 1)).abs() / 3.0)
            .fold(0.0, f64::max)
    }

    /// Largest |q'''| over the nodes.
    pub fn jerk_scale(&self) -> f64 {
        let n = self.values.len();
        (2..n - 2)
            .map(|i| self.node_derivative(i, 3, 1).abs())
            .fold(0.0, f64::max)
    }

    /// Size of the jerk stencil's rounding error.
    pub fn jerk_roundoff(&self) -> f64 {
        let qmax = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        16.0 * f64::EPSILON * qmax.max(f64::MIN_POSITIVE) / self.dt.powi(3)
    }

    fn max_speed(&self) -> f64 {
        let n = self.values.len();
        (1..n - 1)
            .map(|i| self.node_derivative(i, 1, 1).abs())
            .fold(0.0, f64::max)
    }
}

/// A validated, strictly subluminal worldline.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    motion: Motion,
    c: f64,
}

impl Trajectory {
    pub fn new(motion: Motion, units: &UnitSystem) -> Result<Self> {
        let c = units.c;
        let check_finite = |name: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, "must be finite"))
            }
        };
        match &motion {
            Motion::Static { q0 } => check_finite("q0", *q0)?,
            Motion::UniformVelocity { q0, velocity } => {
                check_finite("q0", *q0)?;
                check_finite("velocity", *velocity)?;
            }
            Motion::UniformAcceleration {
                proper_acceleration,
                t0,
                x0,
            } => {
                check_finite("t0", *t0)?;
                check_finite("x0", *x0)?;
                if !(proper_acceleration.is_finite() && *proper_acceleration != 0.0) {
                    return Err(Error::param(
                        "proper_acceleration",
                        "must be finite and non-zero",
                    ));
                }
            }
            Motion::Sinusoid {
                q0,
                amplitude,
                omega,
                phase,
            } => {
                check_finite("q0", *q0)?;
                check_finite("amplitude", *amplitude)?;
                check_finite("phase", *phase)?;
                if !(omega.is_finite() && *omega > 0.0) {
                    return Err(Error::param("omega", "must be positive"));
                }
            }
            Motion::Sampled(path) => path.validate()?,
        }
        let traj = Self { motion, c };
        let peak = traj.peak_velocity();
        let hyperbolic = matches!(traj.motion, Motion::UniformAcceleration { .. });
        if !hyperbolic && peak >= c {
            return Err(Error::SuperluminalTrajectory { peak, c });
        }
        Ok(traj)
    }

    /// Shorthand for natural units.
    pub fn natural(motion: Motion) -> Result<Self> {
        Self::new(motion, &UnitSystem::natural())
    }

    pub fn stationary() -> Self {
        Self {
            motion: Motion::Static { q0: 0.0 },
            c: 1.0,
        }
    }

    pub fn motion(&self) -> &Motion {
        &self.motion
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn kinematics(&self, t: f64) -> Kinematics {
        match &self.motion {
            Motion::Static { q0 } => Kinematics {
                position: *q0,
                ..Default::default()
            },
            Motion::UniformVelocity { q0, velocity } => Kinematics {
                position: q0 + velocity * t,
                velocity: *velocity,
                ..Default::default()
            },
            Motion::UniformAcceleration {
                proper_acceleration,
                t0,
                x0,
            } => {
                let c2 = self.c * self.c;
                let sign = proper_acceleration.signum();
                let alpha = proper_acceleration.abs();
                let big_a = c2 * c2 / (alpha * alpha);
                let tau = t - t0;
                let g = (big_a + c2 * tau * tau).sqrt();
                Kinematics {
                    position: x0 + sign * (g - c2 / alpha),
                    velocity: sign * c2 * tau / g,
                    acceleration: sign * c2 * big_a / (g * g * g),
                    jerk: -3.0 * sign * c2 * c2 * big_a * tau / g.powi(5),
                }
            }
            Motion::Sinusoid {
                q0,
                amplitude,
                omega,
                phase,
            } => {
                let (s, c) = (omega * t + phase).sin_cos();
                let a = *amplitude;
                let w = *omega;
                Kinematics {
                    position: q0 + a * s,
                    velocity: a * w * c,
                    acceleration: -a * w * w * s,
                    jerk: -a * w * w * w * c,
                }
            }
            Motion::Sampled(path) => path.kinematics(t),
        }
    }

    pub fn position(&self, t: f64) -> f64 {
        self.kinematics(t).position
    }

    /// Maximal |q'|: a·Ω for a sinusoid, the sample maximum for sampled
    /// paths, and the (unattained) supremum c for hyperbolic motion.
    pub fn peak_velocity(&self) -> f64 {
        match &self.motion {
            Motion::Static { .. } => 0.0,
            Motion::UniformVelocity { velocity, .. } => velocity.abs(),
            Motion::UniformAcceleration { .. } => self.c,
            Motion::Sinusoid {
                amplitude, omega, ..
            } => amplitude.abs() * omega,
            Motion::Sampled(path) => path.max_speed(),
        }
    }

    /// Maximal |q - q_rest| for bounded motions.
    pub fn amplitude(&self) -> Option<f64> {
        match &self.motion {
            Motion::Static { .. } => Some(0.0),
            Motion::Sinusoid { amplitude, .. } => Some(amplitude.abs()),
            Motion::Sampled(path) => {
                let mean = path.values.iter().sum::<f64>() / path.values.len() as f64;
                Some(path.values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max))
            }
            _ => None,
        }
    }

    /// Rest position about which a bounded motion oscillates.
    pub fn rest_position(&self) -> f64 {
        match &self.motion {
            Motion::Static { q0 } | Motion::Sinusoid { q0, .. } => *q0,
            Motion::UniformVelocity { q0, .. } => *q0,
            Motion::UniformAcceleration { x0, .. } => *x0,
            Motion::Sampled(path) => path.values[0],
        }
    }

    /// Period of a periodic motion (`None` for static or aperiodic kinds).
    pub fn period(&self) -> Option<f64> {
        match &self.motion {
            Motion::Sinusoid { omega, .. } => Some(2.0 * std::f64::consts::PI / omega),
            _ => None,
        }
    }

    pub fn is_static(&self) -> bool {
        match &self.motion {
            Motion::Static { .. } => true,
            Motion::Sinusoid { amplitude, .. } => *amplitude == 0.0,
            Motion::UniformVelocity { velocity, .. } => *velocity == 0.0,
            Motion::Sampled(p) => p.values.iter().all(|v| *v == p.values[0]),
            Motion::UniformAcceleration { .. } => false,
        }
    }

    /// Time range where the worldline is defined (`None` = all times).
    pub fn window(&self) -> Option<(f64, f64)> {
        match &self.motion {
            Motion::Sampled(path) => Some(path.window()),
            _ => None,
        }
    }

    /// The mirror-image worldline q → -q.
    pub fn reflected(&self) -> Self {
        let motion = match &self.motion {
            Motion::Static { q0 } => Motion::Static { q0: -q0 },
            Motion::UniformVelocity { q0, velocity } => Motion::UniformVelocity {
                q0: -q0,
                velocity: -velocity,
            },
            Motion::UniformAcceleration {
                proper_acceleration,
                t0,
                x0,
            } => Motion::UniformAcceleration {
                proper_acceleration: -proper_acceleration,
                t0: *t0,
                x0: -x0,
            },
            Motion::Sinusoid {
                q0,
                amplitude,
                omega,
                phase,
            } => Motion::Sinusoid {
                q0: -q0,
                amplitude: -amplitude,
                omega: *omega,
                phase: *phase,
            },
            Motion::Sampled(path) => Motion::Sampled(SampledPath {
                t0: path.t0,
                dt: path.dt,
                values: path.values.iter().map(|v| -v).collect(),
            }),
        };
        Self { motion, c: self.c }
    }

    /// The same worldline rigidly displaced by `dx`.
    pub fn shifted(&self, dx: f64) -> Self {
        let motion = match &self.motion {
            Motion::Static { q0 } => Motion::Static { q0: q0 + dx },
            Motion::UniformVelocity { q0, velocity } => Motion::UniformVelocity {
                q0: q0 + dx,
                velocity: *velocity,
            },
            Motion::UniformAcceleration {
                proper_acceleration,
                t0,
                x0,
            } => Motion::UniformAcceleration {
                proper_acceleration: *proper_acceleration,
                t0: *t0,
                x0: x0 + dx,
            },
            Motion::Sinusoid {
                q0,
                amplitude,
                omega,
                phase,
            } => Motion::Sinusoid {
                q0: q0 + dx,
                amplitude: *amplitude,
                omega: *omega,
                phase: *phase,
            },
            Motion::Sampled(path) => Motion::Sampled(SampledPath {
                t0: path.t0,
                dt: path.dt,
                values: path.values.iter().map(|v| v + dx).collect(),
            }),
        };
        Self { motion, c: self.c }
    }
}

/// Peak velocity of a trajectory.
pub fn peak_velocity(traj: &Trajectory) -> f64 {
    traj.peak_velocity()
}
