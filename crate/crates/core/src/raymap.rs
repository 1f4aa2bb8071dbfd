//! Null-ray kinematics: bounce solving, single-mirror ray maps, backward
//! path tracing through the cavity, and the resummed round-trip transfer.

use num_complex::Complex64;

use crate::cavity::CavityConfig;
use crate::error::{Error, Result, Warning};
use crate::trajectory::{Motion, Trajectory};

const REL_TOL: f64 = 1e-13;
const MAX_NEWTON: usize = 60;
const MAX_BISECTION: usize = 400;
const MAX_BRACKET_DOUBLINGS: usize = 200;

/// Residual target for the default truncation order.
pub const DEFAULT_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// u = t − x/c
    RightMoving,
    /// v = t + x/c
    LeftMoving,
}

impl Chirality {
    pub fn flipped(self) -> Self {
        match self {
            Chirality::RightMoving => Chirality::LeftMoving,
            Chirality::LeftMoving => Chirality::RightMoving,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullCoordinate {
    pub value: f64,
    pub chirality: Chirality,
}

impl NullCoordinate {
    pub fn right(u: f64) -> Self {
        Self {
            value: u,
            chirality: Chirality::RightMoving,
        }
    }

    pub fn left(v: f64) -> Self {
        Self {
            value: v,
            chirality: Chirality::LeftMoving,
        }
    }
}

/// A function of one null coordinate with its first three derivatives and
/// its Schwarzian, carried separately through compositions so that deep
/// compositions do not lose it to cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub schwarz: f64,
}

impl Jet {
    pub fn identity(x: f64) -> Self {
        Self {
            value: x,
            d1: 1.0,
            d2: 0.0,
            d3: 0.0,
            schwarz: 0.0,
        }
    }

    /// Jet of a single map from its derivatives.
    pub fn from_derivatives(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        let a = d2 / d1;
        Self {
            value,
            d1,
            d2,
            d3,
            schwarz: d3 / d1 - 1.5 * a * a,
        }
    }

    /// `outer ∘ self`, where `outer` is expanded at `self.value`.
    pub fn then(&self, outer: &Jet) -> Jet {
        let (f1, f2, f3) = (self.d1, self.d2, self.d3);
        Jet {
            value: outer.value,
            d1: outer.d1 * f1,
            d2: outer.d2 * f1 * f1 + outer.d1 * f2,
            d3: outer.d3 * f1 * f1 * f1 + 3.0 * outer.d2 * f1 * f2 + outer.d1 * f3,
            // S(g∘f) = (S(g)∘f)·f'² + S(f)
            schwarz: outer.schwarz * f1 * f1 + self.schwarz,
        }
    }

    /// F'''/F' − (3/2)(F''/F')²
    pub fn schwarzian(&self) -> f64 {
        self.schwarz
    }
}

/// A reflection off a mirror worldline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BounceEvent {
    pub t_refl: f64,
    pub x_refl: f64,
    /// d(partner coordinate)/d(given coordinate): (c + q')/(c − q') when a
    /// right-mover coordinate is given, the reciprocal for a left-mover.
    pub doppler: f64,
    /// The partner null coordinate 2·t_refl − given, with flipped chirality.
    pub partner: NullCoordinate,
    /// Partner coordinate as a jet in the given coordinate.
    pub jet: Jet,
}

/// Solves for the reflection of `incoming` off the worldline q(t).
pub fn bounce_time(traj: &Trajectory, incoming: NullCoordinate) -> Result<BounceEvent> {
    bounce_time_offset(traj, 0.0, incoming)
}

/// Same as [`bounce_time`] for a mirror at `offset + q(t)`.
pub fn bounce_time_offset(
    traj: &Trajectory,
    offset: f64,
    incoming: NullCoordinate,
) -> Result<BounceEvent> {
    let c = traj.c();
    let x = incoming.value;
    if !x.is_finite() {
        return Err(Error::NoConvergence {
            coordinate: x,
            reason: "non-finite null coordinate",
        });
    }
    // right-mover: t − (X + q)/c = u;  left-mover: t + (X + q)/c = v
    let s = match incoming.chirality {
        Chirality::RightMoving => -1.0,
        Chirality::LeftMoving => 1.0,
    };
    let residual = |t: f64| t + s * (offset + traj.position(t)) / c - x;
    let window = traj.window();
    let inside = |t: f64| window.map_or(true, |(a, b)| t >= a && t <= b);

    let seed = x - s * (offset + traj.rest_position()) / c;
    let scale = |t: f64| REL_TOL * t.abs().max(x.abs()).max(offset.abs() / c).max(f64::MIN_POSITIVE);

    let mut t = seed;
    let mut root = None;
    for _ in 0..MAX_NEWTON {
        if !inside(t) {
            break;
        }
        let k = traj.kinematics(t);
        let slope = 1.0 + s * k.velocity / c;
        if !(slope > 0.0) {
            // hyperbolic motion only reaches |q'| = c by rounding far out
            if matches!(traj.motion(), Motion::UniformAcceleration { .. }) {
                break;
            }
            return Err(Error::SuperluminalTrajectory {
                peak: k.velocity.abs(),
                c,
            });
        }
        let f = t + s * (offset + k.position) / c - x;
        let step = f / slope;
        t -= step;
        if step.abs() <= scale(t) {
            root = Some(t);
            break;
        }
    }
    let t = match root {
        Some(t) if inside(t) => t,
        _ => bisect(&residual, seed, window, scale, x)?,
    };
    if !inside(t) {
        return Err(Error::NoConvergence {
            coordinate: x,
            reason: "reflection lies outside the sampled window",
        });
    }

    let k = traj.kinematics(t);
    let beta = k.velocity / c;
    let acc = k.acceleration / c;
    let jerk = k.jerk / c;
    let jet = match incoming.chirality {
        Chirality::RightMoving => {
            let d = 1.0 - beta;
            Jet::from_derivatives(
                2.0 * t - x,
                (1.0 + beta) / d,
                2.0 * acc / d.powi(3),
                2.0 * jerk / d.powi(4) + 6.0 * acc * acc / d.powi(5),
            )
        }
        Chirality::LeftMoving => {
            let d = 1.0 + beta;
            Jet::from_derivatives(
                2.0 * t - x,
                (1.0 - beta) / d,
                -2.0 * acc / d.powi(3),
                -2.0 * jerk / d.powi(4) + 6.0 * acc * acc / d.powi(5),
            )
        }
    };
    Ok(BounceEvent {
        t_refl: t,
        x_refl: offset + k.position,
        doppler: jet.d1,
        partner: NullCoordinate {
            value: jet.value,
            chirality: incoming.chirality.flipped(),
        },
        jet,
    })
}

/// Bracketing bisection on a strictly increasing residual.
fn bisect(
    f: &impl Fn(f64) -> f64,
    seed: f64,
    window: Option<(f64, f64)>,
    tol: impl Fn(f64) -> f64,
    coordinate: f64,
) -> Result<f64> {
    let exhausted = Error::NoConvergence {
        coordinate,
        reason: "could not bracket the reflection (search window exhausted)",
    };
    let (mut lo, mut hi) = (seed, seed);
    let mut width = seed.abs().max(1.0) * 1e-6;
    let clamp = |t: f64| window.map_or(t, |(a, b)| t.clamp(a, b));
    let mut k = 0;
    while f(lo) > 0.0 {
        lo = clamp(seed - width);
        width *= 2.0;
        k += 1;
        if k > MAX_BRACKET_DOUBLINGS || (window.is_some() && lo == clamp(f64::NEG_INFINITY) && f(lo) > 0.0) {
            return Err(exhausted);
        }
    }
    width = seed.abs().max(1.0) * 1e-6;
    k = 0;
    while f(hi) < 0.0 {
        hi = clamp(seed + width);
        width *= 2.0;
        k += 1;
        if k > MAX_BRACKET_DOUBLINGS || (window.is_some() && hi == clamp(f64::INFINITY) && f(hi) < 0.0) {
            return Err(exhausted);
        }
    }
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol(mid) || mid == lo || mid == hi {
            return Ok(mid);
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        coordinate,
        reason: "bisection did not reach tolerance",
    })
}

/// Perfect-mirror ray map: an outgoing coordinate to the incoming one it
/// came from, p(u) = 2·t_refl − u.
pub fn ray_map_single(traj: &Trajectory, u: NullCoordinate) -> Result<NullCoordinate> {
    Ok(bounce_time(traj, u)?.partner)
}

/// [`ray_map_single`] together with p', p'' and p'''.
pub fn ray_map_single_jet(traj: &Trajectory, u: NullCoordinate) -> Result<Jet> {
    Ok(bounce_time(traj, u)?.jet)
}

/// Which vacuum an input ray comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputChannel {
    LeftVacuum,
    RightVacuum,
}

impl InputChannel {
    fn swapped(self) -> Self {
        match self {
            InputChannel::LeftVacuum => InputChannel::RightVacuum,
            InputChannel::RightVacuum => InputChannel::LeftVacuum,
        }
    }
}

/// One multiple-scattering path from a vacuum input to the detected output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathContribution {
    pub amplitude: f64,
    /// Input-side coordinate F_p(u).
    pub mapped_coordinate: NullCoordinate,
    /// F_p and its derivatives with respect to the output coordinate.
    pub jet: Jet,
    pub n_bounces: usize,
    /// Internal round trips.
    pub round_trips: usize,
    pub input_channel: InputChannel,
}

impl PathContribution {
    /// F_p'(u)
    pub fn derivative(&self) -> f64 {
        self.jet.d1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    pub out_coordinate: NullCoordinate,
    pub contributions: Vec<PathContribution>,
    /// Upper bound on the unitarity budget missing from a static cavity.
    pub truncation_residual: f64,
}

impl PathSet {
    pub fn amplitude_norm(&self) -> f64 {
        self.contributions.iter().map(|p| p.amplitude * p.amplitude).sum()
    }

    pub fn channel(&self, ch: InputChannel) -> impl Iterator<Item = &PathContribution> {
        self.contributions.iter().filter(move |p| p.input_channel == ch)
    }
}

/// (r1 r2)^(2(N+1)) / (1 − (r1 r2)²)
pub fn residual_bound(cav: &CavityConfig, n_max: usize) -> f64 {
    let rr = cav.round_trip_reflectance();
    rr.powi(2 * (n_max as i32 + 1)) / (1.0 - rr * rr)
}

/// Smallest round-trip count with residual below [`DEFAULT_RESIDUAL`],
/// capped at 10·finesse.
pub fn default_n_max(cav: &CavityConfig) -> (usize, Option<Warning>) {
    n_max_for_residual(cav, DEFAULT_RESIDUAL)
}

pub fn n_max_for_residual(cav: &CavityConfig, residual: f64) -> (usize, Option<Warning>) {
    let cap = (10.0 * cav.finesse()).ceil().max(1.0) as usize;
    let mut n = 0;
    while residual_bound(cav, n) >= residual {
        n += 1;
        if n > cap {
            return (
                cap,
                Some(Warning::TruncationCapExceeded { n_max: n, cap }),
            );
        }
    }
    (n, None)
}

/// Truncation warning for a chosen order, if the residual exceeds the default target.
pub fn truncation_warning(cav: &CavityConfig, n_max: usize) -> Option<Warning> {
    let residual_bound = residual_bound(cav, n_max);
    (residual_bound > DEFAULT_RESIDUAL).then_some(Warning::Truncation {
        n_max,
        residual_bound,
    })
}

/// Backward-traces every path with at most `n_max` internal round trips that
/// feeds the output coordinate. A right-moving `u_out` is detected in the
/// right vacuum; a left-moving one in the left vacuum.
pub fn trace_paths(cav: &CavityConfig, u_out: NullCoordinate, n_max: usize) -> Result<PathSet> {
    match u_out.chirality {
        Chirality::RightMoving => trace_right_port(cav, u_out.value, n_max),
        Chirality::LeftMoving => {
            // x' = L − x exchanges the ports: v = u' + L/c.
            let shift = cav.tau();
            let mirrored = cav.mirrored();
            let mut set = trace_right_port(&mirrored, u_out.value - shift, n_max)?;
            set.out_coordinate = u_out;
            for p in &mut set.contributions {
                let delta = match p.input_channel {
                    InputChannel::LeftVacuum => shift,
                    InputChannel::RightVacuum => -shift,
                };
                p.jet.value += delta;
                p.mapped_coordinate = NullCoordinate {
                    value: p.jet.value,
                    chirality: p.mapped_coordinate.chirality.flipped(),
                };
                p.input_channel = p.input_channel.swapped();
            }
            Ok(set)
        }
    }
}

fn trace_right_port(cav: &CavityConfig, u: f64, n_max: usize) -> Result<PathSet> {
    let traj = cav.motion();
    let conv = cav.convention();
    let (r1, t1) = (cav.left().r(), cav.left().t());
    let (r2, t2) = (cav.right().r(), cav.right().t());
    let sigma = conv.outer_sign;
    let ts = conv.transmission_sign;
    let len = cav.length();
    let rr = sigma * sigma * r1 * r2;

    let mut out = Vec::with_capacity(2 * n_max + 3);
    let direct = bounce_time_offset(traj, len, NullCoordinate::right(u))?;
    out.push(PathContribution {
        amplitude: -sigma * r2,
        mapped_coordinate: direct.partner,
        jet: direct.jet,
        n_bounces: 1,
        round_trips: 0,
        input_channel: InputChannel::RightVacuum,
    });

    let mut jet = Jet::identity(u);
    let mut weight = 1.0;
    for n in 0..=n_max {
        out.push(PathContribution {
            amplitude: ts * ts * t1 * t2 * weight,
            mapped_coordinate: NullCoordinate::right(jet.value),
            jet,
            n_bounces: 2 * n,
            round_trips: n,
            input_channel: InputChannel::LeftVacuum,
        });
        let at_left = bounce_time_offset(traj, 0.0, NullCoordinate::right(jet.value))?;
        let via_left = jet.then(&at_left.jet);
        out.push(PathContribution {
            amplitude: ts * ts * t2 * t2 * sigma * r1 * weight,
            mapped_coordinate: NullCoordinate::left(via_left.value),
            jet: via_left,
            n_bounces: 2 * n + 1,
            round_trips: n,
            input_channel: InputChannel::RightVacuum,
        });
        if n == n_max {
            break;
        }
        let at_right = bounce_time_offset(traj, len, NullCoordinate::left(via_left.value))?;
        jet = via_left.then(&at_right.jet);
        weight *= rr;
    }
    Ok(PathSet {
        out_coordinate: NullCoordinate::right(u),
        contributions: out,
        truncation_residual: residual_bound(cav, n_max),
    })
}

/// Transfer values together with any validity warning.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSeries {
    pub u_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub warnings: Vec<Warning>,
}

/// Validity limit of the quasi-static resummation on 𝓕·Ωτ·a/L.
pub const QUASI_STATIC_LIMIT: f64 = 0.02;

/// Declared error of the resummation against the exact path sum below
/// [`QUASI_STATIC_LIMIT`]: |ΔH| ≤ K·(t1t2/(1 − r1r2))·ω·a/c. The leading
/// term is the transit half-phase z^(1/2), off by up to 2ωa/c.
pub const QUASI_STATIC_ERROR_CONSTANT: f64 = 4.0;

/// The declared resummation error bound at frequency `omega`.
pub fn quasi_static_error_bound(cav: &CavityConfig, omega: f64) -> f64 {
    let a = cav.motion().amplitude().unwrap_or(f64::INFINITY);
    let peak = cav.left().t() * cav.right().t() / (1.0 - cav.round_trip_reflectance());
    QUASI_STATIC_ERROR_CONSTANT * peak * omega * a / cav.units().c
}

/// 𝓕·Ωτ·a/L for periodic motion, 𝓕·(v/c) otherwise.
pub fn quasi_static_parameter(cav: &CavityConfig) -> f64 {
    let motion = cav.motion();
    match (motion.period(), motion.amplitude()) {
        (Some(p), Some(a)) => {
            let omega = 2.0 * std::f64::consts::PI / p;
            cav.finesse() * omega * cav.tau() * a / cav.length()
        }
        _ => cav.eta(),
    }
}

/// Round-trip phase accumulated by a ray leaving at `u`:
/// φ(u) = 2ωτ − (2ω/c)·[q(u) − q(u − τ)].
pub fn round_trip_phase(cav: &CavityConfig, u: f64, omega: f64) -> f64 {
    let q = cav.motion();
    let c = cav.units().c;
    let tau = cav.tau();
    2.0 * omega * tau - 2.0 * omega * (q.position(u) - q.position(u - tau)) / c
}

/// Homographic resummation of the left-to-right transfer:
/// H(u) = t1·t2·z^(1/2) / (1 − r1·r2·z), z = e^(iφ(u)).
pub fn mobius_resum(cav: &CavityConfig, u_grid: &[f64], omega: f64) -> Result<TransferSeries> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::param("omega", "must be positive"));
    }
    let conv = cav.convention();
    let pre = conv.transmission_sign.powi(2) * cav.left().t() * cav.right().t();
    let rr = cav.round_trip_reflectance();
    let values = u_grid
        .iter()
        .map(|&u| {
            let phi = round_trip_phase(cav, u, omega);
            let half = Complex64::from_polar(1.0, 0.5 * phi);
            pre * half / (1.0 - rr * half * half)
        })
        .collect();
    let mut warnings = Vec::new();
    let parameter = quasi_static_parameter(cav);
    if parameter > QUASI_STATIC_LIMIT {
        warnings.push(Warning::QuasiStaticViolation {
            parameter,
            limit: QUASI_STATIC_LIMIT,
        });
    }
    Ok(TransferSeries {
        u_grid: u_grid.to_vec(),
        values,
        warnings,
    })
}

/// The same transfer from the explicit path sum,
/// Σ_n A_n·exp(iω(u + τ − F_n(u))) over the left-input paths.
pub fn path_sum_transfer(
    cav: &CavityConfig,
    u_grid: &[f64],
    omega: f64,
    n_max: usize,
) -> Result<TransferSeries> {
    use rayon::prelude::*;
    let tau = cav.tau();
    let values = u_grid
        .par_iter()
        .map(|&u| {
            let set = trace_paths(cav, NullCoordinate::right(u), n_max)?;
            Ok(set
                .channel(InputChannel::LeftVacuum)
                .map(|p| p.amplitude * Complex64::from_polar(1.0, omega * (u + tau - p.jet.value)))
                .sum())
        })
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(TransferSeries {
        u_grid: u_grid.to_vec(),
        values,
        warnings: truncation_warning(cav, n_max).into_iter().collect(),
    })
}

/// Smallest N for which the left-input amplitude tail t1t2(r1r2)^(N+1)/(1 − r1r2)
/// drops below `bound`.
pub fn n_max_for_transfer(cav: &CavityConfig, bound: f64) -> usize {
    let rr = cav.round_trip_reflectance();
    let pre = cav.left().t() * cav.right().t() / (1.0 - rr);
    let mut n = 0;
    while pre * rr.powi(n as i32 + 1) >= bound {
        n += 1;
    }
    n
}
