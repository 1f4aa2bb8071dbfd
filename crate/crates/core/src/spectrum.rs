//! Photon-number spectra from Bogoliubov coefficients.
//!
//! Two engines share one normalization. The windowed transform evaluates
//! β(ω, ω′) directly by quadrature over the measurement window and works for
//! any motion. The line engine exploits periodic motion: every path map obeys
//! F_p(u + P) = F_p(u) + P, so
//!
//!   h(u) = Σ_p A_p F_p′(u) e^{−iω′(F_p(u) − u)}
//!
//! is P-periodic and β(ω, ω′) = (1/2π)√(ω′/ω) Σ_n h_n W(ω + ω′ − nΩ), with W the
//! window transform. One FFT of h over a single period yields every emission
//! line for the input frequency ω′.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::cavity::CavityConfig;
use crate::error::{Error, Result, Warning};
use crate::raymap::{
    bounce_time, default_n_max, trace_paths, truncation_warning, InputChannel, Jet, NullCoordinate,
};
use crate::trajectory::{Motion, Trajectory};

/// Factor multiplying |β|² so that the single-mirror count reproduces
/// N = Ω³a²T/(3πc²). Fixed once by [`calibrate_normalization`].
pub const BETA_NORMALIZATION: f64 = 2.0;

/// Oversampling demanded of the line engine above the highest frequency sum.
pub const NYQUIST_FACTOR: f64 = 8.0;

/// Relative change allowed when the per-period sampling is doubled.
pub const CONVERGENCE_TOLERANCE: f64 = 0.01;

const ROTATION_BLOCK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowShape {
    Rectangular,
    /// Cosine (Tukey) taper; the fraction of the window spent in the two ramps.
    Tapered(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementWindow {
    duration: f64,
    shape: WindowShape,
    samples: usize,
}

impl MeasurementWindow {
    pub fn new(duration: f64, shape: WindowShape, samples: usize) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::param("T", "measurement time must be positive"));
        }
        if !samples.is_power_of_two() || samples < 16 {
            return Err(Error::param("samples", "must be a power of two >= 16"));
        }
        if let WindowShape::Tapered(f) = shape {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::param("taper", "taper fraction must lie in (0, 1]"));
            }
        }
        Ok(Self {
            duration,
            shape,
            samples,
        })
    }

    /// `count` whole periods of length `period`.
    pub fn periods(period: f64, count: usize, shape: WindowShape, samples: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::param("periods", "need at least one period"));
        }
        Self::new(period * count as f64, shape, samples)
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn shape(&self) -> WindowShape {
        self.shape
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Frequency resolution 2π/T.
    pub fn resolution(&self) -> f64 {
        2.0 * PI / self.duration
    }

    /// Window weight at fraction `s` ∈ [0, 1] of the duration.
    pub fn weight(&self, s: f64) -> f64 {
        match self.shape {
            WindowShape::Rectangular => 1.0,
            WindowShape::Tapered(f) => {
                let edge = 0.5 * f;
                if s < edge {
                    0.5 * (1.0 - (PI * s / edge).cos())
                } else if s > 1.0 - edge {
                    0.5 * (1.0 - (PI * (1.0 - s) / edge).cos())
                } else {
                    1.0
                }
            }
        }
    }

    /// |W(mΔω)|²/T² for the offsets m that matter.
    fn kernel(&self) -> Vec<(isize, f64)> {
        match self.shape {
            WindowShape::Rectangular => vec![(0, 1.0)],
            WindowShape::Tapered(_) => {
                let s = self.samples;
                let mut buf: Vec<Complex64> = (0..s)
                    .map(|i| Complex64::new(self.weight(i as f64 / s as f64), 0.0))
                    .collect();
                FftPlanner::new().plan_fft_forward(s).process(&mut buf);
                let norm = (s * s) as f64;
                let k0 = buf[0].norm_sqr() / norm;
                let reach = (s / 2).min(64) as isize;
                (-reach..=reach)
                    .filter_map(|m| {
                        let idx = m.rem_euclid(s as isize) as usize;
                        let k = buf[idx].norm_sqr() / norm;
                        (k > 1e-13 * k0).then_some((m, k))
                    })
                    .collect()
            }
        }
    }
}

/// What radiates.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// A perfect mirror with vacuum on both sides.
    SingleMirror(Trajectory),
    Cavity(CavityConfig),
}

impl Source {
    pub fn trajectory(&self) -> &Trajectory {
        match self {
            Source::SingleMirror(t) => t,
            Source::Cavity(c) => c.motion(),
        }
    }

    /// Default output cutoff: 12π/τ for a cavity, 4Ω for a single mirror.
    pub fn default_cutoff(&self) -> f64 {
        match self {
            Source::Cavity(c) => 12.0 * PI / c.tau(),
            Source::SingleMirror(t) => match t.period() {
                Some(p) => 4.0 * 2.0 * PI / p,
                None => 4.0,
            },
        }
    }
}

/// Detection side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    Right,
    Left,
}

impl Port {
    fn coordinate(self, x: f64) -> NullCoordinate {
        match self {
            Port::Right => NullCoordinate::right(x),
            Port::Left => NullCoordinate::left(x),
        }
    }
}

/// (input channel, amplitude, F_p jet) for every path reaching `x` at `port`.
fn paths_at(
    source: &Source,
    port: Port,
    x: f64,
    n_max: usize,
) -> Result<Vec<(InputChannel, f64, Jet)>> {
    match source {
        Source::SingleMirror(traj) => {
            let jet = bounce_time(traj, port.coordinate(x))?.jet;
            let ch = match port {
                Port::Right => InputChannel::RightVacuum,
                Port::Left => InputChannel::LeftVacuum,
            };
            Ok(vec![(ch, 1.0, jet)])
        }
        Source::Cavity(cav) => Ok(trace_paths(cav, port.coordinate(x), n_max)?
            .contributions
            .iter()
            .map(|p| (p.input_channel, p.amplitude, p.jet))
            .collect()),
    }
}

fn source_n_max(source: &Source) -> (usize, Vec<Warning>) {
    match source {
        Source::SingleMirror(_) => (0, Vec::new()),
        Source::Cavity(cav) => {
            let (n, w) = default_n_max(cav);
            let mut warnings = cav.warnings();
            warnings.extend(w);
            warnings.extend(truncation_warning(cav, n));
            (n, warnings)
        }
    }
}

/// Mode-normalized Bogoliubov coefficients between the output mode ω at
/// `port` and the input mode ω′ of `channel`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bogoliubov {
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// Windowed quadrature of
/// (1/2π)√(ω′/ω) Σ_p A_p ∫ w(u) e^{−iωu} e^{∓iω′F_p(u)} F_p′(u) du
/// over [u0, u0 + T). The window grid has `win.samples()` points.
pub fn bogoliubov_coefficients(
    source: &Source,
    port: Port,
    channel: InputChannel,
    omega: f64,
    omega_in: f64,
    u0: f64,
    win: &MeasurementWindow,
) -> Result<Bogoliubov> {
    if !(omega > 0.0 && omega_in > 0.0) {
        return Err(Error::param("omega", "frequencies must be positive"));
    }
    let s = win.samples();
    let du = win.duration() / s as f64;
    let nyquist = PI / du;
    if omega + omega_in > nyquist {
        return Err(Error::Aliasing {
            frequency: omega + omega_in,
            nyquist,
        });
    }
    let (n_max, _) = source_n_max(source);
    let parts = (0..s)
        .into_par_iter()
        .map(|i| {
            let u = u0 + i as f64 * du;
            let w = win.weight(i as f64 / s as f64) * du;
            let out = Complex64::from_polar(w, -omega * u);
            let mut a = Complex64::new(0.0, 0.0);
            let mut b = Complex64::new(0.0, 0.0);
            for (ch, amp, jet) in paths_at(source, port, u, n_max)? {
                if ch != channel {
                    continue;
                }
                let weight = amp * jet.d1;
                a += weight * Complex64::from_polar(1.0, omega_in * jet.value);
                b += weight * Complex64::from_polar(1.0, -omega_in * jet.value);
            }
            Ok((out * a, out * b))
        })
        .collect::<Result<Vec<_>>>()?;
    let pre = (omega_in / omega).sqrt() / (2.0 * PI);
    let (a, b) = parts
        .iter()
        .fold((Complex64::default(), Complex64::default()), |(x, y), (a, b)| (x + a, y + b));
    Ok(Bogoliubov {
        alpha: pre * a,
        beta: pre * b,
    })
}

/// β(ω, ω′) in counting normalization: √κ times the mode-normalized value,
/// so that Σ |β|²·Δω·Δω′ is the reported photon number.
pub fn bogoliubov_beta(
    source: &Source,
    port: Port,
    channel: InputChannel,
    omega: f64,
    omega_in: f64,
    u0: f64,
    win: &MeasurementWindow,
) -> Result<Complex64> {
    let c = bogoliubov_coefficients(source, port, channel, omega, omega_in, u0, win)?;
    Ok(c.beta * BETA_NORMALIZATION.sqrt())
}

/// Output and input frequency ranges plus the per-period sampling of the
/// line engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumGrid {
    /// Highest output frequency reported.
    pub cutoff: f64,
    /// Highest input frequency ω′ integrated over (defaults to `cutoff`).
    pub input_cutoff: Option<f64>,
    /// Samples per mechanical period, a power of two.
    pub samples_per_period: usize,
}

impl SpectrumGrid {
    pub fn for_source(source: &Source) -> Self {
        Self {
            cutoff: source.default_cutoff(),
            input_cutoff: None,
            samples_per_period: match source {
                Source::SingleMirror(_) => 256,
                Source::Cavity(_) => 1024,
            },
        }
    }

    fn input(&self) -> f64 {
        self.input_cutoff.unwrap_or(self.cutoff)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombLine {
    pub k: usize,
    /// kπ/τ
    pub omega: f64,
    pub photons: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// 0, Δω, 2Δω, … up to the cutoff, Δω = 2π/T.
    pub omega_grid: Vec<f64>,
    /// dN/dω summed over both output sides.
    pub density: Vec<f64>,
    pub density_right: Vec<f64>,
    pub density_left: Vec<f64>,
    pub comb_lines: Vec<CombLine>,
    pub total: f64,
    pub warnings: Vec<Warning>,
    pub n_max: usize,
    pub samples_per_period: usize,
}

impl SpectrumResult {
    pub fn strongest_line(&self) -> f64 {
        self.comb_lines.iter().map(|l| l.photons).fold(0.0, f64::max)
    }

    pub fn line(&self, k: usize) -> Option<&CombLine> {
        self.comb_lines.iter().find(|l| l.k == k)
    }

    /// Σ ω·N(ω) over the grid: radiated energy in units of ħ, counting
    /// normalization included.
    pub fn first_moment(&self) -> f64 {
        let x: Vec<f64> = self.omega_grid.iter().zip(&self.density).map(|(w, d)| w * d).collect();
        crate::radiation::trapezoid(&self.omega_grid, &x)
    }
}

/// Per-channel sampled paths over one period: ψ_p = F_p − u and A_p·F_p′,
/// stored path-major.
struct ChannelSamples {
    psi: Vec<f64>,
    weight: Vec<f64>,
    n_paths: usize,
}

fn sample_port(
    source: &Source,
    port: Port,
    us: &[f64],
    n_max: usize,
) -> Result<Vec<ChannelSamples>> {
    let m = us.len();
    let rows = us
        .par_iter()
        .map(|&u| paths_at(source, port, u, n_max))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for ch in [InputChannel::LeftVacuum, InputChannel::RightVacuum] {
        let idx: Vec<usize> = rows[0]
            .iter()
            .enumerate()
            .filter(|(_, p)| p.0 == ch)
            .map(|(k, _)| k)
            .collect();
        if idx.is_empty() {
            continue;
        }
        let n_paths = idx.len();
        let mut psi = vec![0.0; n_paths * m];
        let mut weight = vec![0.0; n_paths * m];
        for (i, row) in rows.iter().enumerate() {
            for (p, &k) in idx.iter().enumerate() {
                let (_, amp, jet) = row[k];
                psi[p * m + i] = jet.value - us[i];
                weight[p * m + i] = amp * jet.d1;
            }
        }
        out.push(ChannelSamples {
            psi,
            weight,
            n_paths,
        });
    }
    Ok(out)
}

/// h(u) samples for input frequencies (j0 .. j0 + nb)·Δω, via phase rotation
/// re-anchored at each block start.
fn h_block(ch: &ChannelSamples, m: usize, dw: f64, j0: usize, nb: usize) -> Vec<Vec<Complex64>> {
    let mut rows = vec![vec![Complex64::default(); m]; nb];
    for p in 0..ch.n_paths {
        let psi = &ch.psi[p * m..(p + 1) * m];
        let wt = &ch.weight[p * m..(p + 1) * m];
        for i in 0..m {
            let step = Complex64::from_polar(1.0, -dw * psi[i]);
            let mut z = Complex64::from_polar(wt[i], -(j0 as f64) * dw * psi[i]);
            for row in rows.iter_mut() {
                row[i] += z;
                z *= step;
            }
        }
    }
    rows
}

/// Line-engine spectrum of a periodically moving source, counted on both
/// output sides.
pub fn photon_spectrum(
    source: &Source,
    win: &MeasurementWindow,
    grid: &SpectrumGrid,
) -> Result<SpectrumResult> {
    let traj = source.trajectory();
    let period = traj
        .period()
        .ok_or_else(|| Error::param("motion", "the line engine needs periodic motion"))?;
    let periods = win.duration() / period;
    let k_per = periods.round();
    if k_per < 1.0 || (periods - k_per).abs() > 1e-9 * periods {
        return Err(Error::param(
            "T",
            format!("measurement time must be a whole number of periods, got {periods}"),
        ));
    }
    let k_per = k_per as usize;
    let m = grid.samples_per_period;
    if !m.is_power_of_two() || m < 8 {
        return Err(Error::param("samples_per_period", "must be a power of two >= 8"));
    }
    if !(grid.cutoff > 0.0 && grid.input() > 0.0) {
        return Err(Error::param("cutoff", "must be positive"));
    }
    let big_omega = 2.0 * PI / period;
    let nyquist = 0.5 * m as f64 * big_omega;
    let reach = grid.cutoff + grid.input();
    if NYQUIST_FACTOR * reach > nyquist {
        return Err(Error::Aliasing {
            frequency: NYQUIST_FACTOR * reach,
            nyquist,
        });
    }

    let dw = win.resolution();
    let n_bins = (grid.cutoff / dw + 1e-9).floor() as usize;
    let n_in = (grid.input() / dw + 1e-9).floor() as usize;
    let n_harm = ((reach / big_omega).ceil() as usize + 1).min(m / 2 - 1);
    let kernel = win.kernel();
    let (n_max, warnings) = source_n_max(source);
    let us: Vec<f64> = (0..m).map(|i| i as f64 * period / m as f64).collect();
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(m);

    let mut per_port = Vec::new();
    for port in [Port::Right, Port::Left] {
        let channels = sample_port(source, port, &us, n_max)?;
        let blocks: Vec<usize> = (1..=n_in).step_by(ROTATION_BLOCK).collect();
        let partial = blocks
            .par_iter()
            .map(|&j0| {
                let nb = ROTATION_BLOCK.min(n_in + 1 - j0);
                let mut counts = vec![0.0; n_bins + 1];
                let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
                for ch in &channels {
                    let mut rows = h_block(ch, m, dw, j0, nb);
                    for (r, row) in rows.iter_mut().enumerate() {
                        fft.process_with_scratch(row, &mut scratch);
                        let j = j0 + r;
                        let w_in = j as f64 * dw;
                        for n in 1..=n_harm {
                            let hn = row[n].norm_sqr() / (m * m) as f64;
                            let b = (n * k_per) as isize - j as isize;
                            for &(off, kv) in &kernel {
                                let bb = b + off;
                                if bb < 1 || bb as usize > n_bins {
                                    continue;
                                }
                                let w_out = bb as f64 * dw;
                                counts[bb as usize] += BETA_NORMALIZATION * (w_in / w_out) * hn * kv;
                            }
                        }
                    }
                }
                counts
            })
            .collect::<Vec<_>>();
        let mut counts = vec![0.0; n_bins + 1];
        for part in &partial {
            for (c, p) in counts.iter_mut().zip(part) {
                *c += p;
            }
        }
        per_port.push(counts);
    }

    let omega_grid: Vec<f64> = (0..=n_bins).map(|b| b as f64 * dw).collect();
    let density_right: Vec<f64> = per_port[0].iter().map(|c| c / dw).collect();
    let density_left: Vec<f64> = per_port[1].iter().map(|c| c / dw).collect();
    let density: Vec<f64> = density_right.iter().zip(&density_left).map(|(a, b)| a + b).collect();
    let total = crate::radiation::trapezoid(&omega_grid, &density);
    let comb_lines = match source {
        Source::Cavity(cav) => comb_lines(&omega_grid, &density, cav.tau(), win.duration()),
        Source::SingleMirror(_) => Vec::new(),
    };
    Ok(SpectrumResult {
        omega_grid,
        density,
        density_right,
        density_left,
        comb_lines,
        total,
        warnings,
        n_max,
        samples_per_period: m,
    })
}

/// Integrates the density over ±π/T around each kπ/τ below the cutoff. Bins
/// are Δω = 2π/T wide; a bin counts when its centre lies in the interval and
/// half when it sits exactly on the edge.
fn comb_lines(omega: &[f64], density: &[f64], tau: f64, duration: f64) -> Vec<CombLine> {
    let dw = 2.0 * PI / duration;
    let half = PI / duration;
    let top = *omega.last().unwrap_or(&0.0);
    let mut lines = Vec::new();
    let mut k = 1;
    loop {
        let wk = k as f64 * PI / tau;
        if wk > top + 1e-9 * dw {
            break;
        }
        let lo = ((wk - half) / dw).floor().max(0.0) as usize;
        let hi = (((wk + half) / dw).ceil() as usize).min(omega.len() - 1);
        let mut photons = 0.0;
        for b in lo..=hi {
            let dist = (omega[b] - wk).abs();
            let weight = if (dist - half).abs() <= 1e-9 * dw {
                0.5
            } else if dist < half {
                1.0
            } else {
                0.0
            };
            photons += weight * density[b] * dw;
        }
        lines.push(CombLine {
            k,
            omega: wk,
            photons,
        });
        k += 1;
    }
    lines
}

/// Total photon number, checked by doubling the per-period sampling.
pub fn total_photon_number(
    source: &Source,
    win: &MeasurementWindow,
    grid: &SpectrumGrid,
) -> Result<f64> {
    let coarse = photon_spectrum(source, win, grid)?;
    let fine = photon_spectrum(
        source,
        win,
        &SpectrumGrid {
            samples_per_period: 2 * grid.samples_per_period,
            ..*grid
        },
    )?;
    let scale = coarse.total.abs().max(fine.total.abs());
    let change = if scale > 0.0 {
        (fine.total - coarse.total).abs() / scale
    } else {
        0.0
    };
    if change > CONVERGENCE_TOLERANCE {
        return Err(Error::NonConverged {
            check: "samples-per-period doubling",
            relative_change: change,
            limit: CONVERGENCE_TOLERANCE,
        });
    }
    Ok(fine.total)
}

/// Ω³a²T/(3πc²)
pub fn single_mirror_reference(amplitude: f64, omega: f64, duration: f64, c: f64) -> f64 {
    omega.powi(3) * amplitude * amplitude * duration / (3.0 * PI * c * c)
}

/// 𝓕·(ΩT/3π)·(v/c)²
pub fn cavity_reference(finesse: f64, omega: f64, duration: f64, v_over_c: f64) -> f64 {
    finesse * omega * duration / (3.0 * PI) * v_over_c * v_over_c
}

/// Ratio of the reference count to the raw (unit-normalized) line-engine
/// count at Ω = 1, a = 10⁻³, T = 200 periods, rectangular window: the value
/// [`BETA_NORMALIZATION`] was pinned to.
pub fn calibrate_normalization() -> Result<f64> {
    let (a, w) = (1e-3, 1.0);
    let traj = Trajectory::natural(Motion::Sinusoid {
        q0: 0.0,
        amplitude: a,
        omega: w,
        phase: 0.0,
    })?;
    let source = Source::SingleMirror(traj);
    let win = MeasurementWindow::periods(2.0 * PI / w, 200, WindowShape::Rectangular, 1024)?;
    let n = photon_spectrum(&source, &win, &SpectrumGrid::for_source(&source))?.total;
    Ok(single_mirror_reference(a, w, win.duration(), 1.0) / (n / BETA_NORMALIZATION))
}
