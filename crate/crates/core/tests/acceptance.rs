use std::f64::consts::PI;
use std::io::Write;

use radiance::crosscheck::{run_suite, CheckRow, Suite};
use radiance::*;

// written past the libtest capture so every criterion reports, pass or fail
fn report(n: u32, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "\ncriterion {n}: {tag}  {detail}");
    assert!(pass, "criterion {n}: {detail}");
}

fn rows(suite: Suite, pick: impl Fn(&CheckRow) -> bool) -> Vec<CheckRow> {
    run_suite(suite).unwrap().rows.into_iter().filter(|r| pick(r)).collect()
}

fn report_rows(n: u32, rows: &[CheckRow]) {
    assert!(!rows.is_empty());
    let detail: Vec<String> = rows.iter().map(|r| format!("{} = {:.3e} ({})", r.name, r.measured, r.expected)).collect();
    report(n, rows.iter().all(|r| r.pass), &detail.join("; "));
}

#[test]
fn criterion_1_null_result_limits() {
    report_rows(1, &rows(Suite::AnalyticLimits, |r| r.name.starts_with("uniform")));
}

#[test]
fn criterion_2_momentum_flux_matches_jerk() {
    report_rows(2, &rows(Suite::AnalyticLimits, |r| r.name.contains("jerk")));
}

#[test]
fn criterion_3_susceptibility_matches_fft() {
    report_rows(3, &rows(Suite::AnalyticLimits, |r| r.name.starts_with("susceptibility")));
}

#[test]
fn criterion_4_single_mirror_photon_count() {
    report_rows(4, &rows(Suite::PhotonCountCalibration, |_| true));
}

fn windowed_count(src: &Source, periods: usize) -> f64 {
    let p = src.trajectory().period().unwrap();
    let win = MeasurementWindow::periods(p, periods, WindowShape::Rectangular, 1024).unwrap();
    let grid = SpectrumGrid { samples_per_period: 256, ..SpectrumGrid::for_source(src) };
    photon_spectrum(src, &win, &grid).unwrap().total
}

#[test]
fn criterion_5_resonant_enhancement_and_detuning() {
    let units = UnitSystem::natural();
    let eta = 1e-3;
    let periods = 600;
    let mut pass = true;
    let mut detail = Vec::new();
    for finesse in [10.0, 30.0, 100.0] {
        let omega = 3.0 * PI;
        let v = eta / finesse;
        let mirror = Trajectory::natural(Motion::Sinusoid { q0: 0.0, amplitude: v / omega, omega, phase: 0.0 }).unwrap();
        let single = windowed_count(&Source::SingleMirror(mirror), periods);
        let on = windowed_count(&Source::Cavity(CavityConfig::driven(finesse, eta, omega, 1.0, units).unwrap()), periods);
        let detuned_omega = omega + 5.0 / finesse;
        let off = windowed_count(
            &Source::Cavity(CavityConfig::driven(finesse, eta, detuned_omega, 1.0, units).unwrap()),
            periods,
        );
        let ratio = on / single;
        let drop = on / off;
        pass &= (0.8 * finesse..=1.2 * finesse).contains(&ratio) && drop >= 5.0;
        detail.push(format!("F = {finesse}: N/N_single = {ratio:.2} (want {:.0}..{:.0}), detuning drop {drop:.2}x (want >= 5)", 0.8 * finesse, 1.2 * finesse));
    }
    report(5, pass, &detail.join("; "));
}

#[test]
fn criterion_6_comb_selection_rules() {
    report_rows(6, &rows(Suite::CombSelection, |_| true));
}

struct Pulse {
    peak: f64,
    fwhm: f64,
    spacings: Vec<f64>,
}

fn pulse_shape(us: &[f64], e: &[f64]) -> Pulse {
    let peak = e.iter().cloned().fold(f64::MIN, f64::max);
    let n = e.len();
    // the main pulse of each period; weakly sharpened trains also carry a
    // secondary hump half a period later
    let maxima: Vec<usize> = (1..n - 1)
        .filter(|&i| e[i] >= e[i - 1] && e[i] > e[i + 1] && e[i] > 0.95 * peak)
        .collect();
    let spacings = maxima.windows(2).map(|w| us[w[1]] - us[w[0]]).collect();
    // width of the first full pulse above half maximum, interpolated at both edges
    let i = maxima[0];
    let half = 0.5 * e[i];
    let (mut lo, mut hi) = (i, i);
    while lo > 0 && e[lo - 1] > half {
        lo -= 1;
    }
    while hi + 1 < n && e[hi + 1] > half {
        hi += 1;
    }
    let cross = |a: usize, b: usize| us[a] + (half - e[a]) / (e[b] - e[a]) * (us[b] - us[a]);
    let left = if lo > 0 { cross(lo - 1, lo) } else { us[0] };
    let right = if hi + 1 < n { cross(hi, hi + 1) } else { us[n - 1] };
    Pulse { peak, fwhm: right - left, spacings }
}

#[test]
fn criterion_7_pulse_sharpening() {
    let units = UnitSystem::natural();
    let us: Vec<f64> = (0..600).map(|i| -0.25 + 2.0 * i as f64 / 600.0).collect();
    let step = us[1] - us[0];
    let mut shapes = Vec::new();
    let mut detail = Vec::new();
    let mut pass = true;
    for eta in [0.3, 0.6, 0.9] {
        let cav = CavityConfig::resonant(30.0, eta, 3, 1.0, units).unwrap();
        let period = cav.motion().period().unwrap();
        match energy_density_cavity(&cav, &us, None, 1e-4) {
            Ok(f) => {
                // one output side carries one pulse per period
                let p = pulse_shape(&us, &f.right);
                let on_period = !p.spacings.is_empty() && p.spacings.iter().all(|s| (s - period).abs() <= step);
                pass &= on_period;
                detail.push(format!(
                    "eta = {eta}: peak {:.4e}, FWHM {:.4}, spacings {:.4?} (period {period:.4})",
                    p.peak, p.fwhm, p.spacings
                ));
                shapes.push(p);
            }
            Err(e) => {
                pass = false;
                detail.push(format!("eta = {eta}: {e}"));
            }
        }
    }
    let monotone = shapes.len() == 3
        && shapes.windows(2).all(|w| w[1].peak > w[0].peak && w[1].fwhm < w[0].fwhm);
    pass &= monotone;
    report(7, pass, &detail.join("; "));
}

#[test]
fn criterion_8_engine_agreement() {
    report_rows(8, &rows(Suite::EngineAgreement, |_| true));
}

#[test]
fn criterion_9_feasibility_plan() {
    let si = UnitSystem::si();
    let p = plan(
        &PlanInputs {
            finesse: 1e9,
            mech_frequency: 2.0 * PI * 5e9,
            optical_frequency: None,
            peak_velocity: 0.3,
            temperature: 0.01,
            resonance_asserted: true,
        },
        &si,
    )
    .unwrap();
    let pass = (0.5..=2.0).contains(&p.eta)
        && (0.5e-11..=2e-11).contains(&p.amplitude)
        && (0.5e10..=2e10).contains(&p.acceleration)
        && (1.0..=30.0).contains(&p.photon_rate)
        && p.thermal_occupation < 1e-9;
    report(
        9,
        pass,
        &format!(
            "eta {:.4}, amplitude {:.3e} m, acceleration {:.3e} m/s^2, rate {:.3} /s, occupation {:.3e}",
            p.eta, p.amplitude, p.acceleration, p.photon_rate, p.thermal_occupation
        ),
    );
}
