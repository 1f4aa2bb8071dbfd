use std::f64::consts::PI;

use proptest::prelude::*;

use radiance::cavity::SignConvention;
use radiance::radiation::trapezoid;
use radiance::spectrum::{bogoliubov_coefficients, single_mirror_reference, Port, BETA_NORMALIZATION};
use radiance::*;

fn sinusoid(a: f64, w: f64) -> Trajectory {
    Trajectory::natural(Motion::Sinusoid { q0: 0.0, amplitude: a, omega: w, phase: 0.0 }).unwrap()
}

fn cavity(finesse: f64, eta: f64, order: u32) -> CavityConfig {
    CavityConfig::resonant(finesse, eta, order, 1.0, UnitSystem::natural()).unwrap()
}

fn period_grid(p: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 * p / n as f64).collect()
}

fn count(src: &Source, periods: usize, shape: WindowShape) -> f64 {
    let p = match src {
        Source::SingleMirror(t) => t.period().unwrap(),
        Source::Cavity(c) => c.motion().period().unwrap(),
    };
    let win = MeasurementWindow::periods(p, periods, shape, 1024).unwrap();
    photon_spectrum(src, &win, &SpectrumGrid::for_source(src)).unwrap().total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn paths_never_cross(finesse in 3.0..20.0f64, eta in 0.0..0.7f64, u in 0.0..2.0f64, du in 1e-4..0.3f64) {
        let cav = cavity(finesse, eta, 3);
        let n = 2 * finesse as usize;
        let a = trace_paths(&cav, NullCoordinate::right(u), n).unwrap();
        let b = trace_paths(&cav, NullCoordinate::right(u + du), n).unwrap();
        for (p, q) in a.contributions.iter().zip(&b.contributions) {
            prop_assert_eq!(p.n_bounces, q.n_bounces);
            prop_assert!(p.jet.value < q.jet.value);
        }
    }

    #[test]
    fn jet_derivative_matches_finite_difference(finesse in 3.0..15.0f64, eta in 0.0..0.6f64, u in 0.0..2.0f64) {
        let cav = cavity(finesse, eta, 3);
        let n = finesse as usize;
        let h = 1e-5;
        let c = trace_paths(&cav, NullCoordinate::right(u), n).unwrap();
        let lo = trace_paths(&cav, NullCoordinate::right(u - h), n).unwrap();
        let hi = trace_paths(&cav, NullCoordinate::right(u + h), n).unwrap();
        for k in 0..c.contributions.len() {
            let fd = (hi.contributions[k].jet.value - lo.contributions[k].jet.value) / (2.0 * h);
            let d1 = c.contributions[k].derivative();
            prop_assert!((fd - d1).abs() <= 1e-6 * d1.abs(), "{} vs {}", fd, d1);
        }
    }

    #[test]
    fn finesse_grows_with_reflectance(r1 in 0.01..0.98f64, r2 in 0.01..0.98f64, bump in 1e-4..0.01f64) {
        prop_assert!(finesse_of(r1, r2).unwrap() < finesse_of(r1 + bump, r2).unwrap());
    }

    #[test]
    fn convention_phases_leave_energy_unchanged(eta in 0.05..0.6f64, outer in prop::bool::ANY, trans in prop::bool::ANY) {
        let cav = cavity(10.0, eta, 3);
        let flipped = cav.clone().with_convention(SignConvention {
            outer_sign: if outer { -1.0 } else { 1.0 },
            transmission_sign: if trans { -1.0 } else { 1.0 },
        });
        let us = period_grid(cav.motion().period().unwrap(), 24);
        let a = energy_density_cavity(&cav, &us, None, 1e-4).unwrap();
        let b = energy_density_cavity(&flipped, &us, None, 1e-4).unwrap();
        let scale = a.total.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (x, y) in a.total.iter().zip(&b.total) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
    }
}

#[test]
fn deep_paths_cluster_on_the_periodic_orbit() {
    // circular spread of F_n(u) modulo the mechanical period, over rays spread
    // across one period, for the left-input path with n round trips
    let cav = cavity(30.0, 0.6, 3);
    let p = cav.motion().period().unwrap();
    let us: Vec<f64> = (0..64).map(|i| i as f64 * p / 64.0).collect();
    let n_max = 30;
    let sets: Vec<PathSet> =
        us.iter().map(|&u| trace_paths(&cav, NullCoordinate::right(u), n_max).unwrap()).collect();
    let mut spread = Vec::new();
    for n in 0..=n_max {
        let (mut s, mut c) = (0.0, 0.0);
        for set in &sets {
            let path = set
                .channel(InputChannel::LeftVacuum)
                .find(|q| q.round_trips == n)
                .expect("one left-input path per round-trip count");
            let phase = 2.0 * PI * path.jet.value / p;
            s += phase.sin();
            c += phase.cos();
        }
        let r = (s * s + c * c).sqrt() / us.len() as f64;
        spread.push((-2.0 * r.ln()).sqrt());
    }
    for w in spread.windows(2) {
        assert!(w[1] < w[0], "{spread:?}");
    }
    assert!(spread[n_max] < 0.1 * spread[0], "{spread:?}");
}

#[test]
fn emitted_energy_is_positive_on_average() {
    let tr = sinusoid(0.05, 2.0);
    let us = period_grid(PI, 400);
    let f = flux_single_mirror(&tr, &us, 1.0).unwrap();
    assert!(f.total.iter().any(|x| *x < 0.0));
    assert!(trapezoid(&us, &f.total) > 0.0);

    let cav = cavity(30.0, 0.3, 3);
    let us = period_grid(cav.motion().period().unwrap(), 400);
    let e = energy_density_cavity(&cav, &us, None, 1e-4).unwrap();
    assert!(trapezoid(&us, &e.total) > 0.0);
}

#[test]
fn spectrum_energy_matches_flux_energy() {
    for (finesse, eta) in [(10.0, 0.05), (10.0, 0.02)] {
        let cav = cavity(finesse, eta, 3);
        let p = cav.motion().period().unwrap();
        let us = period_grid(p, 400);
        let e = energy_density_cavity(&cav, &us, None, 1e-4).unwrap();
        let energy = trapezoid(&us, &e.total);
        let src = Source::Cavity(cav);
        let win = MeasurementWindow::periods(p, 200, WindowShape::Rectangular, 1024).unwrap();
        let s = photon_spectrum(&src, &win, &SpectrumGrid::for_source(&src)).unwrap();
        let moment = s.first_moment() / 200.0 / BETA_NORMALIZATION;
        assert!((moment / energy - 1.0).abs() < 0.05, "{moment} vs {energy}");
        // pairs share ħΩ, so ħΩ per pair times the physical pair rate
        let pairs = s.total / BETA_NORMALIZATION / 2.0 / 200.0;
        assert!((2.0 * PI / p * pairs / energy - 1.0).abs() < 0.05);
    }
}

#[test]
fn photon_number_scales_as_amplitude_squared() {
    let amps = [1e-4, 2e-4, 4e-4];
    let ns: Vec<f64> = amps
        .iter()
        .map(|&a| count(&Source::SingleMirror(sinusoid(a, 1.0)), 50, WindowShape::Rectangular))
        .collect();
    // least-squares slope in log–log
    let xs: Vec<f64> = amps.iter().map(|a| a.ln()).collect();
    let ys: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope - 2.0).abs() < 0.04, "{slope}");
}

#[test]
fn doubling_the_window_doubles_the_count() {
    let src = Source::SingleMirror(sinusoid(1e-3, 1.0));
    for shape in [WindowShape::Rectangular, WindowShape::Tapered(0.1)] {
        let ratio = count(&src, 80, shape) / count(&src, 40, shape);
        assert!((ratio - 2.0).abs() < 0.06, "{ratio}");
    }
    // linear growth only once T exceeds the cavity storage time
    let cav = Source::Cavity(cavity(10.0, 0.05, 3));
    let ratio = count(&cav, 160, WindowShape::Tapered(0.1)) / count(&cav, 80, WindowShape::Tapered(0.1));
    assert!((ratio - 2.0).abs() < 0.06, "{ratio}");
}

#[test]
fn detuned_cavity_loses_its_enhancement() {
    // Ω = 2π/τ sits between the odd resonances, many linewidths from each
    let (finesse, beta) = (30.0, 1e-3);
    let cav = CavityConfig::driven(finesse, finesse * beta, 2.0 * PI, 1.0, UnitSystem::natural()).unwrap();
    let p = cav.motion().period().unwrap();
    let n_cav = count(&Source::Cavity(cav), 100, WindowShape::Rectangular);
    let single = single_mirror_reference(beta / (2.0 * PI), 2.0 * PI, 100.0 * p, 1.0);
    assert!(n_cav < 2.0 * single, "{n_cav} vs {single}");
}

#[test]
fn perturbative_beta_lives_on_the_energy_shell() {
    let w = 1.0;
    // a windowed detector sees β ≈ Ŵ(ω+ω′) even for a resting mirror; only the
    // motion-induced part is expected on shell
    let src = Source::SingleMirror(sinusoid(1e-3, w));
    let rest = Source::SingleMirror(Trajectory::stationary());
    let win = MeasurementWindow::periods(2.0 * PI / w, 16, WindowShape::Tapered(0.5), 512).unwrap();
    let dw = win.resolution();
    let (mut on, mut off) = (0.0, 0.0);
    for i in 1..48 {
        for j in 1..48 {
            let (x, y) = (i as f64 * dw / 2.0, j as f64 * dw / 2.0);
            let beta = |s: &Source| {
                bogoliubov_coefficients(s, Port::Right, InputChannel::RightVacuum, x, y, 0.0, &win).unwrap().beta
            };
            let b = (beta(&src) - beta(&rest)).norm_sqr();
            if (x + y - w).abs() <= 3.0 * dw {
                on += b;
            } else {
                off += b;
            }
        }
    }
    assert!(off < 0.01 * on, "off-shell {off:e}, on-shell {on:e}");
}

#[test]
fn bogoliubov_sum_rule() {
    // ∫dω′ (|α|² − |β|²) = (1/2π)∫w² du for every output mode
    let src = Source::SingleMirror(sinusoid(0.05, 1.0));
    let win = MeasurementWindow::periods(2.0 * PI, 20, WindowShape::Tapered(0.5), 1024).unwrap();
    let s = win.samples();
    let norm = (0..s).map(|i| win.weight(i as f64 / s as f64).powi(2)).sum::<f64>() * win.duration()
        / s as f64
        / (2.0 * PI);
    let dw = win.resolution() / 4.0;
    for omega in [2.0, 3.5] {
        let grid: Vec<f64> = (1..1000).map(|j| j as f64 * dw).collect();
        let vals: Vec<f64> = grid
            .iter()
            .map(|&y| {
                let c = bogoliubov_coefficients(&src, Port::Right, InputChannel::RightVacuum, omega, y, 0.0, &win)
                    .unwrap();
                c.alpha.norm_sqr() - c.beta.norm_sqr()
            })
            .collect();
        let total = trapezoid(&grid, &vals);
        assert!((total / norm - 1.0).abs() < 0.02, "{total} vs {norm}");
    }
}

#[test]
fn momentum_flux_reproduces_the_jerk_force() {
    let tr = sinusoid(1e-3, 1.0);
    let units = UnitSystem::natural();
    let us = period_grid(4.0 * PI, 400);
    let push = flux_single_mirror(&tr, &us, 1.0).unwrap().momentum_transfer(1.0);
    let force = dissipative_force_time(&tr, 0.0, &units, &us).unwrap().force;
    let d: f64 = push.iter().zip(&force).map(|(a, b)| (a - b).powi(2)).sum();
    let r: f64 = force.iter().map(|b| b * b).sum();
    assert!((d / r).sqrt() < 0.01);
}

#[test]
fn susceptibility_is_continuous_at_zero_temperature() {
    let units = UnitSystem::natural();
    for w in [0.5, 2.0] {
        let cold = susceptibility(w, 0.0, &units);
        let warm = susceptibility(w, 1e-8, &units);
        assert!((cold - warm).norm() < 1e-15);
    }
}

#[test]
fn planner_eta_is_the_cavity_eta() {
    let si = UnitSystem::si();
    let p = plan(
        &PlanInputs {
            finesse: 123.0,
            mech_frequency: 1e9,
            optical_frequency: None,
            peak_velocity: 0.7,
            temperature: 0.0,
            resonance_asserted: true,
        },
        &si,
    )
    .unwrap();
    assert_eq!(p.eta.to_bits(), eta(123.0, 0.7, &si).to_bits());
}

#[test]
fn planner_rate_exponents() {
    let si = UnitSystem::si();
    let base = PlanInputs {
        finesse: 1e6,
        mech_frequency: 1e10,
        optical_frequency: None,
        peak_velocity: 0.1,
        temperature: 0.0,
        resonance_asserted: true,
    };
    let rate = |f: f64, v: f64| plan(&PlanInputs { finesse: f, peak_velocity: v, ..base }, &si).unwrap().photon_rate;
    let ef = (rate(4e6, 0.1) / rate(1e6, 0.1)).ln() / 4f64.ln();
    let ev = (rate(1e6, 0.4) / rate(1e6, 0.1)).ln() / 4f64.ln();
    assert!((ef - 1.0).abs() < 1e-6 && (ev - 2.0).abs() < 1e-6);
}
