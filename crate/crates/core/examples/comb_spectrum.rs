//! Photon spectrum of a cavity oscillating five times per round trip:
//! emission sits on the cavity resonances kπ/τ.

use std::f64::consts::PI;

use radiance::{photon_spectrum, CavityConfig, MeasurementWindow, Source, SpectrumGrid, UnitSystem, WindowShape};

fn main() -> radiance::Result<()> {
    let eta = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let cav = CavityConfig::resonant(30.0, eta, 5, 1.0, UnitSystem::natural())?;
    let (period, tau) = (cav.motion().period().expect("sinusoid"), cav.tau());
    let src = Source::Cavity(cav);
    let win = MeasurementWindow::periods(period, 100, WindowShape::Tapered(0.1), 1024)?;
    let grid = SpectrumGrid { cutoff: 16.0 * PI / tau, ..SpectrumGrid::for_source(&src) };
    let s = photon_spectrum(&src, &win, &grid)?;
    for w in &s.warnings {
        println!("warning: {w:?}");
    }
    let strongest = s.strongest_line();
    println!("eta = {eta}, total photons {:.4e}", s.total);
    for line in &s.comb_lines {
        println!("k = {:2}  omega = {:7.3}  N = {:.4e}  ({:.2e} of strongest)", line.k, line.omega, line.photons, line.photons / strongest);
    }
    Ok(())
}
