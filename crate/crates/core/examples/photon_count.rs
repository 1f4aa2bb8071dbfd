//! Photons radiated by an oscillating mirror over a finite time, against the
//! closed form Ω³a²T/(3πc²).

use std::f64::consts::PI;

use radiance::spectrum::single_mirror_reference;
use radiance::{total_photon_number, MeasurementWindow, Motion, Source, SpectrumGrid, Trajectory, WindowShape};

fn main() -> radiance::Result<()> {
    for (a, omega) in [(1e-3, 1.0), (2e-3, 1.0), (1e-3, 2.0)] {
        let src = Source::SingleMirror(Trajectory::natural(Motion::Sinusoid { q0: 0.0, amplitude: a, omega, phase: 0.0 })?);
        let win = MeasurementWindow::periods(2.0 * PI / omega, 200, WindowShape::Rectangular, 1024)?;
        let n = total_photon_number(&src, &win, &SpectrumGrid::for_source(&src))?;
        let reference = single_mirror_reference(a, omega, win.duration(), 1.0);
        println!("a = {a:e}, Omega = {omega}: N = {n:.6e}, closed form {reference:.6e}, ratio {:.4}", n / reference);
    }
    Ok(())
}
