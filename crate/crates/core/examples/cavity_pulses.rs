//! Energy density leaving a resonantly oscillating cavity: pulses sharpen and
//! grow with the multiple-scattering parameter η = 𝓕v/c.

use radiance::{energy_density_cavity, CavityConfig, UnitSystem};

fn main() -> radiance::Result<()> {
    for eta in [0.3, 0.6, 0.9] {
        let cav = CavityConfig::resonant(30.0, eta, 3, 1.0, UnitSystem::natural())?;
        let period = cav.motion().period().expect("sinusoid");
        let us: Vec<f64> = (0..200).map(|i| i as f64 * period / 200.0).collect();
        print!("eta = {eta}: ");
        match energy_density_cavity(&cav, &us, None, 1e-4) {
            Ok(e) => {
                let peak = e.right.iter().cloned().fold(f64::MIN, f64::max);
                let width = e.right.iter().filter(|x| **x > 0.5 * peak).count();
                println!("peak {peak:.4e}, {width}/200 samples above half maximum");
            }
            // above the parametric threshold the multiple-scattering series diverges
            Err(err) => println!("{err} (threshold eta = {:.3})", cav.parametric_threshold()),
        }
    }
    Ok(())
}
