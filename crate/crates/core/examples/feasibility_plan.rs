//! Orders of magnitude for a superconducting microwave cavity.

use std::f64::consts::PI;

use radiance::{plan, PlanInputs, UnitSystem};

fn main() -> radiance::Result<()> {
    let p = plan(
        &PlanInputs {
            finesse: 1e9,
            mech_frequency: 2.0 * PI * 5e9,
            optical_frequency: None,
            peak_velocity: 0.3,
            temperature: 0.01,
            resonance_asserted: true,
        },
        &UnitSystem::si(),
    )?;
    println!("eta                 {:.3}", p.eta);
    println!("amplitude           {:.3e} m", p.amplitude);
    println!("acceleration        {:.3e} m/s^2", p.acceleration);
    println!("photon rate         {:.2} 1/s", p.photon_rate);
    println!("thermal occupation  {:.2e} (vacuum ok: {})", p.thermal_occupation, p.vacuum_ok);
    Ok(())
}
