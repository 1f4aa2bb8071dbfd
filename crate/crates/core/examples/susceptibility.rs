//! Motional force susceptibility at zero and finite field temperature.

use radiance::force::Susceptibility;
use radiance::{theta_from_temperature, UnitSystem};

fn main() {
    let units = UnitSystem::natural();
    let theta = 3.0;
    println!("{:>6} {:>14} {:>14} {:>14}", "omega", "Im chi (T=0)", "thermal", "vacuum");
    for w in [0.5, 1.0, 2.0, 3.0, 5.0] {
        let cold = Susceptibility::evaluate(w, 0.0, &units);
        let warm = Susceptibility::evaluate(w, theta, &units);
        println!("{w:6.2} {:14.6e} {:14.6e} {:14.6e}", cold.value.im, warm.thermal_part(&units).im, warm.vacuum_part(&units).im);
    }
    let si = UnitSystem::si();
    println!("theta at 10 mK = {:.3e} 1/s", theta_from_temperature(0.01, &si));
}
