//! Cavity transfer function from the explicit multiple-scattering sum and from
//! its geometric resummation.

use std::f64::consts::PI;

use radiance::raymap::{mobius_resum, n_max_for_transfer, path_sum_transfer};
use radiance::{CavityConfig, Mirror, Trajectory, UnitSystem};

fn main() -> radiance::Result<()> {
    let m = Mirror::for_finesse(10.0)?;
    let cav = CavityConfig::new(m, m, 1.0, Trajectory::stationary(), UnitSystem::natural())?;
    let n = n_max_for_transfer(&cav, 1e-10);
    println!("{n} round trips");
    println!("{:>8} {:>12} {:>12} {:>10}", "w tau/pi", "|H| sum", "|H| resum", "diff");
    for i in 0..=16 {
        let w = 0.05 + i as f64 * PI / 8.0;
        let a = path_sum_transfer(&cav, &[0.0], w, n)?.values[0];
        let b = mobius_resum(&cav, &[0.0], w)?.values[0];
        println!("{:8.3} {:12.6} {:12.6} {:10.2e}", w * cav.tau() / PI, a.norm(), b.norm(), (a - b).norm());
    }
    Ok(())
}
