//! Energy flux radiated by an oscillating perfect mirror, compared with the
//! jerk law for small velocities.

use std::f64::consts::PI;

use radiance::{flux_single_mirror, Motion, Trajectory};

fn main() -> radiance::Result<()> {
    let (a, omega) = (1e-3, 1.0);
    let mirror = Trajectory::natural(Motion::Sinusoid { q0: 0.0, amplitude: a, omega, phase: 0.0 })?;
    let us: Vec<f64> = (0..16).map(|i| i as f64 * 2.0 * PI / 16.0).collect();
    let flux = flux_single_mirror(&mirror, &us, 1.0)?;

    println!("{:>8} {:>14} {:>14} {:>14}", "u", "flux right", "flux left", "-q'''/12pi");
    for (i, &u) in us.iter().enumerate() {
        let jerk = mirror.kinematics(u).jerk;
        println!("{u:8.4} {:14.6e} {:14.6e} {:14.6e}", flux.right[i], flux.left[i], -jerk / (12.0 * PI));
    }

    // hyperbolic motion radiates nothing at all
    let hyper = Trajectory::natural(Motion::UniformAcceleration { proper_acceleration: 0.5, t0: 0.0, x0: 0.0 })?;
    let f = flux_single_mirror(&hyper, &[-1.0, 0.0, 1.0], 1.0)?;
    println!("uniform acceleration: max |flux| = {:e}", f.total.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    Ok(())
}
