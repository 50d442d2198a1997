//! The position-dependent coupling seen by an atom crossing a TEM20 mode,
//! for free fall and for uniform motion, and how to tune the peak rate so the
//! accumulated pulse area hits a target.
//!
//!     cargo run --release --example coupling_profile

use flyq::coupling::{CouplingProfile, ModeGeometry, Trajectory};
use std::f64::consts::FRAC_PI_2;

fn main() {
    let waist = 10e-6;
    let geometry = ModeGeometry::new(2, 0, waist).unwrap();
    let fall = Trajectory::free_fall(-4.0 * waist, 9.82).unwrap();
    let glide = Trajectory::uniform(-4.0 * waist, 0.001).unwrap();

    let falling = CouplingProfile::new(5.9e3, geometry, fall).unwrap();
    println!("free fall through a TEM20 mode, waist {} um:", waist * 1e6);
    println!("{:>12} {:>12} {:>14} {:>12}", "t [ms]", "x/waist", "omega [rad/s]", "mu(t)");
    let t_end = falling.exit_time();
    for k in 0..=12 {
        let t = t_end * k as f64 / 12.0;
        println!(
            "{:>12.4} {:>12.3} {:>14.2} {:>12.6}",
            t * 1e3,
            falling.trajectory().position(t) / waist,
            falling.omega(t),
            falling.pulse_area(t)
        );
    }
    println!(
        "final pulse area {:.6} ({:.4} pi), transit {:.3} ms, peak rate {:.1} rad/s",
        falling.final_pulse_area(),
        falling.final_pulse_area() / std::f64::consts::PI,
        t_end * 1e3,
        falling.peak_omega()
    );

    let gliding = CouplingProfile::new(365.0, geometry, glide).unwrap();
    println!(
        "\nuniform motion at 1 mm/s with omega0 = 365 rad/s: final area {:.6} ({:.4} pi) over {:.1} ms",
        gliding.final_pulse_area(),
        gliding.final_pulse_area() / std::f64::consts::PI,
        gliding.exit_time() * 1e3
    );

    // pick the peak rate so the atoms leave after exactly a quarter flop
    let tuned = CouplingProfile::with_final_pulse_area(geometry, fall, FRAC_PI_2).unwrap();
    println!(
        "\npeak rate for a pi/2 transit in free fall: omega0 = {:.2} rad/s",
        tuned.omega0()
    );
}
