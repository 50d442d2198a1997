//! Lossless entanglement transfer from a shared single photon to two flying
//! qubits, against the closed form, plus the reason multiphoton driving
//! cannot work.
//!
//!     cargo run --release --example noon_transfer

use flyq::coupling::{CouplingProfile, ModeGeometry, Trajectory};
use flyq::measures::negativity;
use flyq::resources::{CavityLoad, DrivingResource};
use flyq::unitary::{evolve_protocol, evolve_protocol_at_pulse_areas, noon1_closed_form};

fn main() {
    let waist = 10e-6;
    let geometry = ModeGeometry::new(2, 0, waist).unwrap();
    let fall = Trajectory::free_fall(-4.0 * waist, 9.82).unwrap();
    let profile = CouplingProfile::new(5.9e3, geometry, fall).unwrap();

    let resource = DrivingResource::noon(1);
    let load = CavityLoad::new(0.9).unwrap();

    println!("single photon shared between two cavities, T = 0.9, free fall:");
    println!("{:>10} {:>12} {:>12} {:>12}", "t [ms]", "mu(t)", "negativity", "closed form");
    let t_end = profile.exit_time();
    for k in 0..=10 {
        let t = t_end * k as f64 / 10.0;
        let rho = evolve_protocol(&resource, load, &[profile, profile], t).unwrap();
        let mu = profile.pulse_area(t);
        let closed = negativity(&noon1_closed_form(0.9, mu).unwrap()).unwrap();
        println!(
            "{:>10.3} {:>12.6} {:>12.8} {:>12.8}",
            t * 1e3,
            mu,
            negativity(&rho).unwrap(),
            closed
        );
    }
    let best = negativity(&noon1_closed_form(0.9, std::f64::consts::FRAC_PI_2).unwrap()).unwrap();
    println!("best possible at T = 0.9 (quarter-flop area): {best:.8}");

    println!("\nmultiphoton driving transfers nothing:");
    for n in [2u32, 3] {
        let resource = DrivingResource::noon(n);
        let mut worst = 0.0f64;
        for k in 0..40 {
            let mu = 2.0 * std::f64::consts::PI * k as f64 / 39.0;
            let rho = evolve_protocol_at_pulse_areas(&resource, load, mu, mu).unwrap();
            worst = worst.max(negativity(&rho).unwrap());
        }
        println!("  N = {n}: largest negativity over 40 pulse areas = {worst}");
    }
}
