//! Cavity photon loss during the transit, unraveled as quantum-jump
//! trajectories: the transferred entanglement survives moderate damping and
//! recovers as the cavities improve.
//!
//!     cargo run --release --example dissipative_ensemble

use flyq::coupling::{CouplingProfile, ModeGeometry, Trajectory};
use flyq::measures::negativity;
use flyq::resources::{CavityLoad, DrivingResource};
use flyq::trajectories::{run_ensemble, JumpConfig};
use flyq::unitary::noon1_closed_form;
use std::f64::consts::FRAC_PI_2;

fn main() {
    let waist = 10e-6;
    let geometry = ModeGeometry::new(2, 0, waist).unwrap();
    let fall = Trajectory::free_fall(-4.0 * waist, 9.82).unwrap();
    // tune the peak rate for a quarter flop over the transit
    let profile = CouplingProfile::with_final_pulse_area(geometry, fall, FRAC_PI_2).unwrap();
    let resource = DrivingResource::noon(1);
    let load = CavityLoad::new(0.9).unwrap();
    let t_end = profile.exit_time();
    let peak = profile.peak_omega();

    let lossless = negativity(&noon1_closed_form(0.9, FRAC_PI_2).unwrap()).unwrap();
    println!("lossless final negativity: {lossless:.5}");
    println!("peak coupling rate along the transit: {peak:.1} rad/s");
    println!(
        "\n{:>14} {:>12} {:>12} {:>10}",
        "peak/gamma", "negativity", "stderr", "jumps/traj"
    );
    for ratio in [25.0, 50.0, 100.0, 200.0] {
        let config = JumpConfig {
            gamma: peak / ratio,
            n_traj: 500,
            master_seed: 11,
            tol: 1e-8,
            sample_times: vec![t_end],
        };
        let estimate = run_ensemble(&resource, load, &[profile, profile], &config).unwrap();
        println!(
            "{:>14.0} {:>12.5} {:>12.5} {:>10.3}",
            ratio, estimate.negativity[0], estimate.negativity_stderr[0], estimate.mean_jump_count
        );
    }
    println!("\n(500 trajectories per point; negativity is that of the ensemble-mean state)");
}
