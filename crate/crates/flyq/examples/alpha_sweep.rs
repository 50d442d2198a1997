//! Where the entangled-coherent resource works best: sweep the amplitude with
//! the pulse area optimized at every point.
//!
//!     cargo run --release --example alpha_sweep

use flyq::measures::negativity;
use flyq::unitary::{ecs_closed_form, ecs_series_cutoff};
use std::f64::consts::PI;

fn main() {
    println!("{:>8} {:>12} {:>10}", "alpha", "negativity", "mu*");
    let mut best = (0.0, f64::MIN, 0.0);
    for k in 4..=40 {
        let alpha = 0.05 * k as f64;
        let cutoff = ecs_series_cutoff(alpha);
        let mut best_mu = (0.0, f64::MIN);
        for j in 0..=300 {
            let mu = 3.0 * PI * j as f64 / 300.0;
            let neg = negativity(&ecs_closed_form(alpha, 0.9, mu, cutoff).unwrap()).unwrap();
            if neg > best_mu.1 {
                best_mu = (mu, neg);
            }
        }
        if k % 2 == 0 {
            println!("{:>8.2} {:>12.6} {:>10.4}", alpha, best_mu.1, best_mu.0);
        }
        if best_mu.1 > best.1 {
            best = (alpha, best_mu.1, best_mu.0);
        }
    }
    println!(
        "\nmaximum transfer at alpha = {:.2}: negativity {:.6} (pulse area {:.4})",
        best.0, best.1, best.2
    );
}
