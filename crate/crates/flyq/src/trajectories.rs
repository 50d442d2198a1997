//! Quantum-jump unraveling of cavity photon loss during the transit.
//!
//! Each trajectory integrates the non-Hermitian drift
//! `i d/dt psi = (sum_j H_j(t) - i Gamma sum_c n_c) psi`, letting the norm
//! decay. A uniform threshold `r` is drawn up front; when `|psi|^2` crosses it
//! the crossing time is refined by bisection, one photon is removed from a
//! cavity chosen with probability proportional to its occupation, the state is
//! renormalized and a fresh threshold drawn. The ensemble average of the
//! normalized reduced states solves the corresponding master equation.
//!
//! Trajectories are deterministic given the per-trajectory seed, which is
//! derived from the master seed and the trajectory index, so ensembles are
//! reproducible bit for bit independently of the thread count.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::coupling::CouplingProfile;
use crate::hilbert::{DensityOperator, FactorLabel, SpaceLayout, StateVector};
use crate::measures::negativity;
use crate::ode::rk45_step;
use crate::resources::{CavityLoad, DrivingResource};
use crate::unitary::{apply_exchange, initial_protocol_state, JCPair};
use crate::{Error, Result};

/// Parameters of a jump unraveling run.
#[derive(Debug, Clone)]
pub struct JumpConfig {
    /// Cavity damping rate in rad/s, equal for both cavities. The mean photon
    /// number of a free cavity decays at `2 Gamma`.
    pub gamma: f64,
    /// Ensemble size.
    pub n_traj: usize,
    /// Master seed; per-trajectory seeds are derived from it.
    pub master_seed: u64,
    /// Integrator tolerance.
    pub tol: f64,
    /// Times at which the state is sampled, strictly increasing.
    pub sample_times: Vec<f64>,
}

impl JumpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "damping rate must be nonnegative, got {}",
                self.gamma
            )));
        }
        if self.n_traj < 1 {
            return Err(Error::InvalidParameter("ensemble size must be >= 1".into()));
        }
        if self.tol <= 0.0 {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        if self.sample_times.is_empty() {
            return Err(Error::InvalidParameter("sample grid is empty".into()));
        }
        for w in self.sample_times.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidParameter(
                    "sample times must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One recorded quantum jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpRecord {
    pub time: f64,
    pub cavity: FactorLabel,
}

/// Output of a single trajectory: normalized snapshots on the sample grid and
/// the jump record.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<StateVector>,
    pub jumps: Vec<JumpRecord>,
}

/// Deterministic per-trajectory seed, derived from the master seed and the
/// trajectory index with two splitmix64 rounds.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    for _ in 0..2 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut x = z;
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z = x ^ (x >> 31);
    }
    z
}

struct DampedFactor {
    label: FactorLabel,
    stride: usize,
    dim: usize,
}

fn damped_factors(layout: &SpaceLayout) -> Vec<DampedFactor> {
    [FactorLabel::CavityA, FactorLabel::CavityB]
        .into_iter()
        .filter_map(|label| {
            layout.position_of(label).map(|pos| DampedFactor {
                label,
                stride: layout.stride(pos),
                dim: layout.factors()[pos].1,
            })
        })
        .collect()
}

/// Total cavity photon number per flat index.
fn occupation_table(layout: &SpaceLayout, damped: &[DampedFactor]) -> Vec<f64> {
    let dim = layout.total_dim();
    let mut table = vec![0.0; dim];
    for factor in damped {
        for (flat, value) in table.iter_mut().enumerate() {
            *value += ((flat / factor.stride) % factor.dim) as f64;
        }
    }
    table
}

/// Runs one quantum-jump trajectory from a normalized initial state.
///
/// Loss acts on every cavity factor present in the layout; the coherent drive
/// is given per qubit-cavity pair. The sample snapshots are renormalized.
pub fn run_trajectory(
    initial: &StateVector,
    pairs: &[(JCPair, &(dyn Fn(f64) -> f64 + Sync))],
    config: &JumpConfig,
    seed: u64,
) -> Result<Trajectory> {
    config.validate()?;
    let layout = initial.layout().clone();
    let damped = damped_factors(&layout);
    let occupation = occupation_table(&layout, &damped);
    let gamma = config.gamma;
    let dissipative = gamma > 0.0 && !damped.is_empty();

    let rhs = |t: f64, y: &DVector<C64>| {
        let mut out = DVector::<C64>::zeros(y.len());
        for (pair, omega) in pairs {
            let x = apply_exchange(&layout, pair, y).expect("pair resolved");
            let w = omega(t);
            out += x * C64::new(0.0, -w);
        }
        if dissipative {
            for (flat, value) in out.iter_mut().enumerate() {
                *value -= C64::new(gamma * occupation[flat], 0.0) * y[flat];
            }
        }
        out
    };

    // check pairs resolve and the top manifold is unpopulated before
    // entering the stepping loop; loss only lowers the excitation, so a
    // clean top level stays clean
    for (pair, _) in pairs {
        apply_exchange(&layout, pair, initial.amplitudes())?;
        let q_pos = layout.position_of(pair.qubit).unwrap();
        let c_pos = layout.position_of(pair.cavity).unwrap();
        let c_dim = layout.factors()[c_pos].1;
        let mut leak = 0.0;
        for (flat, amp) in initial.amplitudes().iter().enumerate() {
            let q = layout.component(flat, q_pos);
            let n = layout.component(flat, c_pos);
            if q == 1 && n == c_dim - 1 {
                leak += amp.norm_sqr();
            }
        }
        if leak > 1e-10 {
            return Err(Error::Truncation(format!(
                "population {leak:.3e} on the top manifold of cavity {}",
                pair.cavity
            )));
        }
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let t_total = *config.sample_times.last().unwrap();
    let time_tol = 1e-10 * t_total;
    let min_step = 1e-14 * t_total;
    // accept steps three orders below the requested tolerance so the error
    // accumulated over the whole transit stays within config.tol
    let local_tol = (config.tol * 1e-3).max(5e-15);

    let mut t = 0.0;
    let mut y = initial.amplitudes().clone();
    let mut dt = t_total * 1e-3;
    let mut threshold: f64 = rng.random();
    let mut samples = Vec::with_capacity(config.sample_times.len());
    let mut jumps = Vec::new();

    for &t_sample in &config.sample_times {
        while t < t_sample {
            dt = dt.min(t_sample - t);
            let (y_new, err) = rk45_step(&rhs, t, &y, dt, local_tol);
            if err > 1.0 {
                dt *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                if dt < min_step {
                    return Err(Error::Stiffness { t });
                }
                continue;
            }
            if dissipative && y_new.norm_squared() < threshold {
                // refine the crossing time: the squared norm decays
                // monotonically, so there is exactly one crossing in the step
                let mut lo = 0.0;
                let mut hi = dt;
                let mut y_jump = y_new.clone();
                while hi - lo > time_tol {
                    let mid = 0.5 * (lo + hi);
                    let (y_mid, _) = rk45_step(&rhs, t, &y, mid, local_tol);
                    if y_mid.norm_squared() < threshold {
                        hi = mid;
                        y_jump = y_mid;
                    } else {
                        lo = mid;
                    }
                }
                let t_jump = t + hi;

                // pick the decay channel with probability ~ <n_c>
                let weights: Vec<f64> = damped
                    .iter()
                    .map(|f| {
                        y_jump
                            .iter()
                            .enumerate()
                            .map(|(flat, amp)| {
                                ((flat / f.stride) % f.dim) as f64 * amp.norm_sqr()
                            })
                            .sum()
                    })
                    .collect();
                let total: f64 = weights.iter().sum();
                if total <= 0.0 {
                    return Err(Error::InvalidState(
                        "norm crossed the jump threshold with empty cavities".into(),
                    ));
                }
                let mut pick = rng.random::<f64>() * total;
                let mut channel = damped.len() - 1;
                for (k, w) in weights.iter().enumerate() {
                    if pick < *w {
                        channel = k;
                        break;
                    }
                    pick -= w;
                }
                let factor = &damped[channel];

                // apply the annihilation on the chosen cavity and renormalize
                let mut y_after = DVector::<C64>::zeros(y_jump.len());
                for (flat, amp) in y_jump.iter().enumerate() {
                    let n = (flat / factor.stride) % factor.dim;
                    if n > 0 {
                        y_after[flat - factor.stride] += C64::new((n as f64).sqrt(), 0.0) * amp;
                    }
                }
                let norm = y_after.norm();
                y = y_after.map(|z| z / C64::new(norm, 0.0));
                t = t_jump;
                jumps.push(JumpRecord {
                    time: t_jump,
                    cavity: factor.label,
                });
                threshold = rng.random();
                continue;
            }
            t += dt;
            y = y_new;
            dt *= (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        }
        samples.push(StateVector::new_unnormalized(
            layout.clone(),
            y.normalize(),
        )?);
    }

    Ok(Trajectory { samples, jumps })
}

/// Ensemble statistics on the sample grid.
#[derive(Debug, Clone)]
pub struct EnsembleEstimate {
    pub times: Vec<f64>,
    /// Ensemble-mean reduced two-qubit state per sample time.
    pub mean_qubit_states: Vec<DensityOperator>,
    /// Negativity of the mean state (not the mean of negativities).
    pub negativity: Vec<f64>,
    /// Bootstrap standard error of the negativity of the mean.
    pub negativity_stderr: Vec<f64>,
    pub mean_jump_count: f64,
}

/// Runs the full transfer scenario as a jump ensemble and averages the
/// reduced qubit states. The negativity is evaluated on the ensemble-mean
/// matrix; its standard error comes from a 200-resample nonparametric
/// bootstrap over trajectories.
pub fn run_ensemble(
    resource: &DrivingResource,
    load: CavityLoad,
    profiles: &[CouplingProfile; 2],
    config: &JumpConfig,
) -> Result<EnsembleEstimate> {
    config.validate()?;
    let initial = initial_protocol_state(resource, load)?;
    let [pair1, pair2] = JCPair::protocol_pairs();
    let omega1 = |t: f64| profiles[0].omega(t);
    let omega2 = |t: f64| profiles[1].omega(t);

    let per_traj: Vec<Result<(Vec<DMatrix<C64>>, usize)>> = (0..config.n_traj)
        .into_par_iter()
        .map(|index| {
            let pairs: Vec<(JCPair, &(dyn Fn(f64) -> f64 + Sync))> =
                vec![(pair1, &omega1), (pair2, &omega2)];
            let seed = derive_seed(config.master_seed, index as u64);
            let trajectory = run_trajectory(&initial, &pairs, config, seed)?;
            let mut reduced = Vec::with_capacity(trajectory.samples.len());
            for state in &trajectory.samples {
                reduced.push(
                    state
                        .reduced_density(&[FactorLabel::Qubit1, FactorLabel::Qubit2])?
                        .matrix()
                        .clone(),
                );
            }
            Ok((reduced, trajectory.jumps.len()))
        })
        .collect();

    let mut states: Vec<Vec<DMatrix<C64>>> = Vec::with_capacity(config.n_traj);
    let mut total_jumps = 0usize;
    for item in per_traj {
        let (reduced, jumps) = item?;
        states.push(reduced);
        total_jumps += jumps;
    }

    let n_times = config.sample_times.len();
    let n_traj = config.n_traj;
    let weight = C64::new(1.0 / n_traj as f64, 0.0);
    let two_qubits = SpaceLayout::two_qubits();

    let mut mean_qubit_states = Vec::with_capacity(n_times);
    let mut neg = Vec::with_capacity(n_times);
    for k in 0..n_times {
        let mut acc = DMatrix::<C64>::zeros(4, 4);
        for traj in &states {
            acc += &traj[k] * weight;
        }
        let rho = DensityOperator::from_matrix_unchecked(two_qubits.clone(), acc);
        neg.push(negativity(&rho)?);
        mean_qubit_states.push(rho);
    }

    // bootstrap over trajectories, common resamples across the time grid
    let n_resamples = 200;
    let mut stderr = vec![0.0; n_times];
    if n_traj >= 2 {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(config.master_seed, u64::MAX));
        let mut resampled: Vec<Vec<f64>> = vec![Vec::with_capacity(n_resamples); n_times];
        for _ in 0..n_resamples {
            let draw: Vec<usize> = (0..n_traj).map(|_| rng.random_range(0..n_traj)).collect();
            for k in 0..n_times {
                let mut acc = DMatrix::<C64>::zeros(4, 4);
                for &idx in &draw {
                    acc += &states[idx][k] * weight;
                }
                let rho = DensityOperator::from_matrix_unchecked(two_qubits.clone(), acc);
                resampled[k].push(negativity(&rho)?);
            }
        }
        for k in 0..n_times {
            let mean: f64 = resampled[k].iter().sum::<f64>() / n_resamples as f64;
            let var: f64 = resampled[k]
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                / (n_resamples - 1) as f64;
            stderr[k] = var.sqrt();
        }
    }

    Ok(EnsembleEstimate {
        times: config.sample_times.clone(),
        mean_qubit_states,
        negativity: neg,
        negativity_stderr: stderr,
        mean_jump_count: total_jumps as f64 / n_traj as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{ModeGeometry, Trajectory as Motion};
    use crate::linalg::max_abs_diff;
    use crate::unitary::evolve_protocol;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn paper_profile(omega0: f64) -> CouplingProfile {
        CouplingProfile::new(
            omega0,
            ModeGeometry::new(2, 0, 10e-6).unwrap(),
            Motion::free_fall(-40e-6, 9.82).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        let c = derive_seed(43, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(42, 0));
    }

    #[test]
    fn no_damping_reproduces_the_unitary_curve() {
        let resource = DrivingResource::noon_with_truncation(1, 3).unwrap();
        let load = CavityLoad::new(0.9).unwrap();
        let profile = paper_profile(5.9e3);
        let t_end = profile.exit_time();
        let config = JumpConfig {
            gamma: 0.0,
            n_traj: 1,
            master_seed: 1,
            tol: 1e-10,
            sample_times: vec![0.4 * t_end, t_end],
        };
        let estimate = run_ensemble(&resource, load, &[profile, profile], &config).unwrap();
        for (k, &t) in config.sample_times.iter().enumerate() {
            let unitary = evolve_protocol(&resource, load, &[profile, profile], t).unwrap();
            let diff = max_abs_diff(estimate.mean_qubit_states[k].matrix(), unitary.matrix());
            assert!(diff < 1e-8, "t = {t}: diff {diff:.3e}");
        }
        assert_eq!(estimate.mean_jump_count, 0.0);
        assert!(estimate.negativity_stderr.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn ground_states_never_jump() {
        let layout = SpaceLayout::new(vec![
            (FactorLabel::Qubit1, 2),
            (FactorLabel::CavityA, 3),
        ])
        .unwrap();
        let psi = StateVector::basis(layout, &[0, 0]).unwrap();
        let profile = paper_profile(1e3);
        let omega = |t: f64| profile.omega(t);
        let pairs: Vec<(JCPair, &(dyn Fn(f64) -> f64 + Sync))> = vec![(
            JCPair::new(FactorLabel::Qubit1, FactorLabel::CavityA),
            &omega,
        )];
        let config = JumpConfig {
            gamma: 50.0,
            n_traj: 1,
            master_seed: 5,
            tol: 1e-9,
            sample_times: vec![1e-3, 5e-3],
        };
        let trajectory = run_trajectory(&psi, &pairs, &config, 99).unwrap();
        assert!(trajectory.jumps.is_empty());
        let final_state = trajectory.samples.last().unwrap();
        assert!((final_state.amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn repeated_runs_are_bit_identical() {
        let resource = DrivingResource::noon_with_truncation(1, 3).unwrap();
        let load = CavityLoad::new(0.9).unwrap();
        let profile = paper_profile(3e3);
        let t_end = profile.exit_time();
        let config = JumpConfig {
            gamma: 30.0,
            n_traj: 8,
            master_seed: 2024,
            tol: 1e-8,
            sample_times: vec![0.5 * t_end, t_end],
        };
        let run1 = run_ensemble(&resource, load, &[profile, profile], &config).unwrap();
        let run2 = run_ensemble(&resource, load, &[profile, profile], &config).unwrap();
        for k in 0..config.sample_times.len() {
            assert_eq!(run1.negativity[k].to_bits(), run2.negativity[k].to_bits());
            assert_eq!(
                run1.negativity_stderr[k].to_bits(),
                run2.negativity_stderr[k].to_bits()
            );
        }
        assert_eq!(run1.mean_jump_count, run2.mean_jump_count);
    }

    #[test]
    fn single_decaying_cavity_jump_times_follow_the_decay_law() {
        // one photon, no drive: the waiting time is exponential at rate 2 Gamma
        let layout = SpaceLayout::new(vec![(FactorLabel::CavityA, 2)]).unwrap();
        let psi = StateVector::basis(layout, &[1]).unwrap();
        let gamma = 700.0;
        let config = JumpConfig {
            gamma,
            n_traj: 1,
            master_seed: 7,
            tol: 1e-9,
            sample_times: vec![8.0 / gamma],
        };
        let n = 400;
        let mut times = Vec::with_capacity(n);
        for k in 0..n {
            let trajectory =
                run_trajectory(&psi, &[], &config, derive_seed(31, k as u64)).unwrap();
            if let Some(jump) = trajectory.jumps.first() {
                assert_eq!(jump.cavity, FactorLabel::CavityA);
                times.push(jump.time);
            }
        }
        // nearly every threshold is crossed within 8 lifetimes
        assert!(times.len() > n * 9 / 10);
        let mean: f64 = times.iter().sum::<f64>() / times.len() as f64;
        let expected = 1.0 / (2.0 * gamma);
        assert!(
            (mean - expected).abs() < 4.0 * expected / (times.len() as f64).sqrt(),
            "mean waiting time {mean:.3e}, expected {expected:.3e}"
        );
    }

    #[test]
    fn ensemble_mean_solves_the_master_equation() {
        // one qubit, one lossy cavity, constant coupling; oracle is a dense
        // fixed-step integration of the master equation
        let d = 3;
        let layout = SpaceLayout::new(vec![
            (FactorLabel::Qubit1, 2),
            (FactorLabel::CavityA, d),
        ])
        .unwrap();
        let mut amps = DVector::<C64>::zeros(2 * d);
        amps[layout.flat_index(&[0, 2])] = c(1.0, 0.0);
        let psi = StateVector::new(layout.clone(), amps).unwrap();

        let omega = 1.0;
        let gamma = 0.25;
        let t_final = 1.2;
        let rate = move |_t: f64| omega;
        let pairs: Vec<(JCPair, &(dyn Fn(f64) -> f64 + Sync))> = vec![(
            JCPair::new(FactorLabel::Qubit1, FactorLabel::CavityA),
            &rate,
        )];
        let config = JumpConfig {
            gamma,
            n_traj: 1,
            master_seed: 11,
            tol: 1e-9,
            sample_times: vec![t_final],
        };

        let n_traj = 5000;
        let mats: Vec<DMatrix<C64>> = (0..n_traj)
            .into_par_iter()
            .map(|k| {
                let trajectory =
                    run_trajectory(&psi, &pairs, &config, derive_seed(314, k as u64)).unwrap();
                trajectory.samples[0].density().matrix().clone()
            })
            .collect();
        let mean = mats
            .iter()
            .fold(DMatrix::<C64>::zeros(2 * d, 2 * d), |acc, m| acc + m)
            * c(1.0 / n_traj as f64, 0.0);

        // dense master-equation oracle: drho = -i[H, rho] + G(2 k rho k+ - {k+k, rho})
        let x_op = {
            let mut m = DMatrix::<C64>::zeros(2 * d, 2 * d);
            for flat in 0..2 * d {
                let q = layout.component(flat, 0);
                let n = layout.component(flat, 1);
                if q == 0 && n >= 1 {
                    let partner = layout.flat_index(&[1, n - 1]);
                    let r = c((n as f64).sqrt(), 0.0);
                    m[(partner, flat)] += r;
                    m[(flat, partner)] += r;
                }
            }
            m
        };
        let k_op = {
            let mut m = DMatrix::<C64>::zeros(2 * d, 2 * d);
            for flat in 0..2 * d {
                let n = layout.component(flat, 1);
                if n >= 1 {
                    let q = layout.component(flat, 0);
                    m[(layout.flat_index(&[q, n - 1]), flat)] = c((n as f64).sqrt(), 0.0);
                }
            }
            m
        };
        let h = &x_op * c(omega, 0.0);
        let kdk = k_op.adjoint() * &k_op;
        let lindblad = |rho: &DMatrix<C64>| -> DMatrix<C64> {
            let comm = &h * rho - rho * &h;
            let jump = &k_op * rho * k_op.adjoint();
            let anti = &kdk * rho + rho * &kdk;
            comm * c(0.0, -1.0) + (jump * c(2.0, 0.0) - anti) * c(gamma, 0.0)
        };
        let mut rho = psi.density().matrix().clone();
        let steps = 4000;
        let h_step = t_final / steps as f64;
        for _ in 0..steps {
            let k1 = lindblad(&rho);
            let k2 = lindblad(&(&rho + &k1 * c(0.5 * h_step, 0.0)));
            let k3 = lindblad(&(&rho + &k2 * c(0.5 * h_step, 0.0)));
            let k4 = lindblad(&(&rho + &k3 * c(h_step, 0.0)));
            rho += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(h_step / 6.0, 0.0);
        }

        let distance = crate::linalg::trace_distance(&mean, &rho).unwrap();

        // bootstrap spread of the trace distance
        let mut rng = ChaCha12Rng::seed_from_u64(555);
        let mut resampled = Vec::with_capacity(100);
        for _ in 0..100 {
            let mut acc = DMatrix::<C64>::zeros(2 * d, 2 * d);
            for _ in 0..n_traj {
                acc += &mats[rng.random_range(0..n_traj)];
            }
            let m = acc * c(1.0 / n_traj as f64, 0.0);
            resampled.push(crate::linalg::trace_distance(&m, &rho).unwrap());
        }
        let mean_td: f64 = resampled.iter().sum::<f64>() / resampled.len() as f64;
        let var: f64 = resampled
            .iter()
            .map(|v| (v - mean_td) * (v - mean_td))
            .sum::<f64>()
            / (resampled.len() - 1) as f64;
        let spread = var.sqrt().max(1e-6);
        assert!(
            distance < mean_td + 3.0 * spread,
            "trace distance {distance:.3e} vs bootstrap {mean_td:.3e} +- {spread:.3e}"
        );
        // and the distance itself is small in absolute terms
        assert!(distance < 0.05, "trace distance {distance:.3e}");
    }

    #[test]
    fn excitation_decays_between_jumps() {
        let layout = SpaceLayout::new(vec![(FactorLabel::CavityA, 4)]).unwrap();
        let mut amps = DVector::<C64>::zeros(4);
        amps[3] = c(1.0, 0.0);
        let psi = StateVector::new(layout.clone(), amps).unwrap();
        let config = JumpConfig {
            gamma: 1.0,
            n_traj: 1,
            master_seed: 3,
            tol: 1e-10,
            sample_times: (1..=20).map(|k| 0.05 * k as f64).collect(),
        };
        let trajectory = run_trajectory(&psi, &[], &config, 12345).unwrap();
        // photon number of the normalized state is constant between jumps
        // (pure Fock decay), and drops by one at each jump
        let expectations: Vec<f64> = trajectory
            .samples
            .iter()
            .map(|s| {
                s.amplitudes()
                    .iter()
                    .enumerate()
                    .map(|(n, a)| n as f64 * a.norm_sqr())
                    .sum::<f64>()
                    / s.norm().powi(2)
            })
            .collect();
        for w in expectations.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
    }
}
