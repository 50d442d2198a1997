//! Entanglement and quantum-correlation measures for two-qubit states.
//!
//! Negativity is `max(0, -2 lambda_min)` of the partially transposed state;
//! for two qubits it vanishes exactly on separable states. Discord follows the
//! entropic definition with rank-1 projective measurements on one qubit,
//! optimized by a coarse Bloch-sphere grid followed by a Nelder-Mead
//! refinement.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::hilbert::{DensityOperator, FactorLabel};
use crate::linalg::hermitian_eigen;
use crate::{Error, Result};

fn require_two_qubits(rho: &DensityOperator) -> Result<()> {
    let f = rho.layout().factors();
    if f.len() != 2 || f[0].1 != 2 || f[1].1 != 2 {
        return Err(Error::InvalidLayout(
            "expected a two-qubit density operator".into(),
        ));
    }
    Ok(())
}

/// Negativity of a two-qubit state, in [0, 1].
pub fn negativity(rho: &DensityOperator) -> Result<f64> {
    require_two_qubits(rho)?;
    let second = rho.layout().factors()[1].0;
    let pt = rho.partial_transpose(second)?;
    let lambda_min = pt.min_eigenvalue()?;
    Ok((-2.0 * lambda_min).max(0.0))
}

/// Von Neumann entropy in bits, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    entropy_of_matrix(rho.matrix())
}

fn entropy_of_matrix(m: &DMatrix<C64>) -> Result<f64> {
    let (values, _) = hermitian_eigen(m)?;
    Ok(values
        .iter()
        .map(|&p| if p > 1e-15 { -p * p.log2() } else { 0.0 })
        .sum())
}

fn entropy_2x2(m: &DMatrix<C64>) -> f64 {
    // closed-form spectrum from trace and determinant
    let tr = m.trace().re;
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    let mut s = 0.0;
    for l in [l1, l2] {
        if l > 1e-15 {
            s -= l * l.log2();
        }
    }
    s
}

/// Rank-1 projective measurement on one qubit, parametrized by Bloch angles.
#[derive(Debug, Clone, Copy)]
pub struct ProjectiveMeasurement {
    pub theta: f64,
    pub phi: f64,
}

impl ProjectiveMeasurement {
    /// The two orthogonal projectors; they sum to the identity.
    pub fn projectors(&self) -> [DMatrix<C64>; 2] {
        let (ct, st) = ((0.5 * self.theta).cos(), (0.5 * self.theta).sin());
        let phase = C64::new(0.0, self.phi).exp();
        // |m> = cos(t/2)|0> + e^{i phi} sin(t/2)|1>
        let m0 = [C64::new(ct, 0.0), phase * C64::new(st, 0.0)];
        let m1 = [C64::new(st, 0.0), -phase * C64::new(ct, 0.0)];
        let proj = |v: [C64; 2]| {
            DMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj())
        };
        [proj(m0), proj(m1)]
    }
}

/// Average conditional entropy of the unmeasured qubit after projectively
/// measuring the other in the given basis.
fn conditional_entropy(rho: &DMatrix<C64>, measured_first: bool, meas: &ProjectiveMeasurement) -> f64 {
    let projectors = meas.projectors();
    let mut acc = 0.0;
    for pk in &projectors {
        // conditional (unnormalized) state of the unmeasured qubit
        let mut cond = DMatrix::<C64>::zeros(2, 2);
        if measured_first {
            // measured qubit is the slow index
            for i in 0..2 {
                for j in 0..2 {
                    let mut z = C64::new(0.0, 0.0);
                    for a in 0..2 {
                        for b in 0..2 {
                            z += pk[(b, a)] * rho[(2 * a + i, 2 * b + j)];
                        }
                    }
                    cond[(i, j)] = z;
                }
            }
        } else {
            for i in 0..2 {
                for j in 0..2 {
                    let mut z = C64::new(0.0, 0.0);
                    for a in 0..2 {
                        for b in 0..2 {
                            z += pk[(b, a)] * rho[(2 * i + a, 2 * j + b)];
                        }
                    }
                    cond[(i, j)] = z;
                }
            }
        }
        let p = cond.trace().re;
        if p > 1e-14 {
            let normalized = cond.map(|z| z / C64::new(p, 0.0));
            acc += p * entropy_2x2(&normalized);
        }
    }
    acc
}

/// Quantum discord in bits, measuring the given qubit; the measurement
/// basis is optimized over all rank-1 projective measurements.
///
/// Values below -1e-7 indicate a failed optimization and raise an error;
/// small negative values within tolerance are returned as computed.
pub fn discord(rho: &DensityOperator, measured: FactorLabel) -> Result<f64> {
    require_two_qubits(rho)?;
    let first = rho.layout().factors()[0].0;
    let second = rho.layout().factors()[1].0;
    let measured_first = if measured == first {
        true
    } else if measured == second {
        false
    } else {
        return Err(Error::InvalidLayout(format!(
            "label {measured} not in layout"
        )));
    };
    let unmeasured = if measured_first { second } else { first };

    let s_full = von_neumann_entropy(rho)?;
    let s_measured = von_neumann_entropy(&rho.partial_trace(&[measured])?)?;
    let s_unmeasured = von_neumann_entropy(&rho.partial_trace(&[unmeasured])?)?;
    let mutual_information = s_measured + s_unmeasured - s_full;

    let m = rho.matrix();
    let objective = |theta: f64, phi: f64| conditional_entropy(m, measured_first, &ProjectiveMeasurement { theta, phi });

    // coarse 64x64 grid over the Bloch sphere
    let grid = 64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid {
        let theta = (i as f64 + 0.5) * std::f64::consts::PI / grid as f64;
        for j in 0..grid {
            let phi = (j as f64 + 0.5) * 2.0 * std::f64::consts::PI / grid as f64;
            let v = objective(theta, phi);
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }

    // local simplex refinement
    let refined = nelder_mead(
        |p| objective(p[0], p[1]),
        [best.1, best.2],
        std::f64::consts::PI / grid as f64,
        1e-8,
        400,
    );
    let min_conditional = refined.min(best.0);

    let classical = s_unmeasured - min_conditional;
    let d = mutual_information - classical;
    if d < -1e-7 {
        return Err(Error::OptimizerFailure(format!(
            "discord optimization returned {d:.3e}"
        )));
    }
    Ok(d)
}

/// Two-dimensional Nelder-Mead minimization; returns the best value found.
fn nelder_mead<F>(f: F, start: [f64; 2], scale: f64, tol: f64, max_iter: usize) -> f64
where
    F: Fn([f64; 2]) -> f64,
{
    let mut simplex = [
        start,
        [start[0] + scale, start[1]],
        [start[0], start[1] + scale],
    ];
    let mut values = simplex.map(&f);

    for _ in 0..max_iter {
        // order best -> worst
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (b, m, w) = (idx[0], idx[1], idx[2]);
        if (values[w] - values[b]).abs() < tol {
            break;
        }
        let centroid = [
            0.5 * (simplex[b][0] + simplex[m][0]),
            0.5 * (simplex[b][1] + simplex[m][1]),
        ];
        let reflect = [
            centroid[0] + (centroid[0] - simplex[w][0]),
            centroid[1] + (centroid[1] - simplex[w][1]),
        ];
        let fr = f(reflect);
        if fr < values[b] {
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - simplex[w][0]),
                centroid[1] + 2.0 * (centroid[1] - simplex[w][1]),
            ];
            let fe = f(expand);
            if fe < fr {
                simplex[w] = expand;
                values[w] = fe;
            } else {
                simplex[w] = reflect;
                values[w] = fr;
            }
        } else if fr < values[m] {
            simplex[w] = reflect;
            values[w] = fr;
        } else {
            let contract = [
                centroid[0] + 0.5 * (simplex[w][0] - centroid[0]),
                centroid[1] + 0.5 * (simplex[w][1] - centroid[1]),
            ];
            let fc = f(contract);
            if fc < values[w] {
                simplex[w] = contract;
                values[w] = fc;
            } else {
                // shrink toward the best point
                for k in [m, w] {
                    simplex[k] = [
                        simplex[b][0] + 0.5 * (simplex[k][0] - simplex[b][0]),
                        simplex[b][1] + 0.5 * (simplex[k][1] - simplex[b][1]),
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    values[0].min(values[1]).min(values[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{SpaceLayout, StateVector};
    use approx::assert_relative_eq;
    use nalgebra::DVector;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bell() -> DensityOperator {
        let mut amps = DVector::<C64>::zeros(4);
        amps[0] = c(1.0 / 2f64.sqrt(), 0.0);
        amps[3] = c(1.0 / 2f64.sqrt(), 0.0);
        StateVector::new(SpaceLayout::two_qubits(), amps)
            .unwrap()
            .density()
    }

    fn random_single_qubit(rng: &mut impl Rng) -> DMatrix<C64> {
        let g = DMatrix::from_fn(2, 2, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let m = &g * g.adjoint();
        let tr = m.trace();
        m.map(|z| z / tr)
    }

    fn product_state(rng: &mut impl Rng) -> DensityOperator {
        let r1 = random_single_qubit(rng);
        let r2 = random_single_qubit(rng);
        DensityOperator::from_matrix_unchecked(SpaceLayout::two_qubits(), r1.kronecker(&r2))
    }

    #[test]
    fn bell_state_measures() {
        let rho = bell();
        assert_relative_eq!(negativity(&rho).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), 0.0, epsilon = 1e-10);
        assert_relative_eq!(
            discord(&rho, FactorLabel::Qubit2).unwrap(),
            1.0,
            epsilon = 1e-6
        );
    }

    #[test]
    fn product_states_carry_no_correlations() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..5 {
            let rho = product_state(&mut rng);
            assert_eq!(negativity(&rho).unwrap(), 0.0);
            let d = discord(&rho, FactorLabel::Qubit2).unwrap();
            assert!(d.abs() < 1e-7, "discord {d:.3e} on a product state");
        }
    }

    #[test]
    fn classical_mixture_has_zero_discord() {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = c(0.5, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        let rho = DensityOperator::from_matrix_unchecked(SpaceLayout::two_qubits(), m);
        let d = discord(&rho, FactorLabel::Qubit2).unwrap();
        assert!(d.abs() < 1e-7);
        assert_eq!(negativity(&rho).unwrap(), 0.0);
    }

    #[test]
    fn entropy_values() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 0)] = c(0.25, 0.0);
        m[(1, 1)] = c(0.75, 0.0);
        let layout = SpaceLayout::new(vec![(FactorLabel::Qubit1, 2)]).unwrap();
        let rho = DensityOperator::from_matrix_unchecked(layout.clone(), m);
        assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), 0.811278, epsilon = 1e-6);

        let half = DMatrix::<C64>::identity(2, 2).map(|z| z * c(0.5, 0.0));
        let mixed = DensityOperator::from_matrix_unchecked(layout, half);
        assert_relative_eq!(von_neumann_entropy(&mixed).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn noon1_negativity_closed_form() {
        // transmitted single photon at full pulse area, T = 0.9
        let rho = crate::unitary::noon1_closed_form(0.9, std::f64::consts::FRAC_PI_2).unwrap();
        let expected = 0.82f64.sqrt() - 0.1;
        assert_relative_eq!(negativity(&rho).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn discord_is_invariant_under_local_unitaries() {
        let rho = crate::unitary::noon1_closed_form(0.9, 0.9).unwrap();
        let d0 = discord(&rho, FactorLabel::Qubit2).unwrap();

        // rotate qubit 1 by a fixed unitary
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.6, 0.0), c(0.0, 0.8),
                c(0.0, 0.8), c(0.6, 0.0),
            ],
        );
        let full = u.kronecker(&DMatrix::<C64>::identity(2, 2));
        let rotated = &full * rho.matrix() * full.adjoint();
        let rho_rot =
            DensityOperator::from_matrix_unchecked(SpaceLayout::two_qubits(), rotated);
        let d1 = discord(&rho_rot, FactorLabel::Qubit2).unwrap();
        assert!((d0 - d1).abs() < 1e-6, "{d0} vs {d1}");
    }

    #[test]
    fn swap_symmetric_states_have_side_independent_discord() {
        let rho = crate::unitary::noon1_closed_form(0.9, 0.7).unwrap();
        let d1 = discord(&rho, FactorLabel::Qubit1).unwrap();
        let d2 = discord(&rho, FactorLabel::Qubit2).unwrap();
        assert!((d1 - d2).abs() < 1e-6);
    }

    #[test]
    fn negativity_zero_iff_partial_transpose_positive() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        for _ in 0..20 {
            // random mixture of a Bell state and noise
            let p: f64 = rng.random();
            let noise = DMatrix::<C64>::identity(4, 4).map(|z| z * c(0.25, 0.0));
            let m = bell().matrix() * c(p, 0.0) + noise * c(1.0 - p, 0.0);
            let rho = DensityOperator::from_matrix_unchecked(SpaceLayout::two_qubits(), m);
            let neg = negativity(&rho).unwrap();
            let pt = rho.partial_transpose(FactorLabel::Qubit2).unwrap();
            let lambda_min = pt.min_eigenvalue().unwrap();
            if neg == 0.0 {
                assert!(lambda_min >= -1e-14);
            } else {
                assert!(lambda_min < 0.0);
            }
        }
    }
}
