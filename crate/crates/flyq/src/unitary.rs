//! Lossless transit dynamics.
//!
//! On resonance the exchange Hamiltonian at time t is `omega(t) X` with a
//! fixed operator `X = k |1><0| + k^dag |0><1|`, so the propagator is exactly
//! `exp(-i mu(t) X)` with `mu` the pulse area. [`jc_rotate`] applies that
//! rotation manifold by manifold; [`ode_propagate`] integrates the same
//! Schroedinger equation step by step and serves as an independent oracle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::coupling::CouplingProfile;
use crate::hilbert::{DensityOperator, FactorLabel, SpaceLayout, StateVector};
use crate::ode;
use crate::resources::{apply_loading, CavityLoad, DrivingResource};
use crate::{Error, Result};

/// One qubit paired with the cavity it flies through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JCPair {
    pub qubit: FactorLabel,
    pub cavity: FactorLabel,
}

impl JCPair {
    pub fn new(qubit: FactorLabel, cavity: FactorLabel) -> Self {
        Self { qubit, cavity }
    }

    /// The two pairs of the transfer protocol: (qubit1, cavityA) and
    /// (qubit2, cavityB).
    pub fn protocol_pairs() -> [JCPair; 2] {
        [
            JCPair::new(FactorLabel::Qubit1, FactorLabel::CavityA),
            JCPair::new(FactorLabel::Qubit2, FactorLabel::CavityB),
        ]
    }

    fn resolve(&self, layout: &SpaceLayout) -> Result<PairIndices> {
        let q_pos = layout
            .position_of(self.qubit)
            .ok_or_else(|| Error::InvalidLayout(format!("label {} not in layout", self.qubit)))?;
        let c_pos = layout
            .position_of(self.cavity)
            .ok_or_else(|| Error::InvalidLayout(format!("label {} not in layout", self.cavity)))?;
        if layout.factors()[q_pos].1 != 2 {
            return Err(Error::InvalidLayout(format!(
                "factor {} is not a qubit",
                self.qubit
            )));
        }
        Ok(PairIndices {
            q_stride: layout.stride(q_pos),
            c_stride: layout.stride(c_pos),
            c_dim: layout.factors()[c_pos].1,
        })
    }
}

struct PairIndices {
    q_stride: usize,
    c_stride: usize,
    c_dim: usize,
}

/// Applies the exchange generator `X = k |1><0| + k^dag |0><1|` of one pair.
pub(crate) fn apply_exchange(
    layout: &SpaceLayout,
    pair: &JCPair,
    amps: &DVector<C64>,
) -> Result<DVector<C64>> {
    let idx = pair.resolve(layout)?;
    let dim = layout.total_dim();
    let mut out = DVector::<C64>::zeros(dim);
    for flat in 0..dim {
        let q = (flat / idx.q_stride) % 2;
        if q != 0 {
            continue;
        }
        let n = (flat / idx.c_stride) % idx.c_dim;
        if n == 0 {
            continue;
        }
        let partner = flat + idx.q_stride - idx.c_stride;
        let root_n = C64::new((n as f64).sqrt(), 0.0);
        out[flat] += root_n * amps[partner];
        out[partner] += root_n * amps[flat];
    }
    Ok(out)
}

fn top_manifold_population(layout: &SpaceLayout, pair: &JCPair, amps: &DVector<C64>) -> Result<f64> {
    let idx = pair.resolve(layout)?;
    let dim = layout.total_dim();
    let mut pop = 0.0;
    for flat in 0..dim {
        let q = (flat / idx.q_stride) % 2;
        let n = (flat / idx.c_stride) % idx.c_dim;
        if q == 1 && n == idx.c_dim - 1 {
            pop += amps[flat].norm_sqr();
        }
    }
    Ok(pop)
}

/// Exact exchange rotation by pulse area `mu` on one qubit-cavity pair.
///
/// Within each excitation manifold, `|0,n> -> cos(mu sqrt n)|0,n> -
/// i sin(mu sqrt n)|1,n-1>` and symmetrically; `|0,0>` is left alone. A
/// population above 1e-10 on the uppermost `|1, d-1>` level cannot rotate
/// anywhere and flags the truncation as too small.
pub fn jc_rotate(state: &StateVector, pair: &JCPair, mu: f64) -> Result<StateVector> {
    let layout = state.layout().clone();
    let idx = pair.resolve(&layout)?;
    let leak = top_manifold_population(&layout, pair, state.amplitudes())?;
    if leak > 1e-10 {
        return Err(Error::Truncation(format!(
            "population {leak:.3e} on the top manifold of cavity {}",
            pair.cavity
        )));
    }
    let dim = layout.total_dim();
    let mut amps = state.amplitudes().clone();
    for flat in 0..dim {
        let q = (flat / idx.q_stride) % 2;
        if q != 0 {
            continue;
        }
        let n = (flat / idx.c_stride) % idx.c_dim;
        if n == 0 {
            continue;
        }
        let partner = flat + idx.q_stride - idx.c_stride;
        let angle = mu * (n as f64).sqrt();
        let cos = C64::new(angle.cos(), 0.0);
        let misin = C64::new(0.0, -angle.sin());
        let a0 = amps[flat];
        let a1 = amps[partner];
        amps[flat] = cos * a0 + misin * a1;
        amps[partner] = misin * a0 + cos * a1;
    }
    StateVector::new_unnormalized(layout, amps)
}

/// Integrates `i d/dt psi = omega(t) X psi` for one pair up to `t_final`,
/// with a caller-supplied coupling rate. Oracle path for [`jc_rotate`].
pub fn ode_propagate_with<F>(
    state: &StateVector,
    pair: &JCPair,
    omega: F,
    t_final: f64,
    tol: f64,
) -> Result<StateVector>
where
    F: Fn(f64) -> f64,
{
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let layout = state.layout().clone();
    pair.resolve(&layout)?;
    let rhs = |t: f64, y: &DVector<C64>| {
        let x = apply_exchange(&layout, pair, y).expect("layout checked above");
        x * C64::new(0.0, -omega(t))
    };
    let y = ode::integrate_adaptive(&rhs, state.amplitudes(), 0.0, t_final, tol)?;
    StateVector::new_unnormalized(state.layout().clone(), y.normalize())
}

/// [`ode_propagate_with`] driven by a [`CouplingProfile`].
pub fn ode_propagate(
    state: &StateVector,
    pair: &JCPair,
    profile: &CouplingProfile,
    t_final: f64,
    tol: f64,
) -> Result<StateVector> {
    ode_propagate_with(state, pair, |t| profile.omega(t), t_final, tol)
}

/// The six-factor layout of the full protocol: two qubits, two cavities, two
/// external driving modes, all bosonic factors truncated at `dim`.
pub fn protocol_layout(dim: usize) -> Result<SpaceLayout> {
    SpaceLayout::new(vec![
        (FactorLabel::Qubit1, 2),
        (FactorLabel::Qubit2, 2),
        (FactorLabel::CavityA, dim),
        (FactorLabel::CavityB, dim),
        (FactorLabel::ExternalA, dim),
        (FactorLabel::ExternalB, dim),
    ])
}

/// Pure state after loading: qubits in `|00>`, cavities filled through the
/// beam splitters, the reflected remainder left on the external modes.
pub fn initial_protocol_state(
    resource: &DrivingResource,
    load: CavityLoad,
) -> Result<StateVector> {
    let d = resource.truncation();
    let layout = protocol_layout(d)?;
    let res = resource.two_mode_state()?;
    let res_layout = res.layout().clone();
    let mut amps = DVector::<C64>::zeros(layout.total_dim());
    for flat in 0..res_layout.total_dim() {
        let na = res_layout.component(flat, 0);
        let nb = res_layout.component(flat, 1);
        amps[layout.flat_index(&[0, 0, 0, 0, na, nb])] = res.amplitudes()[flat];
    }
    let full = StateVector::new_unnormalized(layout, amps)?;
    let loaded = apply_loading(&full, FactorLabel::CavityA, FactorLabel::ExternalA, load)?;
    apply_loading(&loaded, FactorLabel::CavityB, FactorLabel::ExternalB, load)
}

/// Reduced two-qubit state after both atoms have accumulated the given pulse
/// areas. The six-factor pure state is evolved and the four field factors are
/// traced out at the end.
pub fn evolve_protocol_at_pulse_areas(
    resource: &DrivingResource,
    load: CavityLoad,
    mu1: f64,
    mu2: f64,
) -> Result<DensityOperator> {
    let state = initial_protocol_state(resource, load)?;
    let [pair1, pair2] = JCPair::protocol_pairs();
    let state = jc_rotate(&state, &pair1, mu1)?;
    let state = jc_rotate(&state, &pair2, mu2)?;
    state.reduced_density(&[FactorLabel::Qubit1, FactorLabel::Qubit2])
}

/// Reduced two-qubit state at time `t`, with each atom's pulse area taken
/// from its own coupling profile.
pub fn evolve_protocol(
    resource: &DrivingResource,
    load: CavityLoad,
    profiles: &[CouplingProfile; 2],
    t: f64,
) -> Result<DensityOperator> {
    evolve_protocol_at_pulse_areas(
        resource,
        load,
        profiles[0].pulse_area(t),
        profiles[1].pulse_area(t),
    )
}

/// Closed form of the two-qubit state for single-photon NOON driving at
/// transmittivity `T` and common pulse area `mu`: populations `TS/2` on
/// `|01>` and `|10>` with an equally strong coherence, `1 - TS` on `|00>`,
/// where `S = sin^2(mu)`.
pub fn noon1_closed_form(transmittivity: f64, mu: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&transmittivity) {
        return Err(Error::InvalidParameter(format!(
            "transmittivity must lie in [0, 1], got {transmittivity}"
        )));
    }
    let ts = transmittivity * mu.sin().powi(2);
    let layout = SpaceLayout::two_qubits();
    let mut m = DMatrix::<C64>::zeros(4, 4);
    // ascending basis |00>, |01>, |10>, |11>
    m[(0, 0)] = C64::new(1.0 - ts, 0.0);
    m[(1, 1)] = C64::new(ts / 2.0, 0.0);
    m[(2, 2)] = C64::new(ts / 2.0, 0.0);
    m[(1, 2)] = C64::new(ts / 2.0, 0.0);
    m[(2, 1)] = C64::new(ts / 2.0, 0.0);
    Ok(DensityOperator::from_matrix_unchecked(layout, m))
}

/// Smallest series cutoff with `e^(-a^2) a^(2s) / s! < 1e-14`.
pub fn ecs_series_cutoff(alpha: f64) -> usize {
    let lambda = alpha * alpha;
    let mut term = (-lambda).exp();
    let mut s = 0;
    while term >= 1e-14 {
        s += 1;
        term *= lambda / s as f64;
        if s > 400 {
            break;
        }
    }
    s
}

/// Closed form of the two-qubit state for ECS driving.
///
/// In the ascending basis the nonzero entries are the `|01>`, `|10>`
/// populations `A`, their mutual coherence `B`, the coherences `C` to `|00>`,
/// and `1 - 2A` on `|00>`; `|11>` stays empty. The series are truncated at
/// `cutoff` photons.
pub fn ecs_closed_form(
    alpha: f64,
    transmittivity: f64,
    mu: f64,
    cutoff: usize,
) -> Result<DensityOperator> {
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ECS amplitude must be positive, got {alpha}"
        )));
    }
    if !(0.0..=1.0).contains(&transmittivity) {
        return Err(Error::InvalidParameter(format!(
            "transmittivity must lie in [0, 1], got {transmittivity}"
        )));
    }
    let lambda = alpha * alpha;
    let tail_term = (-lambda).exp() * lambda.powi(cutoff as i32) / factorial(cutoff);
    if tail_term >= 1e-12 {
        return Err(Error::Truncation(format!(
            "series term {tail_term:.3e} at cutoff {cutoff}; need at least {}",
            ecs_series_cutoff(alpha)
        )));
    }
    let t = transmittivity;
    let r = 1.0 - t;
    let n_tilde_sq = (-lambda).exp() / (2.0 * (1.0 + (-lambda).exp()));

    // population of |01> and |10>
    let mut a = 0.0;
    for n in 1..=cutoff {
        let weight = lambda.powi(n as i32) / factorial(n);
        let mut inner = 0.0;
        for m in 0..=n {
            inner += binomial(n, m)
                * r.powi(m as i32)
                * t.powi((n - m) as i32)
                * (mu * ((n - m) as f64).sqrt()).sin().powi(2);
        }
        a += weight * inner;
    }
    a *= n_tilde_sq;

    // coherence between |01> and |10>
    let b = n_tilde_sq * t * lambda * mu.sin().powi(2);

    // coherence to |00>
    let mut c_sum = 2.0 * t.sqrt() * alpha * mu.sin();
    for s in 1..=cutoff {
        for m in 0..=s {
            let j = s - m;
            c_sum += alpha.powi((2 * s + 1) as i32) * r.powi(m as i32) * t.powf(j as f64 + 0.5)
                / (factorial(m) * (factorial(j + 1) * factorial(j)).sqrt())
                * (mu * ((j + 1) as f64).sqrt()).sin()
                * (mu * (j as f64).sqrt()).cos();
        }
    }
    let c = C64::new(0.0, -n_tilde_sq * c_sum);

    let layout = SpaceLayout::two_qubits();
    let mut m = DMatrix::<C64>::zeros(4, 4);
    m[(0, 0)] = C64::new(1.0 - 2.0 * a, 0.0);
    m[(1, 1)] = C64::new(a, 0.0);
    m[(2, 2)] = C64::new(a, 0.0);
    m[(1, 2)] = C64::new(b, 0.0);
    m[(2, 1)] = C64::new(b, 0.0);
    m[(1, 0)] = c;
    m[(2, 0)] = c;
    m[(0, 1)] = c.conj();
    m[(0, 2)] = c.conj();
    Ok(DensityOperator::from_matrix_unchecked(layout, m))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, m: usize) -> f64 {
    let m = m.min(n - m);
    let mut b = 1.0f64;
    for k in 0..m {
        b *= (n - k) as f64 / (k + 1) as f64;
    }
    b
}
