//! Driving-field states and the beam-splitter loading of the cavities.
//!
//! The two-mode resources live on the external factors `a`, `b`. Each arm is
//! coupled into its cavity by a beam splitter of transmittivity `T`; the
//! convention is all-real and transmitting into the cavity, so an input
//! `|n>_ext |0>_cav` maps to
//! `sum_m sqrt(C(n,m)) T^(m/2) R^((n-m)/2) |m>_cav |n-m>_ext`.
//! With this choice the N-photon coherence of the loaded cavities comes out
//! with a positive sign.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::hilbert::{DensityOperator, FactorLabel, SpaceLayout, StateVector};
use crate::{Error, Result};

/// Population left above the cutoff when a coherent state of amplitude
/// `alpha` is truncated to `dim` Fock levels.
pub fn coherent_tail(alpha: f64, dim: usize) -> f64 {
    let lambda = alpha * alpha;
    // 1 - sum_{n < dim} e^{-l} l^n / n!, accumulated stably
    let mut term = (-lambda).exp();
    let mut cumulative = term;
    for n in 1..dim {
        term *= lambda / n as f64;
        cumulative += term;
    }
    (1.0 - cumulative).max(0.0)
}

/// Smallest truncation with coherent tail below 1e-10.
pub fn auto_truncation(alpha: f64) -> usize {
    let mut d = 2;
    while coherent_tail(alpha, d) >= 1e-10 {
        d += 1;
        if d > 512 {
            break;
        }
    }
    d
}

/// Fock amplitudes of a truncated coherent state with real amplitude,
/// `e^(-b^2/2) b^n / sqrt(n!)`. Not renormalized.
pub fn coherent_amplitudes(beta: f64, dim: usize) -> DVector<C64> {
    let mut v = DVector::<C64>::zeros(dim);
    let mut c = (-0.5 * beta * beta).exp();
    v[0] = C64::new(c, 0.0);
    for n in 1..dim {
        c *= beta / (n as f64).sqrt();
        v[n] = C64::new(c, 0.0);
    }
    v
}

fn binomial(n: usize, m: usize) -> f64 {
    let m = m.min(n - m.min(n));
    let mut b = 1.0f64;
    for k in 0..m {
        b *= (n - k) as f64 / (k + 1) as f64;
    }
    b
}

/// Two-mode driving field.
#[derive(Debug, Clone)]
pub struct DrivingResource {
    kind: ResourceKind,
    truncation: usize,
}

#[derive(Debug, Clone)]
pub enum ResourceKind {
    /// `(|N0> + |0N>)/sqrt(2)`.
    Noon { photons: u32 },
    /// `N_alpha (|alpha 0> + |0 alpha>)`, real amplitude.
    Ecs { alpha: f64 },
    /// Arbitrary two-mode pure state on the external factors.
    Custom { state: StateVector },
}

impl DrivingResource {
    /// NOON resource with the minimal truncation `N + 1`.
    pub fn noon(photons: u32) -> Self {
        Self {
            kind: ResourceKind::Noon { photons },
            truncation: photons as usize + 1,
        }
    }

    /// NOON resource padded to a larger cutoff.
    pub fn noon_with_truncation(photons: u32, truncation: usize) -> Result<Self> {
        if truncation <= photons as usize {
            return Err(Error::Truncation(format!(
                "NOON with {photons} photons needs truncation > {photons}, got {truncation}"
            )));
        }
        Ok(Self {
            kind: ResourceKind::Noon { photons },
            truncation,
        })
    }

    /// Entangled-coherent resource at the automatic cutoff.
    pub fn ecs(alpha: f64) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ECS amplitude must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            kind: ResourceKind::Ecs { alpha },
            truncation: auto_truncation(alpha),
        })
    }

    /// Entangled-coherent resource at an explicit cutoff, which must keep the
    /// truncated tail below 1e-10.
    pub fn ecs_with_truncation(alpha: f64, truncation: usize) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ECS amplitude must be positive, got {alpha}"
            )));
        }
        let tail = coherent_tail(alpha, truncation);
        if tail >= 1e-10 {
            return Err(Error::Truncation(format!(
                "ECS tail {tail:.3e} at truncation {truncation}; need at least {}",
                auto_truncation(alpha)
            )));
        }
        Ok(Self {
            kind: ResourceKind::Ecs { alpha },
            truncation,
        })
    }

    pub fn custom(state: StateVector) -> Result<Self> {
        if state.layout().num_factors() != 2 {
            return Err(Error::InvalidLayout(
                "custom resource must be a two-mode state".into(),
            ));
        }
        let truncation = state.layout().factors()[0].1;
        Ok(Self {
            kind: ResourceKind::Custom { state },
            truncation,
        })
    }

    pub fn kind(&self) -> &ResourceKind {
        &self.kind
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// The resource as a pure state on the external modes.
    pub fn two_mode_state(&self) -> Result<StateVector> {
        match &self.kind {
            ResourceKind::Noon { photons } => make_noon(*photons, self.truncation),
            ResourceKind::Ecs { alpha } => make_ecs(*alpha, self.truncation),
            ResourceKind::Custom { state } => Ok(state.clone()),
        }
    }
}

fn two_mode_layout(dim: usize) -> SpaceLayout {
    SpaceLayout::new(vec![
        (FactorLabel::ExternalA, dim),
        (FactorLabel::ExternalB, dim),
    ])
    .unwrap()
}

/// `(|N0> + |0N>)/sqrt(2)` on two modes, `|00>` for N = 0.
pub fn make_noon(photons: u32, dim: usize) -> Result<StateVector> {
    let n = photons as usize;
    if dim <= n {
        return Err(Error::Truncation(format!(
            "NOON with {n} photons needs truncation > {n}, got {dim}"
        )));
    }
    let layout = two_mode_layout(dim);
    let mut amps = DVector::<C64>::zeros(layout.total_dim());
    if n == 0 {
        amps[0] = C64::new(1.0, 0.0);
    } else {
        let w = C64::new(1.0 / 2f64.sqrt(), 0.0);
        amps[layout.flat_index(&[n, 0])] = w;
        amps[layout.flat_index(&[0, n])] = w;
    }
    StateVector::new(layout, amps)
}

/// `N_alpha (|alpha 0> + |0 alpha>)` expanded in the truncated Fock basis.
/// Amplitudes follow `N_alpha e^(-a^2/2) a^n / sqrt(n!)` on `|n0>` and `|0n>`;
/// the norm is within 1e-9 of one when the tail condition holds.
pub fn make_ecs(alpha: f64, dim: usize) -> Result<StateVector> {
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ECS amplitude must be positive, got {alpha}"
        )));
    }
    let tail = coherent_tail(alpha, dim);
    if tail >= 1e-10 {
        return Err(Error::Truncation(format!(
            "ECS tail {tail:.3e} at truncation {dim}; need at least {}",
            auto_truncation(alpha)
        )));
    }
    let norm_const = 1.0 / (2.0 * (1.0 + (-alpha * alpha).exp())).sqrt();
    let layout = two_mode_layout(dim);
    let coh = coherent_amplitudes(alpha, dim);
    let mut amps = DVector::<C64>::zeros(layout.total_dim());
    for n in 0..dim {
        amps[layout.flat_index(&[n, 0])] += coh[n] * C64::new(norm_const, 0.0);
        amps[layout.flat_index(&[0, n])] += coh[n] * C64::new(norm_const, 0.0);
    }
    StateVector::new_unnormalized(layout, amps)
}

/// Beam-splitter coupling of one driving arm into one cavity.
#[derive(Debug, Clone, Copy)]
pub struct CavityLoad {
    transmittivity: f64,
}

impl CavityLoad {
    pub fn new(transmittivity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmittivity) {
            return Err(Error::InvalidParameter(format!(
                "transmittivity must lie in [0, 1], got {transmittivity}"
            )));
        }
        Ok(Self { transmittivity })
    }

    pub fn transmittivity(&self) -> f64 {
        self.transmittivity
    }

    pub fn reflectivity(&self) -> f64 {
        1.0 - self.transmittivity
    }
}

/// Applies the loading beam splitter to a pure state whose cavity factor is in
/// vacuum. Photons move from the external factor into the cavity factor.
pub fn apply_loading(
    state: &StateVector,
    cavity: FactorLabel,
    external: FactorLabel,
    load: CavityLoad,
) -> Result<StateVector> {
    let layout = state.layout().clone();
    let cav_pos = layout
        .position_of(cavity)
        .ok_or_else(|| Error::InvalidLayout(format!("label {cavity} not in layout")))?;
    let ext_pos = layout
        .position_of(external)
        .ok_or_else(|| Error::InvalidLayout(format!("label {external} not in layout")))?;
    let cav_dim = layout.factors()[cav_pos].1;
    let ext_dim = layout.factors()[ext_pos].1;
    if cav_dim < ext_dim {
        return Err(Error::Truncation(format!(
            "cavity factor {cavity} (dim {cav_dim}) cannot hold {ext_dim} external levels"
        )));
    }
    let cav_stride = layout.stride(cav_pos);
    let ext_stride = layout.stride(ext_pos);
    let t = load.transmittivity();
    let r = load.reflectivity();

    let dim = layout.total_dim();
    let input = state.amplitudes();
    let mut out = DVector::<C64>::zeros(dim);
    for flat in 0..dim {
        let amp = input[flat];
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        let cav_n = (flat / cav_stride) % cav_dim;
        if cav_n != 0 {
            return Err(Error::InvalidState(format!(
                "loading requires cavity {cavity} in vacuum, found population on level {cav_n}"
            )));
        }
        let n = (flat / ext_stride) % ext_dim;
        for m in 0..=n {
            let coeff = binomial(n, m).sqrt()
                * t.powf(m as f64 / 2.0)
                * r.powf((n - m) as f64 / 2.0);
            if coeff == 0.0 {
                continue;
            }
            let dest = flat + m * cav_stride - m * ext_stride;
            out[dest] += amp * C64::new(coeff, 0.0);
        }
    }
    StateVector::new_unnormalized(layout, out)
}

/// Loads both cavities from the resource and traces out the external modes.
pub fn load_cavities(resource: &DrivingResource, load: CavityLoad) -> Result<DensityOperator> {
    let d = resource.truncation();
    let layout = SpaceLayout::new(vec![
        (FactorLabel::CavityA, d),
        (FactorLabel::CavityB, d),
        (FactorLabel::ExternalA, d),
        (FactorLabel::ExternalB, d),
    ])?;
    let res = resource.two_mode_state()?;
    // embed |00>_AB tensor resource_ab
    let mut amps = DVector::<C64>::zeros(layout.total_dim());
    let res_layout = res.layout();
    for flat in 0..res_layout.total_dim() {
        let na = res_layout.component(flat, 0);
        let nb = res_layout.component(flat, 1);
        amps[layout.flat_index(&[0, 0, na, nb])] = res.amplitudes()[flat];
    }
    let full = StateVector::new_unnormalized(layout, amps)?;
    let loaded = apply_loading(&full, FactorLabel::CavityA, FactorLabel::ExternalA, load)?;
    let loaded = apply_loading(&loaded, FactorLabel::CavityB, FactorLabel::ExternalB, load)?;
    loaded.reduced_density(&[FactorLabel::CavityA, FactorLabel::CavityB])
}

/// Loaded cavity state for NOON driving, in closed form: a binomial mixture of
/// `|m0>, |0m>` populations plus the N-photon coherence `(T^N/2)(|N0><0N| + h.c.)`.
pub fn noon_cavity_closed_form(photons: u32, transmittivity: f64, dim: usize) -> Result<DensityOperator> {
    let n = photons as usize;
    if dim <= n {
        return Err(Error::Truncation(format!(
            "NOON with {n} photons needs truncation > {n}, got {dim}"
        )));
    }
    let load = CavityLoad::new(transmittivity)?;
    let t = load.transmittivity();
    let r = load.reflectivity();
    let layout = SpaceLayout::new(vec![
        (FactorLabel::CavityA, dim),
        (FactorLabel::CavityB, dim),
    ])?;
    let mut m_out = DMatrix::<C64>::zeros(layout.total_dim(), layout.total_dim());
    if n == 0 {
        m_out[(0, 0)] = C64::new(1.0, 0.0);
        return Ok(DensityOperator::from_matrix_unchecked(layout, m_out));
    }
    for m in 0..=n {
        let w = 0.5 * binomial(n, m) * r.powi((n - m) as i32) * t.powi(m as i32);
        let ia = layout.flat_index(&[m, 0]);
        let ib = layout.flat_index(&[0, m]);
        m_out[(ia, ia)] += C64::new(w, 0.0);
        m_out[(ib, ib)] += C64::new(w, 0.0);
    }
    let coherence = 0.5 * t.powi(n as i32);
    let i_n0 = layout.flat_index(&[n, 0]);
    let i_0n = layout.flat_index(&[0, n]);
    m_out[(i_n0, i_0n)] += C64::new(coherence, 0.0);
    m_out[(i_0n, i_n0)] += C64::new(coherence, 0.0);
    Ok(DensityOperator::from_matrix_unchecked(layout, m_out))
}

/// Loaded cavity state for ECS driving, in closed form. A coherent state
/// splits on the beam splitter into `|sqrt(T) a>_cav |sqrt(R) a>_ext`, so the
/// inter-arm coherence is damped by `e^(-R a^2)`.
pub fn ecs_cavity_closed_form(alpha: f64, transmittivity: f64, dim: usize) -> Result<DensityOperator> {
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ECS amplitude must be positive, got {alpha}"
        )));
    }
    let load = CavityLoad::new(transmittivity)?;
    let beta = load.transmittivity().sqrt() * alpha;
    let tail = coherent_tail(beta, dim);
    if tail >= 1e-10 {
        return Err(Error::Truncation(format!(
            "transmitted coherent tail {tail:.3e} at truncation {dim}; need at least {}",
            auto_truncation(beta)
        )));
    }
    let layout = SpaceLayout::new(vec![
        (FactorLabel::CavityA, dim),
        (FactorLabel::CavityB, dim),
    ])?;
    let norm2 = 1.0 / (2.0 * (1.0 + (-alpha * alpha).exp()));
    let kappa = (-load.reflectivity() * alpha * alpha).exp();
    let coh = coherent_amplitudes(beta, dim);
    let mut vac = DVector::<C64>::zeros(dim);
    vac[0] = C64::new(1.0, 0.0);
    let u = StateVector::product(layout.clone(), &[coh.clone(), vac.clone()])?;
    let v = StateVector::product(layout.clone(), &[vac, coh])?;
    let uu = u.amplitudes() * u.amplitudes().adjoint();
    let vv = v.amplitudes() * v.amplitudes().adjoint();
    let uv = u.amplitudes() * v.amplitudes().adjoint();
    let vu = v.amplitudes() * u.amplitudes().adjoint();
    let m = (uu + vv + (uv + vu).map(|z| z * C64::new(kappa, 0.0))).map(|z| z * C64::new(norm2, 0.0));
    Ok(DensityOperator::from_matrix_unchecked(layout, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{embed, number_operator};
    use crate::linalg::max_abs_diff;
    use approx::assert_relative_eq;

    #[test]
    fn noon_amplitudes() {
        let s = make_noon(1, 4).unwrap();
        let l = s.layout().clone();
        let w = 1.0 / 2f64.sqrt();
        assert_relative_eq!(s.amplitudes()[l.flat_index(&[1, 0])].re, w, epsilon = 1e-15);
        assert_relative_eq!(s.amplitudes()[l.flat_index(&[0, 1])].re, w, epsilon = 1e-15);

        let vac = make_noon(0, 2).unwrap();
        assert_relative_eq!(vac.amplitudes()[0].re, 1.0, epsilon = 1e-15);

        let s3 = make_noon(3, 6).unwrap();
        assert_relative_eq!(s3.norm(), 1.0, epsilon = 1e-12);
        let l3 = s3.layout().clone();
        for flat in 0..l3.total_dim() {
            let amp = s3.amplitudes()[flat].norm();
            if flat == l3.flat_index(&[3, 0]) || flat == l3.flat_index(&[0, 3]) {
                assert!(amp > 0.0);
            } else {
                assert_eq!(amp, 0.0);
            }
        }

        assert!(make_noon(3, 3).is_err());
    }

    #[test]
    fn ecs_limits_and_norm() {
        // vacuum limit
        let s = make_ecs(1e-8, 4).unwrap();
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-7);

        let s = make_ecs(1.1, 18).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ecs_single_photon_amplitude_matches_direct_formula() {
        let alpha = 1.0f64;
        let d = auto_truncation(alpha);
        let s = make_ecs(alpha, d).unwrap();
        let l = s.layout().clone();
        let n_alpha = 1.0 / (2.0 * (1.0 + (-1.0f64).exp())).sqrt();
        let expected = n_alpha * (-0.5f64).exp() * alpha;
        assert_relative_eq!(
            s.amplitudes()[l.flat_index(&[1, 0])].re,
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ecs_truncation_errors_name_required_cutoff() {
        let err = make_ecs(1.1, 4).unwrap_err();
        match err {
            Error::Truncation(msg) => assert!(msg.contains("need at least")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn loading_noon_single_photon() {
        // expected: R |00><00| + T |psi+><psi+|
        let resource = DrivingResource::noon_with_truncation(1, 3).unwrap();
        let load = CavityLoad::new(0.9).unwrap();
        let rho = load_cavities(&resource, load).unwrap();
        let l = rho.layout().clone();
        let i00 = l.flat_index(&[0, 0]);
        let i10 = l.flat_index(&[1, 0]);
        let i01 = l.flat_index(&[0, 1]);
        assert_relative_eq!(rho.matrix()[(i00, i00)].re, 0.1, epsilon = 1e-12);
        assert_relative_eq!(rho.matrix()[(i10, i10)].re, 0.45, epsilon = 1e-12);
        assert_relative_eq!(rho.matrix()[(i01, i01)].re, 0.45, epsilon = 1e-12);
        assert_relative_eq!(rho.matrix()[(i10, i01)].re, 0.45, epsilon = 1e-12);
    }

    #[test]
    fn loading_extremes() {
        // T = 1: pure cavity state equal to the resource
        let resource = DrivingResource::noon_with_truncation(2, 4).unwrap();
        let rho = load_cavities(&resource, CavityLoad::new(1.0).unwrap()).unwrap();
        let res_state = resource.two_mode_state().unwrap();
        let pure = res_state.amplitudes() * res_state.amplitudes().adjoint();
        assert!(max_abs_diff(rho.matrix(), &pure) < 1e-13);

        // T = 0: nothing enters
        let rho0 = load_cavities(&resource, CavityLoad::new(0.0).unwrap()).unwrap();
        assert_relative_eq!(rho0.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_matches_loading_for_noon() {
        for n in 1..=4u32 {
            for &t in &[0.3, 0.9] {
                let resource = DrivingResource::noon_with_truncation(n, n as usize + 1).unwrap();
                let via_load = load_cavities(&resource, CavityLoad::new(t).unwrap()).unwrap();
                let closed = noon_cavity_closed_form(n, t, n as usize + 1).unwrap();
                assert!(
                    max_abs_diff(via_load.matrix(), closed.matrix()) < 1e-12,
                    "mismatch at N={n}, T={t}"
                );
            }
        }
    }

    #[test]
    fn noon_closed_form_spot_values() {
        // N=2, T=0.9: weight of |20><20| is 0.81/2, coherence entry 0.405
        let rho = noon_cavity_closed_form(2, 0.9, 3).unwrap();
        let l = rho.layout().clone();
        let i20 = l.flat_index(&[2, 0]);
        let i02 = l.flat_index(&[0, 2]);
        assert_relative_eq!(rho.matrix()[(i20, i20)].re, 0.405, epsilon = 1e-14);
        assert_relative_eq!(rho.matrix()[(i20, i02)].re, 0.405, epsilon = 1e-14);

        // N=1, T=1 is the pure one-photon Bell-like state
        let rho = noon_cavity_closed_form(1, 1.0, 2).unwrap();
        let l = rho.layout().clone();
        let i10 = l.flat_index(&[1, 0]);
        let i01 = l.flat_index(&[0, 1]);
        assert_relative_eq!(rho.matrix()[(i10, i01)].re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_matches_loading_for_ecs() {
        // entrywise agreement needs a cutoff padded beyond the norm-level
        // default: the last retained Fock amplitude must itself be < 1e-9
        let alpha = 1.1;
        let d = auto_truncation(alpha) + 8;
        let resource = DrivingResource::ecs_with_truncation(alpha, d).unwrap();
        let via_load = load_cavities(&resource, CavityLoad::new(0.9).unwrap()).unwrap();
        let closed = ecs_cavity_closed_form(alpha, 0.9, d).unwrap();
        assert!(max_abs_diff(via_load.matrix(), closed.matrix()) < 1e-10);
    }

    #[test]
    fn ecs_closed_form_extremes() {
        // T = 1 gives the pure ECS on the cavities
        let alpha = 0.8;
        let d = auto_truncation(alpha);
        let closed = ecs_cavity_closed_form(alpha, 1.0, d).unwrap();
        let resource = DrivingResource::ecs_with_truncation(alpha, d).unwrap();
        let ecs = resource.two_mode_state().unwrap();
        let pure = ecs.amplitudes() * ecs.amplitudes().adjoint();
        assert!(max_abs_diff(closed.matrix(), &pure) < 1e-10);

        // coherence damping factor at alpha = 1, R = 0.1
        let expected = (-0.1f64).exp();
        let d = auto_truncation(1.0);
        let closed = ecs_cavity_closed_form(1.0, 0.9, d).unwrap();
        let l = closed.layout().clone();
        let norm2 = 1.0 / (2.0 * (1.0 + (-1.0f64).exp()));
        let coh0 = coherent_amplitudes(0.9f64.sqrt(), d)[0].re;
        let entry = closed.matrix()[(l.flat_index(&[0, 0]), l.flat_index(&[0, 0]))].re;
        // |00><00| entry carries 2 N^2 c0^2 (1 + kappa)/2 pieces; check the damping factor
        let kappa = (entry / (norm2 * coh0 * coh0) - 2.0) / 2.0;
        assert_relative_eq!(kappa, expected, epsilon = 1e-12);
    }

    #[test]
    fn loading_is_trace_preserving_and_positive() {
        for &t in &[0.0, 0.3, 0.7, 1.0] {
            let resource = DrivingResource::ecs_with_truncation(0.8, auto_truncation(0.8)).unwrap();
            let rho = load_cavities(&resource, CavityLoad::new(t).unwrap()).unwrap();
            let trace = rho.trace();
            assert!((trace.re - 1.0).abs() < 1e-9);
            assert!(crate::linalg::min_eigenvalue(rho.matrix()).unwrap() > -1e-10);
        }
    }

    #[test]
    fn photon_bookkeeping_through_the_beam_splitter() {
        let resource = DrivingResource::noon_with_truncation(3, 5).unwrap();
        let state = resource.two_mode_state().unwrap();
        let l_in = state.layout().clone();
        let n_a = embed(&l_in, FactorLabel::ExternalA, &number_operator(5).unwrap()).unwrap();
        let n_b = embed(&l_in, FactorLabel::ExternalB, &number_operator(5).unwrap()).unwrap();
        let n_in = state.expectation(&n_a).unwrap().re + state.expectation(&n_b).unwrap().re;

        for &t in &[0.25, 0.6, 1.0] {
            let rho = load_cavities(&resource, CavityLoad::new(t).unwrap()).unwrap();
            let l = rho.layout().clone();
            let num_a = embed(&l, FactorLabel::CavityA, &number_operator(5).unwrap()).unwrap();
            let num_b = embed(&l, FactorLabel::CavityB, &number_operator(5).unwrap()).unwrap();
            let n_out = (rho.matrix() * num_a.matrix()).trace().re
                + (rho.matrix() * num_b.matrix()).trace().re;
            assert_relative_eq!(n_out, t * n_in, epsilon = 1e-10);
        }
    }
}
