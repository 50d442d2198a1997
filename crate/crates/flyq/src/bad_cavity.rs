//! Dissipation-dominated regime: the cavities relax much faster than the
//! atoms couple, the fields are adiabatically eliminated, and the qubits
//! evolve under an effective generator fixed entirely by the second moments
//! of the driving field.
//!
//! The covariance matrix uses quadratures `x = (a + a^dag)/sqrt 2`,
//! `p = (a - a^dag)/(i sqrt 2)` in the order `(x_A, p_A, x_B, p_B)`, without
//! mean subtraction, so the two-mode vacuum gives `diag(1/2, 1/2, 1/2, 1/2)`.
//! The Kossakowski matrix is `K = gamma (M + (i/2) Sigma ^ Sigma)`; with the
//! vacuum normalization above this is positive semidefinite exactly when the
//! uncertainty relation holds, and vacuum driving reduces to plain amplitude
//! damping of each qubit.
//!
//! Time is measured in units of `gamma t`; the module sets `gamma = 1` unless
//! a rate is passed explicitly.

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64 as C64;

use crate::hilbert::{
    annihilation, embed, number_operator, DensityOperator, SpaceLayout, StateVector,
};
use crate::linalg::{kernel_vector, matexp, unvectorize, vectorize};
use crate::{Error, Result};

/// 4x4 real symmetric matrix of symmetrized quadrature second moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(pub Matrix4<f64>);

impl CovarianceMatrix {
    pub fn vacuum() -> Self {
        CovarianceMatrix(Matrix4::from_diagonal_element(0.5))
    }
}

/// Covariance matrix of a two-mode state.
///
/// Errors when the mean photon number of either mode comes within two quanta
/// of the cutoff, where truncated quadrature products are no longer faithful.
pub fn covariance_of(rho: &DensityOperator) -> Result<CovarianceMatrix> {
    let layout = rho.layout().clone();
    if layout.num_factors() != 2 {
        return Err(Error::InvalidLayout(
            "covariance matrix needs a two-mode state".into(),
        ));
    }
    let labels = [layout.factors()[0].0, layout.factors()[1].0];
    let dims = [layout.factors()[0].1, layout.factors()[1].1];

    for k in 0..2 {
        let num = embed(&layout, labels[k], &number_operator(dims[k])?)?;
        let mean_n = (rho.matrix() * num.matrix()).trace().re;
        if mean_n > dims[k] as f64 - 3.0 {
            return Err(Error::Truncation(format!(
                "mean occupation {mean_n:.2} of {} is within two quanta of the cutoff {}",
                labels[k],
                dims[k] - 1
            )));
        }
    }

    let inv_sqrt2 = C64::new(1.0 / 2f64.sqrt(), 0.0);
    let mut quadratures = Vec::with_capacity(4);
    for k in 0..2 {
        let a = embed(&layout, labels[k], &annihilation(dims[k])?)?
            .matrix()
            .clone();
        let x = (&a + a.adjoint()) * inv_sqrt2;
        let p = (&a - a.adjoint()) * inv_sqrt2 * C64::new(0.0, -1.0);
        quadratures.push(x);
        quadratures.push(p);
    }

    let mut m = Matrix4::zeros();
    for i in 0..4 {
        for j in i..4 {
            let prod = &quadratures[i] * &quadratures[j] + &quadratures[j] * &quadratures[i];
            let value = 0.5 * (rho.matrix() * prod).trace().re;
            m[(i, j)] = value;
            m[(j, i)] = value;
        }
    }
    Ok(CovarianceMatrix(m))
}

/// Covariance matrix of a pure two-mode state.
pub fn covariance_of_state(psi: &StateVector) -> Result<CovarianceMatrix> {
    covariance_of(&psi.density())
}

/// Local-symplectic standard form of a covariance matrix: scalar local
/// blocks `n, m` and a diagonal cross block.
///
/// The Kossakowski construction presumes this form; a covariance matrix with
/// unequal x and p variances (the entangled-coherent resource) must be
/// reduced first, by squeezing each mode until its local block is isotropic.
/// Matrices that are already standard (vacuum, N-photon driving) come back
/// unchanged. Only matrices whose local and cross blocks are diagonal are
/// handled, which covers every driving field in this crate.
pub fn standard_form(m: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    let a = m.0;
    for (i, j) in [(0, 1), (2, 3), (0, 3), (1, 2)] {
        if a[(i, j)].abs() > 1e-12 || a[(j, i)].abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "standard-form reduction expects diagonal local and cross blocks".into(),
            ));
        }
    }
    let (axx, app) = (a[(0, 0)], a[(1, 1)]);
    let (bxx, bpp) = (a[(2, 2)], a[(3, 3)]);
    if axx <= 0.0 || app <= 0.0 || bxx <= 0.0 || bpp <= 0.0 {
        return Err(Error::InvalidParameter(
            "covariance matrix has nonpositive variances".into(),
        ));
    }
    // squeeze x -> x/s, p -> p s with s = (xx/pp)^(1/4) per mode
    let s_a = (axx / app).powf(0.25);
    let s_b = (bxx / bpp).powf(0.25);
    let mut out = Matrix4::zeros();
    let n = (axx * app).sqrt();
    let mm = (bxx * bpp).sqrt();
    out[(0, 0)] = n;
    out[(1, 1)] = n;
    out[(2, 2)] = mm;
    out[(3, 3)] = mm;
    let c1 = a[(0, 2)] / (s_a * s_b);
    let c2 = a[(1, 3)] * s_a * s_b;
    out[(0, 2)] = c1;
    out[(2, 0)] = c1;
    out[(1, 3)] = c2;
    out[(3, 1)] = c2;
    Ok(CovarianceMatrix(out))
}

/// Closed-form covariance matrix of the entangled-coherent resource.
pub fn ecs_covariance_closed(alpha: f64) -> Result<CovarianceMatrix> {
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ECS amplitude must be positive, got {alpha}"
        )));
    }
    let a2 = alpha * alpha;
    let e = (-a2).exp();
    let n2 = 1.0 / (2.0 * (1.0 + e));
    let xx = n2 * (a2 + (1.0 + e) * (a2 + 1.0));
    let pp = n2 * (e * (1.0 - a2) + 1.0);
    let cross = n2 * e * a2;
    let mut m = Matrix4::zeros();
    m[(0, 0)] = xx;
    m[(1, 1)] = pp;
    m[(2, 2)] = xx;
    m[(3, 3)] = pp;
    m[(0, 2)] = cross;
    m[(2, 0)] = cross;
    m[(1, 3)] = cross;
    m[(3, 1)] = cross;
    Ok(CovarianceMatrix(m))
}

/// Coefficient matrix of the effective two-qubit generator.
#[derive(Debug, Clone)]
pub struct KossakowskiMatrix {
    /// 4x4 Hermitian matrix, rate factor included.
    pub matrix: Matrix4<C64>,
    pub gamma: f64,
}

/// `K = gamma (M + (i/2) Sigma ^ Sigma)` with `Sigma = [[0, 1], [-1, 0]]` per
/// mode. Positive semidefinite whenever `M` satisfies the uncertainty
/// relation in the convention used here.
pub fn kossakowski(m: &CovarianceMatrix, gamma: f64) -> KossakowskiMatrix {
    let mut k = Matrix4::<C64>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            k[(i, j)] = C64::new(m.0[(i, j)], 0.0);
        }
    }
    let half_i = C64::new(0.0, 0.5);
    for block in 0..2 {
        let o = 2 * block;
        k[(o, o + 1)] += half_i;
        k[(o + 1, o)] -= half_i;
    }
    KossakowskiMatrix {
        matrix: k.map(|z| z * C64::new(gamma, 0.0)),
        gamma,
    }
}

fn sigma_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    )
}

// Pauli y in the ascending (ground, excited) ordering; the sign is fixed so
// that (sigma_x - i sigma_y)/2 lowers |1> to |0>.
fn sigma_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 0.0),
        ],
    )
}

/// Generator of the reduced two-qubit dynamics, acting on column-stacked
/// density matrices.
#[derive(Debug, Clone)]
pub struct ReducedGenerator {
    matrix: DMatrix<C64>,
}

impl ReducedGenerator {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Applies the generator to a two-qubit matrix.
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        unvectorize(&(&self.matrix * vectorize(rho)), 4)
    }
}

/// Builds `sum_ab K_ab (O_a rho O_b - {O_b O_a, rho}/2)` as a 16x16
/// superoperator, with `O_1, O_2` the x and y Pauli operators of qubit 1 and
/// `O_3, O_4` those of qubit 2.
pub fn reduced_generator(k: &KossakowskiMatrix) -> ReducedGenerator {
    let id2 = DMatrix::<C64>::identity(2, 2);
    let ops = [
        sigma_x().kronecker(&id2),
        sigma_y().kronecker(&id2),
        id2.kronecker(&sigma_x()),
        id2.kronecker(&sigma_y()),
    ];
    let id4 = DMatrix::<C64>::identity(4, 4);
    let mut gen = DMatrix::<C64>::zeros(16, 16);
    for a in 0..4 {
        for b in 0..4 {
            let coeff = k.matrix[(a, b)];
            if coeff == C64::new(0.0, 0.0) {
                continue;
            }
            let ba = &ops[b] * &ops[a];
            let sandwich = ops[b].transpose().kronecker(&ops[a]);
            let anti = id4.kronecker(&ba) + ba.transpose().kronecker(&id4);
            gen += (sandwich - anti.map(|z| z * C64::new(0.5, 0.0))).map(|z| z * coeff);
        }
    }
    ReducedGenerator { matrix: gen }
}

/// Propagates an initial two-qubit state along the dimensionless time grid by
/// matrix exponentials of the generator.
pub fn evolve_reduced(
    rho0: &DensityOperator,
    generator: &ReducedGenerator,
    gamma_t_grid: &[f64],
) -> Result<Vec<DensityOperator>> {
    if rho0.layout().total_dim() != 4 {
        return Err(Error::InvalidLayout(
            "reduced dynamics acts on two qubits".into(),
        ));
    }
    let v0 = vectorize(rho0.matrix());
    let mut out = Vec::with_capacity(gamma_t_grid.len());
    for &gt in gamma_t_grid {
        if gt < 0.0 {
            return Err(Error::InvalidParameter("time grid must be nonnegative".into()));
        }
        let propagator = matexp(&self_scaled(generator, gt));
        let v: DVector<C64> = &propagator * &v0;
        let m = unvectorize(&v, 4);
        // symmetrize away the exponential's roundoff
        let m = (&m + m.adjoint()).map(|z| z * C64::new(0.5, 0.0));
        out.push(DensityOperator::from_matrix_unchecked(
            rho0.layout().clone(),
            m,
        ));
    }
    Ok(out)
}

fn self_scaled(generator: &ReducedGenerator, factor: f64) -> DMatrix<C64> {
    generator.matrix.map(|z| z * C64::new(factor, 0.0))
}

/// Unique trace-1 fixed point of the generator, from the SVD kernel of the
/// 16x16 matrix. Errors when the kernel is not one-dimensional.
pub fn steady_state(generator: &ReducedGenerator) -> Result<DensityOperator> {
    let (v, kernel_dim) = kernel_vector(&generator.matrix, 1e-9)?;
    if kernel_dim != 1 {
        return Err(Error::NonUniqueSteadyState(kernel_dim));
    }
    let x = unvectorize(&v, 4);
    let trace = x.trace();
    if trace.norm() < 1e-10 {
        return Err(Error::InvalidState(
            "kernel element of the generator is traceless".into(),
        ));
    }
    let normalized = x.map(|z| z / trace);
    let m = (&normalized + normalized.adjoint()).map(|z| z * C64::new(0.5, 0.0));
    DensityOperator::new(SpaceLayout::two_qubits(), m)
}
