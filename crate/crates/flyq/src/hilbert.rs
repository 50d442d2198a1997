//! Dense linear algebra over tensor products of qubit and truncated bosonic
//! factors.
//!
//! A [`SpaceLayout`] fixes the ordered list of factors; amplitudes are stored
//! flat with the index of the last factor varying fastest (row-major tensor
//! convention). Two-qubit matrices therefore come out in the ascending basis
//! order `|00>, |01>, |10>, |11>`; use [`to_descending_qubit_basis`] when a
//! matrix should be displayed with `|11>` first.
//!
//! All types are immutable values after construction and safe to share across
//! threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::linalg::{hermitian_eigen, min_eigenvalue};
use crate::{Error, Result};

/// Role tag of a tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorLabel {
    Qubit1,
    Qubit2,
    CavityA,
    CavityB,
    ExternalA,
    ExternalB,
}

impl std::fmt::Display for FactorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FactorLabel::Qubit1 => "qubit1",
            FactorLabel::Qubit2 => "qubit2",
            FactorLabel::CavityA => "cavityA",
            FactorLabel::CavityB => "cavityB",
            FactorLabel::ExternalA => "external-a",
            FactorLabel::ExternalB => "external-b",
        };
        write!(f, "{s}")
    }
}

/// Ordered list of tensor factors with their dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceLayout {
    factors: Vec<(FactorLabel, usize)>,
}

impl SpaceLayout {
    /// Builds a layout, checking that labels are unique and dimensions >= 2.
    pub fn new(factors: Vec<(FactorLabel, usize)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidLayout("layout needs at least one factor".into()));
        }
        for (label, dim) in &factors {
            if *dim < 2 {
                return Err(Error::InvalidDimension(format!(
                    "factor {label} has dimension {dim}, need >= 2"
                )));
            }
        }
        for i in 0..factors.len() {
            for j in (i + 1)..factors.len() {
                if factors[i].0 == factors[j].0 {
                    return Err(Error::InvalidLayout(format!(
                        "duplicate factor label {}",
                        factors[i].0
                    )));
                }
            }
        }
        Ok(Self { factors })
    }

    /// Two-qubit layout, the target space of every reduced atomic state.
    pub fn two_qubits() -> Self {
        Self::new(vec![(FactorLabel::Qubit1, 2), (FactorLabel::Qubit2, 2)]).unwrap()
    }

    pub fn factors(&self) -> &[(FactorLabel, usize)] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| d).product()
    }

    pub fn position_of(&self, label: FactorLabel) -> Option<usize> {
        self.factors.iter().position(|(l, _)| *l == label)
    }

    pub fn dim_of(&self, label: FactorLabel) -> Option<usize> {
        self.factors
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, d)| *d)
    }

    /// Stride of factor `pos`: the flat index advances by this much when the
    /// factor's index increments. Last factor has stride 1.
    pub fn stride(&self, pos: usize) -> usize {
        self.factors[pos + 1..].iter().map(|(_, d)| d).product()
    }

    pub fn strides(&self) -> Vec<usize> {
        (0..self.factors.len()).map(|p| self.stride(p)).collect()
    }

    /// Flat index of a multi-index (one entry per factor, in layout order).
    pub fn flat_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.factors.len());
        multi
            .iter()
            .zip(self.strides())
            .map(|(i, s)| i * s)
            .sum()
    }

    /// Component of `flat` along factor `pos`.
    pub fn component(&self, flat: usize, pos: usize) -> usize {
        (flat / self.stride(pos)) % self.factors[pos].1
    }

    /// Sub-layout of the given labels, kept in their original order.
    pub fn keep(&self, labels: &[FactorLabel]) -> Result<SpaceLayout> {
        if labels.is_empty() {
            return Err(Error::InvalidLayout("cannot keep an empty factor set".into()));
        }
        for l in labels {
            if self.position_of(*l).is_none() {
                return Err(Error::InvalidLayout(format!("label {l} not in layout")));
            }
        }
        let kept: Vec<_> = self
            .factors
            .iter()
            .filter(|(l, _)| labels.contains(l))
            .cloned()
            .collect();
        SpaceLayout::new(kept)
    }

    /// For a factor split, returns (kept positions, traced positions).
    fn split_positions(&self, keep: &[FactorLabel]) -> (Vec<usize>, Vec<usize>) {
        let kept: Vec<usize> = (0..self.factors.len())
            .filter(|p| keep.contains(&self.factors[*p].0))
            .collect();
        let rest: Vec<usize> = (0..self.factors.len())
            .filter(|p| !kept.contains(p))
            .collect();
        (kept, rest)
    }

    /// Flat-index offsets of every multi-index over the given factor positions,
    /// enumerated in the row-major order of those factors.
    fn offsets_over(&self, positions: &[usize]) -> Vec<usize> {
        let dims: Vec<usize> = positions.iter().map(|&p| self.factors[p].1).collect();
        let strides: Vec<usize> = positions.iter().map(|&p| self.stride(p)).collect();
        let count: usize = dims.iter().product::<usize>().max(1);
        let mut offsets = Vec::with_capacity(count);
        let mut idx = vec![0usize; positions.len()];
        for _ in 0..count {
            offsets.push(idx.iter().zip(&strides).map(|(i, s)| i * s).sum());
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        offsets
    }
}

/// Pure state on a [`SpaceLayout`].
///
/// Unit norm within 1e-12, except for the unnormalized states that occur in
/// the middle of a quantum-jump trajectory (norm in (0, 1]).
#[derive(Debug, Clone)]
pub struct StateVector {
    layout: SpaceLayout,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(layout: SpaceLayout, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector has length {}, layout dimension is {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "state norm {norm} deviates from 1 by more than 1e-12"
            )));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Accepts any norm in (0, 1 + 1e-12]; used for mid-trajectory states.
    pub fn new_unnormalized(layout: SpaceLayout, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector has length {}, layout dimension is {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if norm <= 0.0 || norm > 1.0 + 1e-12 {
            return Err(Error::InvalidState(format!(
                "state norm {norm} outside (0, 1]"
            )));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Basis state with the given index in each factor.
    pub fn basis(layout: SpaceLayout, multi: &[usize]) -> Result<Self> {
        if multi.len() != layout.num_factors() {
            return Err(Error::DimensionMismatch(
                "one index per factor required".into(),
            ));
        }
        for (k, &i) in multi.iter().enumerate() {
            if i >= layout.factors[k].1 {
                return Err(Error::InvalidDimension(format!(
                    "index {i} out of range for factor {}",
                    layout.factors[k].0
                )));
            }
        }
        let flat = layout.flat_index(multi);
        let mut amplitudes = DVector::zeros(layout.total_dim());
        amplitudes[flat] = C64::new(1.0, 0.0);
        Ok(Self { layout, amplitudes })
    }

    /// Tensor product of one amplitude vector per factor.
    pub fn product(layout: SpaceLayout, parts: &[DVector<C64>]) -> Result<Self> {
        if parts.len() != layout.num_factors() {
            return Err(Error::DimensionMismatch(
                "one amplitude vector per factor required".into(),
            ));
        }
        for (k, part) in parts.iter().enumerate() {
            if part.len() != layout.factors[k].1 {
                return Err(Error::DimensionMismatch(format!(
                    "factor {} has dimension {}, got vector of length {}",
                    layout.factors[k].0,
                    layout.factors[k].1,
                    part.len()
                )));
            }
        }
        let dim = layout.total_dim();
        let strides = layout.strides();
        let mut amplitudes = DVector::from_element(dim, C64::new(1.0, 0.0));
        for flat in 0..dim {
            let mut a = C64::new(1.0, 0.0);
            for (k, part) in parts.iter().enumerate() {
                a *= part[(flat / strides[k]) % layout.factors[k].1];
            }
            amplitudes[flat] = a;
        }
        StateVector::new_unnormalized(layout, amplitudes)
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        StateVector {
            layout: self.layout.clone(),
            amplitudes: self.amplitudes.map(|z| z / C64::new(n, 0.0)),
        }
    }

    /// Density operator of the normalized state.
    pub fn density(&self) -> DensityOperator {
        let v = self.normalized();
        let m = &v.amplitudes * v.amplitudes.adjoint();
        DensityOperator::from_matrix_unchecked(self.layout.clone(), m)
    }

    /// Reduced density operator on the kept factors, computed directly from
    /// the amplitudes without forming the full density matrix.
    ///
    /// The state is normalized first, so mid-trajectory states yield physical
    /// reduced states.
    pub fn reduced_density(&self, keep: &[FactorLabel]) -> Result<DensityOperator> {
        let kept_layout = self.layout.keep(keep)?;
        let (kept_pos, rest_pos) = self.layout.split_positions(keep);
        let keep_offsets = self.layout.offsets_over(&kept_pos);
        let rest_offsets = self.layout.offsets_over(&rest_pos);
        let k_dim = keep_offsets.len();
        let r_dim = rest_offsets.len();
        let norm = self.norm();
        // amplitude matrix with kept index as row, traced index as column
        let mut a = DMatrix::<C64>::zeros(k_dim, r_dim);
        for (ki, &ko) in keep_offsets.iter().enumerate() {
            for (ri, &ro) in rest_offsets.iter().enumerate() {
                a[(ki, ri)] = self.amplitudes[ko + ro] / C64::new(norm, 0.0);
            }
        }
        let rho = &a * a.adjoint();
        Ok(DensityOperator::from_matrix_unchecked(kept_layout, rho))
    }

    /// Expectation value of an operator on the full space (state need not be
    /// normalized; the value is divided by the squared norm).
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<C64> {
        if op.layout != self.layout {
            return Err(Error::DimensionMismatch(
                "operator and state layouts differ".into(),
            ));
        }
        let n2 = self.amplitudes.norm_squared();
        Ok(self.amplitudes.dotc(&(&op.matrix * &self.amplitudes)) / C64::new(n2, 0.0))
    }
}

/// Mixed state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    layout: SpaceLayout,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Checked constructor: Hermitian within 1e-12, trace 1 within 1e-10,
    /// smallest eigenvalue >= -1e-10.
    pub fn new(layout: SpaceLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = layout.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, layout dimension is {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm_dev = crate::linalg::max_abs_diff(&matrix, &matrix.adjoint());
        if herm_dev > 1e-12 {
            return Err(Error::InvalidState(format!(
                "Hermiticity deviation {herm_dev:.3e} exceeds 1e-12"
            )));
        }
        let trace_dev = (matrix.trace() - C64::new(1.0, 0.0)).norm();
        if trace_dev > 1e-10 {
            return Err(Error::InvalidState(format!(
                "trace deviation {trace_dev:.3e} exceeds 1e-10"
            )));
        }
        let lambda_min = min_eigenvalue(&matrix)?;
        if lambda_min < -1e-10 {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {lambda_min:.3e} below -1e-10"
            )));
        }
        Ok(Self { layout, matrix })
    }

    /// Constructor for matrices produced internally. In debug builds the
    /// result is still validated (Hermiticity 1e-10, trace 1e-9, smallest
    /// eigenvalue > -1e-8).
    pub fn from_matrix_unchecked(layout: SpaceLayout, matrix: DMatrix<C64>) -> Self {
        let out = Self { layout, matrix };
        out.debug_validate();
        out
    }

    #[inline]
    fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        {
            let herm_dev = crate::linalg::max_abs_diff(&self.matrix, &self.matrix.adjoint());
            debug_assert!(
                herm_dev < 1e-10,
                "density operator Hermiticity deviation {herm_dev:.3e}"
            );
            let trace_dev = (self.matrix.trace() - C64::new(1.0, 0.0)).norm();
            debug_assert!(
                trace_dev < 1e-9,
                "density operator trace deviation {trace_dev:.3e}"
            );
            let lambda_min = min_eigenvalue(&self.matrix).expect("eigensolver");
            debug_assert!(
                lambda_min > -1e-8,
                "density operator smallest eigenvalue {lambda_min:.3e}"
            );
        }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Spectral decomposition into pure states with weights above `tol`.
    pub fn pure_decomposition(&self, tol: f64) -> Result<Vec<(f64, StateVector)>> {
        let (values, vectors) = hermitian_eigen(&self.matrix)?;
        let mut parts = Vec::new();
        for k in 0..values.len() {
            let p = values[k];
            if p > tol {
                let v: DVector<C64> = vectors.column(k).into_owned();
                let sv = StateVector::new(self.layout.clone(), v.normalize())?;
                parts.push((p, sv));
            }
        }
        Ok(parts)
    }

    /// Partial trace onto the kept factors (original order preserved).
    pub fn partial_trace(&self, keep: &[FactorLabel]) -> Result<DensityOperator> {
        let kept_layout = self.layout.keep(keep)?;
        let (kept_pos, rest_pos) = self.layout.split_positions(keep);
        let keep_offsets = self.layout.offsets_over(&kept_pos);
        let rest_offsets = self.layout.offsets_over(&rest_pos);
        let k_dim = keep_offsets.len();
        let mut out = DMatrix::<C64>::zeros(k_dim, k_dim);
        for (i, &ko_i) in keep_offsets.iter().enumerate() {
            for (j, &ko_j) in keep_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &ro in &rest_offsets {
                    acc += self.matrix[(ko_i + ro, ko_j + ro)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityOperator::from_matrix_unchecked(kept_layout, out))
    }

    /// Partial transpose with respect to one factor. The result is Hermitian
    /// and trace-1 but in general not positive, hence an [`OperatorMatrix`].
    pub fn partial_transpose(&self, factor: FactorLabel) -> Result<OperatorMatrix> {
        let pos = self
            .layout
            .position_of(factor)
            .ok_or_else(|| Error::InvalidLayout(format!("label {factor} not in layout")))?;
        let stride = self.layout.stride(pos);
        let d = self.layout.factors[pos].1;
        let dim = self.layout.total_dim();
        let mut out = DMatrix::<C64>::zeros(dim, dim);
        for i in 0..dim {
            let a = (i / stride) % d;
            for j in 0..dim {
                let b = (j / stride) % d;
                // swap the factor component between row and column
                let src_i = (i as isize + (b as isize - a as isize) * stride as isize) as usize;
                let src_j = (j as isize + (a as isize - b as isize) * stride as isize) as usize;
                out[(i, j)] = self.matrix[(src_i, src_j)];
            }
        }
        Ok(OperatorMatrix {
            layout: self.layout.clone(),
            matrix: out,
        })
    }
}

/// Operator on the full tensor space described by a layout.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    layout: SpaceLayout,
    matrix: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn new(layout: SpaceLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = layout.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, layout dimension is {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { layout, matrix })
    }

    pub fn identity(layout: SpaceLayout) -> Self {
        let dim = layout.total_dim();
        Self {
            layout,
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Smallest eigenvalue, meaningful for Hermitian operators such as
    /// partial transposes.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.matrix)
    }
}

/// Bosonic annihilation operator on a single truncated mode: entries
/// `(n-1, n) = sqrt(n)`.
pub fn annihilation(dim: usize) -> Result<DMatrix<C64>> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!(
            "annihilation needs dimension >= 2, got {dim}"
        )));
    }
    let mut a = DMatrix::<C64>::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(a)
}

/// Photon-number operator on a single truncated mode.
pub fn number_operator(dim: usize) -> Result<DMatrix<C64>> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!(
            "number operator needs dimension >= 2, got {dim}"
        )));
    }
    Ok(DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        (0..dim).map(|n| C64::new(n as f64, 0.0)),
    )))
}

/// Embeds a single-factor operator into the full space: identity on every
/// other factor, `op` on the target.
pub fn embed(layout: &SpaceLayout, target: FactorLabel, op: &DMatrix<C64>) -> Result<OperatorMatrix> {
    let pos = layout
        .position_of(target)
        .ok_or_else(|| Error::InvalidLayout(format!("label {target} not in layout")))?;
    let d = layout.factors[pos].1;
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, factor {target} has dimension {d}",
            op.nrows(),
            op.ncols()
        )));
    }
    let pre: usize = layout.factors[..pos].iter().map(|(_, d)| d).product();
    let post: usize = layout.factors[pos + 1..].iter().map(|(_, d)| d).product();
    let m = DMatrix::<C64>::identity(pre, pre)
        .kronecker(op)
        .kronecker(&DMatrix::<C64>::identity(post, post));
    Ok(OperatorMatrix {
        layout: layout.clone(),
        matrix: m,
    })
}

/// Reorders a two-qubit matrix from the internal ascending basis
/// `|00>, |01>, |10>, |11>` into the descending order `|11>, |10>, |01>, |00>`
/// used for display.
pub fn to_descending_qubit_basis(m: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(m.nrows(), 4);
    assert_eq!(m.ncols(), 4);
    DMatrix::from_fn(4, 4, |i, j| m[(3 - i, 3 - j)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_density(rng: &mut impl Rng, layout: SpaceLayout) -> DensityOperator {
        let dim = layout.total_dim();
        let g = DMatrix::from_fn(dim, dim, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let m = &g * g.adjoint();
        let tr = m.trace();
        DensityOperator::from_matrix_unchecked(layout, m.map(|z| z / tr))
    }

    #[test]
    fn layout_rejects_duplicates_and_small_factors() {
        assert!(SpaceLayout::new(vec![
            (FactorLabel::Qubit1, 2),
            (FactorLabel::Qubit1, 2)
        ])
        .is_err());
        assert!(SpaceLayout::new(vec![(FactorLabel::CavityA, 1)]).is_err());
    }

    #[test]
    fn flat_index_last_factor_fastest() {
        let layout = SpaceLayout::new(vec![
            (FactorLabel::Qubit1, 2),
            (FactorLabel::CavityA, 3),
        ])
        .unwrap();
        assert_eq!(layout.flat_index(&[0, 0]), 0);
        assert_eq!(layout.flat_index(&[0, 2]), 2);
        assert_eq!(layout.flat_index(&[1, 0]), 3);
        assert_eq!(layout.flat_index(&[1, 2]), 5);
    }

    #[test]
    fn annihilation_ladder_action() {
        let a = annihilation(3).unwrap();
        let mut one = DVector::<C64>::zeros(3);
        one[1] = c(1.0, 0.0);
        let out = &a * &one;
        assert!((out[0] - c(1.0, 0.0)).norm() < 1e-15);

        let mut two = DVector::<C64>::zeros(3);
        two[2] = c(1.0, 0.0);
        let out = &a * &two;
        assert!((out[1] - c(2f64.sqrt(), 0.0)).norm() < 1e-15);

        let a2 = annihilation(2).unwrap();
        let mut vac = DVector::<C64>::zeros(2);
        vac[0] = c(1.0, 0.0);
        assert!((&a2 * &vac).norm() < 1e-15);

        assert!(annihilation(1).is_err());
    }

    #[test]
    fn embed_identity_and_sigma_x() {
        let layout = SpaceLayout::two_qubits();
        let id2 = DMatrix::<C64>::identity(2, 2);
        let full = embed(&layout, FactorLabel::Qubit1, &id2).unwrap();
        assert!(max_abs_diff(full.matrix(), &DMatrix::identity(4, 4)) < 1e-15);

        let sx = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let op = embed(&layout, FactorLabel::Qubit1, &sx).unwrap();
        // |00> -> |10>: flat 0 -> flat 2
        let psi = StateVector::basis(layout.clone(), &[0, 0]).unwrap();
        let out = op.matrix() * psi.amplitudes();
        assert!((out[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(out[0].norm() < 1e-15);
    }

    #[test]
    fn embedded_operators_on_disjoint_factors_commute() {
        let layout = SpaceLayout::new(vec![
            (FactorLabel::CavityA, 4),
            (FactorLabel::CavityB, 3),
        ])
        .unwrap();
        let a = embed(&layout, FactorLabel::CavityA, &annihilation(4).unwrap()).unwrap();
        let b = embed(&layout, FactorLabel::CavityB, &annihilation(3).unwrap()).unwrap();
        let comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
        assert!(comm.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let layout = SpaceLayout::two_qubits();
        let mut amps = DVector::<C64>::zeros(4);
        amps[0] = c(1.0 / 2f64.sqrt(), 0.0);
        amps[3] = c(1.0 / 2f64.sqrt(), 0.0);
        let bell = StateVector::new(layout, amps).unwrap();
        let rho1 = bell.reduced_density(&[FactorLabel::Qubit1]).unwrap();
        let half = DMatrix::<C64>::identity(2, 2).map(|z| z * c(0.5, 0.0));
        assert!(max_abs_diff(rho1.matrix(), &half) < 1e-14);
    }

    #[test]
    fn partial_trace_keeping_everything_is_identity_map() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let layout = SpaceLayout::new(vec![
            (FactorLabel::Qubit1, 2),
            (FactorLabel::CavityA, 3),
        ])
        .unwrap();
        let rho = random_density(&mut rng, layout);
        let kept = rho
            .partial_trace(&[FactorLabel::Qubit1, FactorLabel::CavityA])
            .unwrap();
        assert!(max_abs_diff(rho.matrix(), kept.matrix()) < 1e-14);
        assert!(rho.partial_trace(&[]).is_err());
    }

    #[test]
    fn partial_trace_factorizes_product_states() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..10 {
            let l1 = SpaceLayout::new(vec![(FactorLabel::Qubit1, 2)]).unwrap();
            let l2 = SpaceLayout::new(vec![(FactorLabel::CavityA, 3)]).unwrap();
            let r1 = random_density(&mut rng, l1);
            let r2 = random_density(&mut rng, l2);
            let joint_layout = SpaceLayout::new(vec![
                (FactorLabel::Qubit1, 2),
                (FactorLabel::CavityA, 3),
            ])
            .unwrap();
            let joint = DensityOperator::from_matrix_unchecked(
                joint_layout,
                r1.matrix().kronecker(r2.matrix()),
            );
            let back1 = joint.partial_trace(&[FactorLabel::Qubit1]).unwrap();
            let back2 = joint.partial_trace(&[FactorLabel::CavityA]).unwrap();
            assert!(max_abs_diff(back1.matrix(), r1.matrix()) < 1e-13);
            assert!(max_abs_diff(back2.matrix(), r2.matrix()) < 1e-13);
        }
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let layout = SpaceLayout::new(vec![
            (FactorLabel::Qubit1, 2),
            (FactorLabel::CavityA, 4),
            (FactorLabel::CavityB, 3),
        ])
        .unwrap();
        let rho = random_density(&mut rng, layout);
        let red = rho
            .partial_trace(&[FactorLabel::Qubit1, FactorLabel::CavityB])
            .unwrap();
        assert!((red.trace() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(red.matrix().nrows() == 6);
        assert!(crate::linalg::min_eigenvalue(red.matrix()).unwrap() > -1e-12);
    }

    #[test]
    fn bell_partial_transpose_min_eigenvalue() {
        let layout = SpaceLayout::two_qubits();
        let mut amps = DVector::<C64>::zeros(4);
        amps[0] = c(1.0 / 2f64.sqrt(), 0.0);
        amps[3] = c(1.0 / 2f64.sqrt(), 0.0);
        let bell = StateVector::new(layout, amps).unwrap().density();
        let pt = bell.partial_transpose(FactorLabel::Qubit2).unwrap();
        let lambda = pt.min_eigenvalue().unwrap();
        assert!((lambda + 0.5).abs() < 1e-12);
        // trace preserved, Hermitian
        assert!((pt.matrix().trace() - c(1.0, 0.0)).norm() < 1e-13);
        assert!(max_abs_diff(pt.matrix(), &pt.matrix().adjoint()) < 1e-13);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let layout = SpaceLayout::new(vec![
            (FactorLabel::Qubit1, 2),
            (FactorLabel::CavityA, 3),
        ])
        .unwrap();
        let rho = random_density(&mut rng, layout);
        let pt = rho.partial_transpose(FactorLabel::CavityA).unwrap();
        let wrapped = DensityOperator {
            layout: pt.layout.clone(),
            matrix: pt.matrix.clone(),
        };
        let back = wrapped.partial_transpose(FactorLabel::CavityA).unwrap();
        assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn product_state_partial_transpose_stays_positive() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let l1 = SpaceLayout::new(vec![(FactorLabel::Qubit1, 2)]).unwrap();
        let l2 = SpaceLayout::new(vec![(FactorLabel::Qubit2, 2)]).unwrap();
        let r1 = random_density(&mut rng, l1);
        let r2 = random_density(&mut rng, l2);
        let joint = DensityOperator::from_matrix_unchecked(
            SpaceLayout::two_qubits(),
            r1.matrix().kronecker(r2.matrix()),
        );
        let pt = joint.partial_transpose(FactorLabel::Qubit2).unwrap();
        assert!(pt.min_eigenvalue().unwrap() > -1e-12);
    }

    #[test]
    fn embed_preserves_operator_norm() {
        let layout = SpaceLayout::new(vec![
            (FactorLabel::Qubit1, 2),
            (FactorLabel::CavityA, 3),
        ])
        .unwrap();
        let a = annihilation(3).unwrap();
        let full = embed(&layout, FactorLabel::CavityA, &a).unwrap();
        // largest singular value is sqrt(2) in both cases
        let s_small = nalgebra::SVD::new(a.clone(), false, false).singular_values[0];
        let s_full = nalgebra::SVD::new(full.matrix().clone(), false, false).singular_values[0];
        assert!((s_small - s_full).abs() < 1e-12);
    }
}
