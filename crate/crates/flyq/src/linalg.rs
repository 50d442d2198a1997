//! Small dense linear-algebra helpers shared across the crate.
//!
//! Everything here operates on `nalgebra` dynamic matrices over `Complex64`.
//! The Hermitian eigendecomposition is the single primitive behind positivity
//! checks, entropies and negativities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(m + m†)/2` before factorization so that
/// matrices that are Hermitian only up to roundoff are handled cleanly.
/// Eigenvalues are returned in ascending order with matching eigenvector
/// columns.
///
/// Hand-rolled Householder tridiagonalization with implicit-shift QL:
/// repeated and degenerate eigenvalues occur constantly in this crate
/// (low-rank driving states, exact zero modes) and must come out clean.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> Result<(DVector<f64>, DMatrix<C64>)> {
    assert_eq!(m.nrows(), m.ncols(), "eigendecomposition needs a square matrix");
    let n = m.nrows();
    let mut a = (m + m.adjoint()).map(|z| 0.5 * z);
    let mut q = DMatrix::<C64>::identity(n, n);

    if n == 1 {
        return Ok((DVector::from_element(1, a[(0, 0)].re), q));
    }

    // Householder reduction to Hermitian tridiagonal form, accumulating the
    // unitary transform in q. After the loop the subdiagonal is complex.
    let mut sub = vec![C64::new(0.0, 0.0); n - 1];
    for k in 0..n.saturating_sub(2) {
        let mlen = n - k - 1;
        let mut v = DVector::<C64>::zeros(mlen);
        for i in 0..mlen {
            v[i] = a[(k + 1 + i, k)];
        }
        let xnorm = v.norm();
        if xnorm < 1e-300 {
            sub[k] = C64::new(0.0, 0.0);
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / C64::new(v[0].norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * C64::new(xnorm, 0.0);
        v[0] -= alpha;
        let vnorm = v.norm();
        sub[k] = alpha;
        if vnorm < 1e-300 {
            continue;
        }
        let v = v.map(|z| z / C64::new(vnorm, 0.0));

        // Hermitian rank-2 update of the trailing block: A <- A - w v+ - v w+
        // with w = 2 (A v - (v+ A v) v)
        let mut u = DVector::<C64>::zeros(mlen);
        for i in 0..mlen {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..mlen {
                acc += a[(k + 1 + i, k + 1 + j)] * v[j];
            }
            u[i] = acc;
        }
        let c = v.dotc(&u);
        let w = (&u - &v * c).map(|z| 2.0 * z);
        for i in 0..mlen {
            for j in 0..mlen {
                let delta = w[i] * v[j].conj() + v[i] * w[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= delta;
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in 1..mlen {
            a[(k + 1 + i, k)] = C64::new(0.0, 0.0);
            a[(k, k + 1 + i)] = C64::new(0.0, 0.0);
        }

        // q <- q (I - 2 v v+) on the trailing columns
        for row in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..mlen {
                acc += q[(row, k + 1 + j)] * v[j];
            }
            let acc2 = 2.0 * acc;
            for j in 0..mlen {
                q[(row, k + 1 + j)] -= acc2 * v[j].conj();
            }
        }
    }
    sub[n - 2] = a[(n - 1, n - 2)];

    // absorb the subdiagonal phases into a diagonal unitary so the
    // tridiagonal matrix becomes real
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0f64; n];
    let mut s = vec![C64::new(1.0, 0.0); n];
    for k in 0..n - 1 {
        let mag = sub[k].norm();
        e[k] = mag;
        s[k + 1] = if mag > 0.0 {
            sub[k] / C64::new(mag, 0.0) * s[k]
        } else {
            s[k]
        };
    }
    for col in 0..n {
        if s[col] != C64::new(1.0, 0.0) {
            for row in 0..n {
                q[(row, col)] *= s[col];
            }
        }
    }

    // implicit-shift QL iteration on the real symmetric tridiagonal (d, e),
    // rotating the complex eigenvector columns along; e[i] couples d[i] and
    // d[i+1]
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mseg = l;
            while mseg < n - 1 {
                let dd = d[mseg].abs() + d[mseg + 1].abs();
                if e[mseg].abs() <= f64::EPSILON * dd {
                    break;
                }
                mseg += 1;
            }
            if mseg == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::EigenFailure);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[mseg] - d[l] + e[l] / (g + sign_r);
            let mut si = 1.0f64;
            let mut ci = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..mseg).rev() {
                let f = si * e[i];
                let b = ci * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mseg] = 0.0;
                    underflow = true;
                    break;
                }
                si = f / r;
                ci = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * si + 2.0 * ci * b;
                p = si * r;
                d[i + 1] = g + p;
                g = ci * r - b;
                // rotate eigenvector columns i and i+1
                for row in 0..n {
                    let f = q[(row, i + 1)];
                    q[(row, i + 1)] = q[(row, i)] * C64::new(si, 0.0) + f * C64::new(ci, 0.0);
                    q[(row, i)] = q[(row, i)] * C64::new(ci, 0.0) - f * C64::new(si, 0.0);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mseg] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| d[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &q.column(k));
    }
    Ok((values, vectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &DMatrix<C64>) -> Result<f64> {
    let (values, _) = hermitian_eigen(m)?;
    Ok(values[0])
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
///
/// The argument is halved until its infinity norm is below 1/2, the series is
/// summed to machine precision, and the result squared back up. Intended for
/// the small generators used here (16x16, 36x36), not for large matrices.
pub fn matexp(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matexp needs a square matrix");
    let norm = inf_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = C64::new(0.5f64.powi(squarings as i32), 0.0);
    let b = a.map(|z| z * scale);

    let mut result = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..64 {
        term = (&term * &b).map(|z| z / C64::new(k as f64, 0.0));
        result += &term;
        if inf_norm(&term) < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Kernel vector of a (generally non-Hermitian) matrix, via SVD.
///
/// Returns the right singular vector of the smallest singular value together
/// with the number of singular values below `tol`, which is the dimension of
/// the numerical kernel.
pub fn kernel_vector(m: &DMatrix<C64>, tol: f64) -> Result<(DVector<C64>, usize)> {
    let svd = nalgebra::SVD::new(m.clone(), false, true);
    let v_t = svd.v_t.ok_or(Error::EigenFailure)?;
    let mut min_idx = 0;
    let mut min_sv = f64::INFINITY;
    let mut kernel_dim = 0;
    for (i, &sv) in svd.singular_values.iter().enumerate() {
        if sv < min_sv {
            min_sv = sv;
            min_idx = i;
        }
        if sv < tol {
            kernel_dim += 1;
        }
    }
    let v = v_t.row(min_idx).map(|z| z.conj()).transpose();
    Ok((v, kernel_dim))
}

/// Largest absolute row sum.
pub fn inf_norm(m: &DMatrix<C64>) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of the difference between two matrices.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Trace distance between two density matrices, `tr|a - b| / 2`.
pub fn trace_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<f64> {
    let (values, _) = hermitian_eigen(&(a - b))?;
    Ok(0.5 * values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Column-stacked vectorization of a matrix.
pub fn vectorize(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`] for square matrices.
pub fn unvectorize(v: &DVector<C64>, n: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

/// Superoperator of `rho -> a * rho * b` in the column-stacking convention.
pub fn sandwich_superop(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    b.transpose().kronecker(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hermitian_eigen_recovers_spectrum() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let (values, vectors) = hermitian_eigen(&m).unwrap();
        assert_relative_eq!(values[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(values[1], 2.0, epsilon = 1e-12);
        // reconstruct
        let mut rec = DMatrix::<C64>::zeros(2, 2);
        for k in 0..2 {
            let v = vectors.column(k);
            rec += (v * v.adjoint()).map(|z| z * c(values[k], 0.0));
        }
        assert!(max_abs_diff(&m, &rec) < 1e-12);
    }

    #[test]
    fn matexp_matches_scalar_exponential() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.3, 0.0), c(-1.2, 0.5)]));
        let e = matexp(&m);
        assert!((e[(0, 0)] - c(0.3, 0.0).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - c(-1.2, 0.5).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-16);
    }

    #[test]
    fn matexp_of_antihermitian_is_unitary() {
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.0, 0.4), c(0.2, 0.1), c(-0.3, 0.0),
                c(-0.2, 0.1), c(0.0, -0.9), c(0.05, 0.6),
                c(0.3, 0.0), c(-0.05, 0.6), c(0.0, 0.2),
            ],
        );
        // make it exactly anti-Hermitian
        let a = (&a - a.adjoint()).map(|z| 0.5 * z);
        let u = matexp(&a);
        let id = DMatrix::<C64>::identity(3, 3);
        assert!(max_abs_diff(&(&u * u.adjoint()), &id) < 1e-13);
    }

    #[test]
    fn kernel_vector_finds_null_space() {
        // rank-2 3x3 matrix with known kernel (1,1,1)/sqrt(3)
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0),
                c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0),
            ],
        );
        let (v, dim) = kernel_vector(&m, 1e-9).unwrap();
        assert_eq!(dim, 1);
        let residual = (&m * &v).norm();
        assert!(residual < 1e-12);
        assert!((v[0] - v[1]).norm() < 1e-12 && (v[1] - v[2]).norm() < 1e-12);
    }
}
