//! Dense linear-algebra helpers on top of nalgebra.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

const EIGEN_EPS: f64 = 1.0e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Relative size below which an LU pivot counts as zero.
const PIVOT_TOL: f64 = 1.0e-14;

/// Components within this relative distance of the largest magnitude tie for
/// the phase convention.
const PHASE_TIE_TOL: f64 = 1.0e-8;

pub(crate) fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Ascending eigenpairs of a real symmetric matrix; eigenvectors are columns.
pub(crate) fn symmetric_eigen(h: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = h.nrows();
    let eig = SymmetricEigen::try_new(h.clone(), EIGEN_EPS, EIGEN_MAX_ITER).ok_or(
        Error::NoConvergence {
            what: "symmetric eigensolver",
            iterations: EIGEN_MAX_ITER,
            residual: f64::NAN,
        },
    )?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Ascending eigenpairs of a complex Hermitian matrix.
pub(crate) fn hermitian_eigen(h: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = h.nrows();
    let eig = SymmetricEigen::try_new(h.clone(), EIGEN_EPS, EIGEN_MAX_ITER).ok_or(
        Error::NoConvergence {
            what: "hermitian eigensolver",
            iterations: EIGEN_MAX_ITER,
            residual: f64::NAN,
        },
    )?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Fix the sign of a real eigenvector: the largest-magnitude component is
/// positive; among near-ties the one with the lowest index wins.
pub(crate) fn fix_phase(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - PHASE_TIE_TOL))
        .unwrap_or(0);
    if v[lead] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Solve `m x = b` by LU with partial pivoting.
pub(crate) fn lu_solve(
    m: DMatrix<Complex64>,
    b: &DVector<Complex64>,
    context: &str,
) -> Result<DVector<Complex64>> {
    let scale = m.iter().fold(0.0f64, |s, z| s.max(z.norm()));
    let lu = m.lu();
    let u = lu.u();
    let min_pivot = (0..u.nrows()).fold(f64::INFINITY, |p, i| p.min(u[(i, i)].norm()));
    if scale == 0.0 || min_pivot <= PIVOT_TOL * scale {
        return Err(Error::Singular(format!(
            "{context}: pivot {min_pivot:e} against scale {scale:e}"
        )));
    }
    lu.solve(b)
        .ok_or_else(|| Error::Singular(format!("{context}: LU solve failed")))
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |s, z| s.max(z.norm()))
}

/// Largest entry of `m - m^H`.
pub(crate) fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut d = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    d
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub(crate) fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|c| a.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / Complex64::new(2f64.powi(squarings), 0.0);

    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
        if max_abs(&term) <= 1.0e-18 * max_abs(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Eigen-decomposition of a general complex matrix (eigenvectors as unit
/// columns), via complex Schur form and back substitution.
pub(crate) fn general_eigen(a: &DMatrix<Complex64>) -> Result<(Vec<Complex64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    let schur = Schur::try_new(a.clone(), EIGEN_EPS, EIGEN_MAX_ITER).ok_or(Error::NoConvergence {
        what: "complex Schur decomposition",
        iterations: EIGEN_MAX_ITER,
        residual: f64::NAN,
    })?;
    let (q, t) = schur.unpack();
    let small = EIGEN_EPS * max_abs(&t).max(f64::MIN_POSITIVE);

    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        let lambda = values[i];
        y[(i, i)] = Complex64::new(1.0, 0.0);
        for k in (0..i).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for m in k + 1..=i {
                s += t[(k, m)] * y[(m, i)];
            }
            let mut d = t[(k, k)] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[(k, i)] = -s / d;
        }
    }
    let mut v = q * y;
    for mut col in v.column_iter_mut() {
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        col /= Complex64::new(norm, 0.0);
    }
    Ok((values, v))
}

/// 2-norm condition number from the singular values.
pub(crate) fn condition_number(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phase_fix_prefers_largest_then_first() {
        let mut v = vec![0.1, -0.9, 0.3];
        fix_phase(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.3]);

        let s = 1.0 / 2f64.sqrt();
        let mut tie = vec![-s, s];
        fix_phase(&mut tie);
        assert!(tie[0] > 0.0 && tie[1] < 0.0);
    }

    #[test]
    fn expm_of_rotation_generator() {
        // exp(-i sigma_x theta) = cos(theta) I - i sin(theta) sigma_x
        let theta = 7.3;
        let a = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -theta), c(0.0, -theta), c(0.0, 0.0)]);
        let e = expm(&a);
        assert!((e[(0, 0)] - c(theta.cos(), 0.0)).norm() < 1e-13);
        assert!((e[(0, 1)] - c(0.0, -theta.sin())).norm() < 1e-13);
    }

    #[test]
    fn general_eigen_reconstructs() {
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, -0.2), c(0.5, 0.0), c(0.0, 0.0),
                c(0.5, 0.0), c(-0.3, -0.05), c(0.7, 0.0),
                c(0.0, 0.0), c(0.7, 0.0), c(2.0, -1.0),
            ],
        );
        let (vals, vecs) = general_eigen(&a).unwrap();
        for (i, l) in vals.iter().enumerate() {
            let v = vecs.column(i);
            let r = &a * v - v * *l;
            assert!(r.norm() < 1e-12, "residual {}", r.norm());
        }
        assert!(condition_number(&vecs) < 10.0);
    }

    #[test]
    fn lu_flags_singular() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        let b = DVector::from_element(2, c(1.0, 0.0));
        assert!(matches!(lu_solve(m, &b, "test"), Err(Error::Singular(_))));
    }
}
