//! Dense complex linear algebra used throughout the crate.
//!
//! Every operator is stored in orthonormal coordinates, so the adjoint is
//! always the conjugate transpose.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn real(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |m - m*|` entrywise; zero for empty and exactly Hermitian matrices.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Symmetrises `m` to `(m + m*)/2` so that roundoff never reaches the solver.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    if is_real(m) {
        let r = m.map(|z| z.re);
        let r = (&r + r.transpose()) * 0.5;
        let mut vals: Vec<f64> = r.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        return vals;
    }
    let h = hermitian_part(m);
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Ascending eigenpairs of a Hermitian matrix; eigenvectors are the columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

/// Descending singular values.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = if is_real(m) {
        m.map(|z| z.re).singular_values().iter().copied().collect()
    } else {
        m.clone().singular_values().iter().copied().collect()
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn is_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Largest singular value, zero for empty matrices.
pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Relative rank threshold.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Numerical rank from singular values below `RANK_THRESHOLD * sigma_max`.
///
/// A singular value inside `(0.1, 10) * threshold` makes the decision
/// ambiguous and is reported instead of silently rounded.
pub fn numerical_rank(svals: &[f64]) -> Result<usize> {
    numerical_rank_at_scale(svals, 0.0)
}

/// As [`numerical_rank`], with the threshold taken relative to
/// `max(sigma_max, scale)`. Use it when the matrix has a known natural size
/// and may be zero up to rounding.
pub fn numerical_rank_at_scale(svals: &[f64], scale: f64) -> Result<usize> {
    let smax = svals.iter().copied().fold(scale, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    let threshold = RANK_THRESHOLD * smax;
    for &s in svals {
        if s > 0.1 * threshold && s < 10.0 * threshold {
            return Err(Error::RankAmbiguous {
                value: s,
                threshold,
            });
        }
    }
    Ok(svals.iter().filter(|&&s| s > threshold).count())
}

/// Modified Gram-Schmidt over the given vectors, dropping any vector whose
/// residual falls below `1e-12` times its original norm. Returns the
/// orthonormal vectors as matrix columns.
pub fn orthonormalize(vectors: &[CVector], dim: usize) -> CMatrix {
    let mut basis: Vec<CVector> = Vec::new();
    for v in vectors {
        let norm0 = v.norm();
        if norm0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        // two passes keep the result orthonormal to roundoff
        for _ in 0..2 {
            for q in &basis {
                let r = q.dotc(&w);
                w -= q * r;
            }
        }
        let n = w.norm();
        if n > 1e-12 * norm0 {
            basis.push(w / real(n));
        }
    }
    let mut m = CMatrix::zeros(dim, basis.len());
    for (j, q) in basis.iter().enumerate() {
        m.set_column(j, q);
    }
    m
}

/// Orthonormal basis (columns) of the range of an orthogonal projection.
pub fn projection_range(p: &CMatrix) -> CMatrix {
    let n = p.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let (vals, vecs) = hermitian_eigen(p);
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] > 0.5).collect();
    let mut b = CMatrix::zeros(n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        let mut col = vecs.column(i).into_owned();
        // fix the phase so the largest entry is real positive
        if let Some(pivot) = col.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
            if pivot.norm() > 0.0 {
                let phase = pivot.conj() / real(pivot.norm());
                col *= phase;
            }
        }
        b.set_column(j, &col);
    }
    b
}

/// Orthonormal basis of the orthogonal complement of the column span of `basis`.
pub fn orthogonal_complement(basis: &CMatrix) -> CMatrix {
    let n = basis.nrows();
    let p = basis * basis.adjoint();
    let q = CMatrix::identity(n, n) - p;
    projection_range(&q)
}

/// A dense operator between labelled coordinate spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub matrix: CMatrix,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

impl LinearMap {
    pub fn new(matrix: CMatrix, rows: Vec<String>, cols: Vec<String>) -> Self {
        debug_assert_eq!(matrix.nrows(), rows.len());
        debug_assert_eq!(matrix.ncols(), cols.len());
        LinearMap { matrix, rows, cols }
    }

    pub fn adjoint(&self) -> LinearMap {
        LinearMap {
            matrix: self.matrix.adjoint(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    pub fn compose(&self, rhs: &LinearMap) -> LinearMap {
        LinearMap {
            matrix: &self.matrix * &rhs.matrix,
            rows: self.rows.clone(),
            cols: rhs.cols.clone(),
        }
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_clear_cut_spectrum() {
        assert_eq!(numerical_rank(&[2.0, 1.0, 1e-14]).unwrap(), 2);
        assert_eq!(numerical_rank(&[]).unwrap(), 0);
        assert_eq!(numerical_rank(&[0.0, 0.0]).unwrap(), 0);
    }

    #[test]
    fn rank_inside_window_is_an_error() {
        let err = numerical_rank(&[1.0, 3e-10]).unwrap_err();
        assert!(matches!(err, Error::RankAmbiguous { .. }));
    }

    #[test]
    fn gram_schmidt_drops_dependent_rows() {
        let v1 = CVector::from_vec(vec![ONE, ONE]);
        let v2 = CVector::from_vec(vec![real(2.0), real(2.0)]);
        let b = orthonormalize(&[v1, v2], 2);
        assert_eq!(b.ncols(), 1);
        assert!((b[(0, 0)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn complement_completes_the_space() {
        let v = CVector::from_vec(vec![ONE, c(0.0, 1.0), real(-1.0)]);
        let b = orthonormalize(&[v], 3);
        let comp = orthogonal_complement(&b);
        assert_eq!(comp.ncols(), 2);
        let p = &b * b.adjoint() + &comp * comp.adjoint();
        assert!(max_abs(&(p - CMatrix::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn eigenvalues_sorted() {
        let m = CMatrix::from_row_slice(2, 2, &[real(1.0), real(-1.0), real(-1.0), real(1.0)]);
        let v = hermitian_eigenvalues(&m);
        assert!(v[0].abs() < 1e-14 && (v[1] - 2.0).abs() < 1e-14);
    }
}
