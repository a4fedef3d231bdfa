//! Small dense linear algebra over a [`Scalar`] field.
//!
//! Dimensions here are tiny (the eigen oracle is restricted to n <= 3), so
//! everything is plain row-major `Vec` storage with Gaussian elimination.

use itertools::Itertools;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{convert, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S = f64> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidMap("matrix has no rows".into()));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::InvalidMap("matrix has no columns".into()));
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, got: bad.len() });
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar_multiple(n, S::one())
    }

    pub fn scalar_multiple(n: usize, c: S) -> Self {
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = c.clone();
        }
        Matrix { rows: n, cols: n, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.rows_iter().map(<[S]>::to_vec).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        debug_assert_eq!(x.len(), self.cols);
        self.rows_iter().map(|row| dot(row, x)).collect()
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        debug_assert_eq!(self.cols, other.rows);
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = S::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                data.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn transpose(&self) -> Matrix<S> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    /// `self - c * I`
    pub fn shift(&self, c: &S) -> Matrix<S> {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let idx = i * self.cols + i;
            m.data[idx] = m.data[idx].clone() - c.clone();
        }
        m
    }

    pub fn convert<T: Scalar>(&self) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(convert).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_iterator(self.rows, self.cols, self.data.iter().map(Scalar::to_f64))
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    S::dot(a, b)
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<S: Scalar>(c: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| c.mul_ref(x)).collect()
}

pub fn neg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(num_traits::Zero::is_zero)
}

/// Euclidean norm, evaluated in `f64`.
pub fn norm<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

pub fn norm_f64(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn normalize(a: &[f64]) -> Vec<f64> {
    let n = norm_f64(a);
    a.iter().map(|x| x / n).collect()
}

pub fn dist_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Divides by the entry of largest magnitude: a canonical representative of
/// the ray through `a` that is exact over the rationals.
pub fn canonical_ray<S: Scalar>(a: &[S]) -> Vec<S> {
    let pivot = a
        .iter()
        .max_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap_or(std::cmp::Ordering::Equal))
        .map(|p| p.abs());
    match pivot {
        Some(p) if !p.is_zero() => a.iter().map(|x| x.clone() / p.clone()).collect(),
        _ => a.to_vec(),
    }
}

/// Whether `a` and `b` span the same open ray.
pub fn same_ray<S: Scalar>(a: &[S], b: &[S]) -> bool {
    let ca = canonical_ray(a);
    let cb = canonical_ray(b);
    if S::EXACT {
        ca == cb
    } else {
        ca.iter().zip(&cb).all(|(x, y)| (x.to_f64() - y.to_f64()).abs() <= 1e-8)
    }
}

/// Whether `a` and `b` are parallel (possibly opposite).
pub fn parallel<S: Scalar>(a: &[S], b: &[S]) -> bool {
    same_ray(a, b) || same_ray(a, &neg(b))
}

/// Reduced row echelon form; returns the pivot columns.
fn rref<S: Scalar>(m: &mut [Vec<S>], cols: usize) -> Vec<usize> {
    let scale = m
        .iter()
        .flatten()
        .map(|v| v.to_f64().abs())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= m.len() {
            break;
        }
        // partial pivoting by magnitude; exact fields only need nonzero
        let best = (r..m.len())
            .filter(|&i| !m[i][c].negligible(scale))
            .max_by(|&i, &j| {
                m[i][c]
                    .abs()
                    .partial_cmp(&m[j][c].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = best else {
            for row in m[r..].iter_mut() {
                row[c] = S::zero();
            }
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() / pv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[r].clone();
                for (e, p) in m[i].iter_mut().zip(&pivot).take(cols) {
                    *e = e.clone() - f.clone() * p.clone();
                }
                m[i][c] = S::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : rows * x = 0}` in dimension `cols`.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], cols: usize) -> Vec<Vec<S>> {
    if rows.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
    }
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank<S: Scalar>(rows: &[Vec<S>], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// Extreme rays of the pointed polyhedral cone `{x : <a, x> >= 0, a in rows}`
/// in dimension `dim`, as canonical representatives. Returns nothing for the
/// trivial cone. Non-pointed inputs yield only the rays that happen to be
/// extreme, which callers avoid by intersecting with a pointed cone first.
pub fn extreme_rays<S: Scalar>(rows: &[Vec<S>], dim: usize) -> Vec<Vec<S>> {
    let feasible = |r: &[S]| {
        let rn = norm(r);
        rows.iter().all(|a| {
            let v = dot(a, r);
            if S::EXACT {
                v >= S::zero()
            } else {
                v.to_f64() >= -1e-9 * rn * norm(a).max(1.0)
            }
        })
    };
    let mut out: Vec<Vec<S>> = Vec::new();
    let mut push = |cand: Vec<S>| {
        if is_zero_vec(&cand) || !feasible(&cand) {
            return;
        }
        let c = canonical_ray(&cand);
        if !out.iter().any(|o| same_ray(o, &c)) {
            out.push(c);
        }
    };
    if dim == 1 {
        push(vec![S::one()]);
        push(vec![-S::one()]);
        return out;
    }
    let nonzero: Vec<&Vec<S>> = rows.iter().filter(|r| !is_zero_vec(r)).collect();
    for combo in nonzero.iter().combinations(dim - 1) {
        let sub: Vec<Vec<S>> = combo.iter().map(|r| (**r).clone()).collect();
        let ns = nullspace(&sub, dim);
        if ns.len() != 1 {
            continue;
        }
        let r = &ns[0];
        push(r.clone());
        push(neg(r));
    }
    out
}

/// Real eigenvalues of a square matrix (computed in `f64`), clustered so that
/// numerically repeated roots appear once.
pub fn real_eigenvalues<S: Scalar>(m: &Matrix<S>) -> Vec<f64> {
    let a = m.to_nalgebra();
    let scale = m.max_abs().max(1.0);
    let mut vals: Vec<f64> = a
        .complex_eigenvalues()
        .iter()
        .filter(|c| c.im.abs() <= 1e-6 * scale)
        .map(|c| c.re)
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut clustered: Vec<Vec<f64>> = Vec::new();
    for v in vals {
        match clustered.last_mut() {
            Some(c) if (v - c[c.len() - 1]).abs() <= 1e-6 * scale => c.push(v),
            _ => clustered.push(vec![v]),
        }
    }
    clustered.into_iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let rows = vec![r(&[1, 2, 3]), r(&[2, 4, 6])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&rows[0], v) == rat(0, 1));
        }
        assert_eq!(rank(&rows, 3), 1);
    }

    #[test]
    fn extreme_rays_of_orthant_and_sector() {
        let orth = vec![r(&[1, 0]), r(&[0, 1])];
        let rays = extreme_rays(&orth, 2);
        assert_eq!(rays.len(), 2);
        assert!(rays.iter().any(|x| same_ray(x, &r(&[1, 0]))));
        assert!(rays.iter().any(|x| same_ray(x, &r(&[0, 1]))));

        // closure of {x1 <= 2 x2, x2 <= 2 x1} inside the orthant
        let k2 = vec![r(&[1, 0]), r(&[0, 1]), r(&[-1, 2]), r(&[2, -1])];
        let rays = extreme_rays(&k2, 2);
        assert_eq!(rays.len(), 2);
        assert!(rays.iter().any(|x| same_ray(x, &r(&[2, 1]))));
        assert!(rays.iter().any(|x| same_ray(x, &r(&[1, 2]))));
    }

    #[test]
    fn extreme_rays_of_trivial_cone_is_empty() {
        let rows = vec![r(&[1, 0]), r(&[-1, 0]), r(&[0, 1]), r(&[0, -1])];
        assert!(extreme_rays(&rows, 2).is_empty());
    }

    #[test]
    fn eigenvalues_of_symmetric_and_scalar_matrices() {
        let m = Matrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let ev = real_eigenvalues(&m);
        assert_eq!(ev.len(), 2);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
        let s = Matrix::<f64>::scalar_multiple(2, 3.0);
        assert_eq!(real_eigenvalues(&s), vec![3.0]);
        let rot = Matrix::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(real_eigenvalues(&rot).is_empty());
    }
}
