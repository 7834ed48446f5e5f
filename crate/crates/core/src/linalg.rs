//! Real dense linear algebra helpers: one-sided Jacobi SVD, kernels of
//! linear operators, orthonormal subspaces of a real coordinate space, and
//! fixed-topology (pairwise) summation for deterministic reductions.

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::{vec, vec::Vec};
use num_complex::Complex64;

/// Plain real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RMat {
    pub rows: usize,
    pub cols: usize,
    pub d: Vec<f64>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> RMat {
        RMat { rows, cols, d: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> RMat {
        let mut m = RMat::zeros(n, n);
        for i in 0..n {
            m.d[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> RMat {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = RMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            m.d[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.d[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn matmul(&self, o: &RMat) -> RMat {
        assert_eq!(self.cols, o.rows);
        let mut m = RMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..o.cols {
                    m.d[i * o.cols + j] += a * o.d[k * o.cols + j];
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> RMat {
        let mut m = RMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| dot(&self.d[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Singular value decomposition by one-sided Jacobi: `a = u * diag(s) * v^T`
/// with `u` (rows x cols) column-orthonormal on the nonzero part, singular
/// values sorted in decreasing order.
pub fn svd(a: &RMat) -> (RMat, Vec<f64>, RMat) {
    let (m, n) = (a.rows, a.cols);
    let mut b = a.clone();
    let mut v = RMat::identity(n);
    let eps = 1e-14;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for j in 0..n {
            for k in j + 1..n {
                let (mut ajj, mut akk, mut ajk) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (b.get(i, j), b.get(i, k));
                    ajj += x * x;
                    akk += y * y;
                    ajk += x * y;
                }
                let denom = (ajj * akk).sqrt();
                if denom == 0.0 || ajk.abs() <= eps * denom {
                    continue;
                }
                off = off.max(ajk.abs() / denom);
                let zeta = (akk - ajj) / (2.0 * ajk);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (b.get(i, j), b.get(i, k));
                    b.set(i, j, c * x - s * y);
                    b.set(i, k, s * x + c * y);
                }
                for i in 0..n {
                    let (x, y) = (v.get(i, j), v.get(i, k));
                    v.set(i, j, c * x - s * y);
                    v.set(i, k, s * x + c * y);
                }
            }
        }
        if off < eps {
            break;
        }
    }
    // column norms are the singular values
    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = (0..n).map(|j| norm(&b.col(j))).collect();
    order.sort_by(|&x, &y| sig[y].partial_cmp(&sig[x]).unwrap());
    let mut u = RMat::zeros(m, n);
    let mut vv = RMat::zeros(n, n);
    let mut s_sorted = Vec::with_capacity(n);
    for (pos, &j) in order.iter().enumerate() {
        let sj = sig[j];
        s_sorted.push(sj);
        for i in 0..m {
            u.set(i, pos, if sj > 0.0 { b.get(i, j) / sj } else { 0.0 });
        }
        for i in 0..n {
            vv.set(i, pos, v.get(i, j));
        }
    }
    (u, s_sorted, vv.transpose())
}

/// Singular values only.
pub fn singular_values(a: &RMat) -> Vec<f64> {
    svd(a).1
}

/// Orthonormal basis of the kernel of the operator given by `m` (mapping
/// column space to row space), relative threshold `tol`.
pub fn kernel_basis(m: &RMat, tol: f64) -> Vec<Vec<f64>> {
    if m.rows == 0 {
        // no constraints: standard basis
        return (0..m.cols)
            .map(|j| {
                let mut v = vec![0.0; m.cols];
                v[j] = 1.0;
                v
            })
            .collect();
    }
    let (_, s, vt) = svd(m);
    let smax = s.first().copied().unwrap_or(0.0).max(1.0);
    let mut out = Vec::new();
    for (idx, &sv) in s.iter().enumerate() {
        if sv <= tol * smax {
            out.push((0..m.cols).map(|j| vt.get(idx, j)).collect());
        }
    }
    out
}

/// Orthonormal subspace of R^ambient.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Vec<Vec<f64>>,
}

impl Subspace {
    pub fn from_vectors(ambient: usize, vectors: &[Vec<f64>], tol: f64) -> Subspace {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient);
            let mut w = v.clone();
            // two-pass modified Gram-Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&w, b);
                    for (wi, bi) in w.iter_mut().zip(b.iter()) {
                        *wi -= c * bi;
                    }
                }
            }
            let n = norm(&w);
            if n > tol * norm(v).max(1.0) {
                for wi in w.iter_mut() {
                    *wi /= n;
                }
                basis.push(w);
            }
        }
        Subspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; self.ambient];
        for b in &self.basis {
            let c = dot(v, b);
            for (pi, bi) in p.iter_mut().zip(b.iter()) {
                *pi += c * bi;
            }
        }
        p
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let p = self.project(v);
        let diff: Vec<f64> = v.iter().zip(p.iter()).map(|(a, b)| a - b).collect();
        norm(&diff)
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        self.residual(v) <= tol * norm(v).max(1.0)
    }

    /// Relative distance of the span of `vectors` from this subspace
    /// (max residual over the vectors, each scaled by its norm).
    pub fn max_relative_residual(&self, vectors: &[Vec<f64>]) -> f64 {
        vectors
            .iter()
            .map(|v| self.residual(v) / norm(v).max(1e-300))
            .fold(0.0, f64::max)
    }

    pub fn intersection(&self, other: &Subspace, tol: f64) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // kernel of c -> (I - P_other)(sum c_i b_i)
        let mut op = RMat::zeros(self.ambient, self.dim());
        for (j, b) in self.basis.iter().enumerate() {
            let pb = other.project(b);
            for i in 0..self.ambient {
                op.set(i, j, b[i] - pb[i]);
            }
        }
        let ker = kernel_basis(&op, tol);
        let vecs: Vec<Vec<f64>> = ker
            .iter()
            .map(|c| {
                let mut v = vec![0.0; self.ambient];
                for (j, b) in self.basis.iter().enumerate() {
                    for i in 0..self.ambient {
                        v[i] += c[j] * b[i];
                    }
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.ambient, &vecs, tol)
    }
}

/// Pairwise (tree) reduction of real values: a fixed summation topology so
/// that independently computed partial results agree bit-for-bit.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// Pairwise reduction for complex values.
pub fn pairwise_sum_c(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let mid = n / 2;
            pairwise_sum_c(&v[..mid]) + pairwise_sum_c(&v[mid..])
        }
    }
}
