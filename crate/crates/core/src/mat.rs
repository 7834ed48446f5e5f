//! Dense matrices over R/C/H at desk scale (dimensions at most ~20).
//!
//! Row-major storage of [`Scalar`] entries with an explicit field tag.
//! Elimination-style algorithms are written for a division ring: row
//! operations multiply from the left only, so every routine here remains
//! valid over the quaternions.

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::{format, vec, vec::Vec};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::TOL_SINGULAR;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(field: Field, entries: &[f64]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(field, n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, Scalar::real(e));
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn add(&self, o: &Mat) -> Mat {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Mat, f: impl Fn(Scalar, Scalar) -> Scalar) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(o.data.iter()) {
            *a = f(*a, *b);
        }
        m
    }

    pub fn neg(&self) -> Mat {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = -*a;
        }
        m
    }

    pub fn scale(&self, t: f64) -> Mat {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = a.scale(t);
        }
        m
    }

    pub fn matmul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "matmul shape mismatch");
        let mut m = Mat::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sq() == 0.0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m.get(i, j) + a * o.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mat_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for j in 0..self.cols {
                    s = s + self.get(i, j) * v[j];
                }
                s
            })
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj_transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Scalar {
        let mut s = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            s = s + self.get(i, i);
        }
        s
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|s| s.norm_sq()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|s| s.abs()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, o: &Mat, tol: f64) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.sub(o).max_abs() <= tol
    }

    /// Do all entries lie in the tagged subring?
    pub fn entries_in_field(&self, tol: f64) -> bool {
        self.data.iter().all(|s| s.in_field(self.field, tol))
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    /// Block-diagonal assembly (fields must agree).
    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let field = blocks[0].field;
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(field, n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting by modulus.
    pub fn inverse(&self) -> Result<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(self.field, n);
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let (mut piv, mut pv) = (col, a.get(col, col).abs());
            for r in col + 1..n {
                let v = a.get(r, col).abs();
                if v > pv {
                    piv = r;
                    pv = v;
                }
            }
            if pv <= TOL_SINGULAR * scale {
                return Err(Error::SingularMatrix { pivot: pv / scale, tol: TOL_SINGULAR });
            }
            if piv != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(piv, j));
                    a.set(col, j, y);
                    a.set(piv, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(piv, j));
                    inv.set(col, j, y);
                    inv.set(piv, j, x);
                }
            }
            let d = a.get(col, col).inv();
            for j in 0..n {
                a.set(col, j, d * a.get(col, j));
                inv.set(col, j, d * inv.get(col, j));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f.norm_sq() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - f * a.get(col, j);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - f * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Complex realification: identity on R/C entries, and the standard
    /// embedding q = a + b j -> [[a, b], [-conj(b), conj(a)]] for H, giving a
    /// 2r x 2c complex matrix.
    pub fn complex_embedding(&self) -> (Vec<Complex64>, usize, usize) {
        match self.field {
            Field::R | Field::C => {
                let v = self.data.iter().map(|s| s.as_complex()).collect();
                (v, self.rows, self.cols)
            }
            Field::H => {
                let (r, c) = (2 * self.rows, 2 * self.cols);
                let mut v = vec![Complex64::new(0.0, 0.0); r * c];
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        // q = alpha + beta j with alpha = w + x i, beta = y + z i
                        let q = self.get(i, j);
                        let alpha = Complex64::new(q.w, q.x);
                        let beta = Complex64::new(q.y, q.z);
                        v[(2 * i) * c + 2 * j] = alpha;
                        v[(2 * i) * c + 2 * j + 1] = beta;
                        v[(2 * i + 1) * c + 2 * j] = -beta.conj();
                        v[(2 * i + 1) * c + 2 * j + 1] = alpha.conj();
                    }
                }
                (v, r, c)
            }
        }
    }

    /// Field-aware determinant: ordinary (complex-valued) determinant for
    /// R/C; for H the determinant of the complex embedding, which is a
    /// non-negative real (the squared quasideterminant modulus).
    pub fn det_f(&self) -> Complex64 {
        assert!(self.is_square());
        let (mut a, n, _) = self.complex_embedding();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let (mut piv, mut pv) = (col, a[col * n + col].norm());
            for r in col + 1..n {
                let v = a[r * n + col].norm();
                if v > pv {
                    piv = r;
                    pv = v;
                }
            }
            if pv == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// Block LDU factorization for the 2x2 block split at `split`:
    /// `self = L * D * U` with `L` lower block-unitriangular, `D` block
    /// diagonal, `U` upper block-unitriangular. Fails with `NotInBigCell`
    /// when the leading block is singular.
    pub fn block_ldu(&self, split: usize) -> Result<(Mat, Mat, Mat)> {
        assert!(self.is_square() && split < self.rows);
        let n = self.rows;
        let a = self.block(0, 0, split, split);
        let b = self.block(0, split, split, n - split);
        let c = self.block(split, 0, n - split, split);
        let d = self.block(split, split, n - split, n - split);
        let a_inv = a.inverse().map_err(|e| match e {
            Error::SingularMatrix { pivot, .. } => Error::NotInBigCell(pivot),
            e => e,
        })?;
        let schur = d.sub(&c.matmul(&a_inv).matmul(&b));
        let mut l = Mat::identity(self.field, n);
        l.set_block(split, 0, &c.matmul(&a_inv));
        let mut u = Mat::identity(self.field, n);
        u.set_block(0, split, &a_inv.matmul(&b));
        let mut dd = Mat::zeros(self.field, n, n);
        dd.set_block(0, 0, &a);
        dd.set_block(split, split, &schur);
        Ok((l, dd, u))
    }

    /// Exponential of a nilpotent matrix by the (finite) Taylor series.
    /// Verifies nilpotency: `X^rows` must vanish to working precision.
    pub fn nil_exp(&self) -> Result<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut sum = Mat::identity(self.field, n);
        let mut pow = Mat::identity(self.field, n);
        let mut fact = 1.0;
        for k in 1..=n {
            pow = pow.matmul(self);
            fact *= k as f64;
            if k == n {
                let scale = self.max_abs().max(1.0);
                let resid = pow.max_abs() / scale.powi(n as i32);
                if resid > 1e-12 {
                    return Err(Error::NilpotencyViolation(resid));
                }
                break;
            }
            sum = sum.add(&pow.scale(1.0 / fact));
        }
        Ok(sum)
    }

    /// Logarithm of a unipotent matrix (finite Mercator series in `m - 1`).
    pub fn nil_log(&self) -> Result<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let y = self.sub(&Mat::identity(self.field, n));
        let mut sum = Mat::zeros(self.field, n, n);
        let mut pow = Mat::identity(self.field, n);
        for k in 1..=n {
            pow = pow.matmul(&y);
            if k == n {
                let scale = y.max_abs().max(1.0);
                let resid = pow.max_abs() / scale.powi(n as i32);
                if resid > 1e-12 {
                    return Err(Error::NilpotencyViolation(resid));
                }
                break;
            }
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum = sum.add(&pow.scale(sign / k as f64));
        }
        Ok(sum)
    }

    /// General matrix exponential by scaling and squaring with a Taylor tail.
    pub fn expm(&self) -> Mat {
        assert!(self.is_square());
        let n = self.rows;
        let norm = self.norm_frobenius();
        let mut s = 0u32;
        while norm / (1u64 << s) as f64 > 0.5 {
            s += 1;
        }
        let x = self.scale(1.0 / (1u64 << s) as f64);
        let mut sum = Mat::identity(self.field, n);
        let mut term = Mat::identity(self.field, n);
        for k in 1..=18 {
            term = term.matmul(&x).scale(1.0 / k as f64);
            sum = sum.add(&term);
        }
        for _ in 0..s {
            sum = sum.matmul(&sum);
        }
        sum
    }

    /// Flatten to a real coordinate vector (4 reals per entry, row-major).
    pub fn vectorize(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(4 * self.data.len());
        for s in &self.data {
            v.extend_from_slice(&[s.w, s.x, s.y, s.z]);
        }
        v
    }

    pub fn from_vectorized(field: Field, rows: usize, cols: usize, v: &[f64]) -> Mat {
        assert_eq!(v.len(), 4 * rows * cols);
        let data = v
            .chunks(4)
            .map(|c| Scalar::quat(c[0], c[1], c[2], c[3]))
            .collect();
        Mat { field, rows, cols, data }
    }

    /// Euclidean (real trace form) inner product Re tr(A* B).
    pub fn inner(&self, o: &Mat) -> f64 {
        self.data
            .iter()
            .zip(o.data.iter())
            .map(|(a, b)| a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z)
            .sum()
    }

    pub fn shape_check(&self, rows: usize, cols: usize) -> Result<()> {
        if self.rows != rows || self.cols != cols {
            return Err(Error::ShapeMismatch(format!(
                "expected {}x{}, got {}x{}",
                rows, cols, self.rows, self.cols
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_r(rows: usize, cols: usize, v: &[f64]) -> Mat {
        Mat::from_fn(Field::R, rows, cols, |i, j| Scalar::real(v[i * cols + j]))
    }

    #[test]
    fn det_real_oracle() {
        // frozen oracle: det [[1,2],[3,4]] = -2, det of a 3x3 with known value
        let m = mat_r(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert!((m.det_f().re + 2.0).abs() < 1e-14);
        let m = mat_r(3, 3, &[2.0, 0.0, 1.0, -1.0, 3.0, 2.0, 0.0, 5.0, -2.0]);
        // cofactor expansion by hand: 2*(3*-2 - 2*5) - 0 + 1*(-1*5 - 0) = -37
        assert!((m.det_f().re + 37.0).abs() < 1e-12);
    }

    #[test]
    fn det_quaternionic_is_nonnegative_real() {
        // frozen oracle: for diag(q) over H, det of the complex embedding is |q|^2
        let q = Scalar::quat(1.0, 2.0, -1.0, 0.5);
        let mut m = Mat::identity(Field::H, 2);
        m.set(0, 0, q);
        let d = m.det_f();
        assert!(d.im.abs() < 1e-12);
        assert!((d.re - q.norm_sq()).abs() < 1e-12);
        // generic quaternionic matrix: non-negative real determinant
        let mut g = Mat::zeros(Field::H, 2, 2);
        g.set(0, 0, Scalar::quat(0.3, 1.0, 0.0, -0.4));
        g.set(0, 1, Scalar::quat(-1.0, 0.2, 0.7, 0.0));
        g.set(1, 0, Scalar::quat(0.0, -0.5, 1.1, 0.3));
        g.set(1, 1, Scalar::quat(0.9, 0.0, -0.2, 0.8));
        let d = g.det_f();
        assert!(d.im.abs() < 1e-10 * d.norm().max(1.0));
        assert!(d.re >= 0.0);
    }

    #[test]
    fn inverse_round_trip_over_h() {
        let mut g = Mat::identity(Field::H, 3);
        g.set(0, 1, Scalar::quat(0.4, -0.3, 0.8, 0.1));
        g.set(1, 2, Scalar::quat(-0.2, 0.5, 0.0, 0.9));
        g.set(2, 0, Scalar::quat(0.7, 0.1, -0.6, 0.2));
        g.set(1, 1, Scalar::quat(1.5, 0.2, 0.1, -0.3));
        let inv = g.inverse().unwrap();
        assert!(g.matmul(&inv).approx_eq(&Mat::identity(Field::H, 3), 1e-12));
    }

    #[test]
    fn block_ldu_reconstructs() {
        let m = mat_r(4, 4, &[
            2.0, 1.0, 0.5, -1.0,
            0.3, 3.0, 1.0, 0.2,
            -0.5, 0.7, 1.5, 0.1,
            1.0, -0.2, 0.4, 2.5,
        ]);
        let (l, d, u) = m.block_ldu(2).unwrap();
        assert!(l.matmul(&d).matmul(&u).approx_eq(&m, 1e-12));
        // L and U unitriangular
        assert!((l.get(0, 0) - Scalar::one()).abs() < 1e-15);
        assert!(l.get(0, 2).abs() < 1e-15);
        assert!(u.get(2, 0).abs() < 1e-15);
    }

    #[test]
    fn block_ldu_singular_leading_block() {
        let m = mat_r(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(m.block_ldu(1), Err(Error::NotInBigCell(_))));
    }

    #[test]
    fn nil_exp_log_round_trip() {
        let mut x = Mat::zeros(Field::H, 4, 4);
        x.set(0, 1, Scalar::quat(0.5, 1.0, -0.3, 0.2));
        x.set(0, 2, Scalar::real(2.0));
        x.set(1, 3, Scalar::quat(0.0, -0.7, 0.4, 1.1));
        x.set(2, 3, Scalar::complex(0.3, 0.9));
        let e = x.nil_exp().unwrap();
        let back = e.nil_log().unwrap();
        assert!(back.approx_eq(&x, 1e-13));
    }

    #[test]
    fn nil_exp_rejects_non_nilpotent() {
        let m = Mat::identity(Field::R, 3);
        assert!(matches!(m.nil_exp(), Err(Error::NilpotencyViolation(_))));
    }

    #[test]
    fn expm_matches_nil_exp_on_nilpotent() {
        let mut x = Mat::zeros(Field::R, 3, 3);
        x.set(0, 1, Scalar::real(1.2));
        x.set(1, 2, Scalar::real(-0.7));
        assert!(x.expm().approx_eq(&x.nil_exp().unwrap(), 1e-13));
    }

    #[test]
    fn expm_rotation_oracle() {
        // exp of [[0,-t],[t,0]] is the rotation by t (frozen trig values)
        let t = 0.7;
        let mut x = Mat::zeros(Field::R, 2, 2);
        x.set(0, 1, Scalar::real(-t));
        x.set(1, 0, Scalar::real(t));
        let e = x.expm();
        assert!((e.get(0, 0).re() - t.cos()).abs() < 1e-14);
        assert!((e.get(1, 0).re() - t.sin()).abs() < 1e-14);
    }
}
