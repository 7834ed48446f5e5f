//! H-type coordinate calculus on the rank-one nilpotent groups N and Nbar
//! (identified with F^{n-1} + Im F), unipotent square roots, and the
//! splitting N = N_H * exp(n^{-sigma}).

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::groups::{nbar_matrix, GroupDescriptor, Kind};
use crate::mat::Mat;
use crate::scalar::{Field, Scalar};

/// Which nilpotent group a coordinate point lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// N (upper).
    Upper,
    /// Nbar (lower).
    Lower,
}

/// A point of N or Nbar in H-type coordinates (x, z), x in F^{n-1},
/// z in Im F.
#[derive(Debug, Clone, PartialEq)]
pub struct HTypePoint {
    pub field: Field,
    /// Rank-one parameter n (ambient size n+1).
    pub n: usize,
    pub x: Vec<Scalar>,
    pub z: Scalar,
    pub side: Side,
}

impl HTypePoint {
    pub fn new(field: Field, n: usize, x: Vec<Scalar>, z: Scalar, side: Side) -> Result<Self> {
        if x.len() != n - 1 {
            return Err(Error::ShapeMismatch(alloc::format!(
                "expected {} spatial coordinates, got {}",
                n - 1,
                x.len()
            )));
        }
        let tol = 1e-12 * (1.0 + z.abs());
        if !x.iter().all(|s| s.in_field(field, 1e-12 * (1.0 + s.abs())))
            || !z.in_field(field, tol)
        {
            return Err(Error::FieldMismatch("coordinates leave the scalar field".into()));
        }
        if (z + z.conj()).abs() > tol {
            return Err(Error::InvalidInput("z must be purely imaginary".into()));
        }
        Ok(HTypePoint { field, n, x, z, side })
    }

    pub fn zero(field: Field, n: usize, side: Side) -> Self {
        HTypePoint { field, n, x: vec![Scalar::zero(); n - 1], z: Scalar::zero(), side }
    }

    /// Lie-algebra matrix of the point.
    pub fn to_algebra(&self) -> Mat {
        let xbar = nbar_matrix(self.field, self.n, &self.x, self.z);
        match self.side {
            Side::Lower => xbar,
            Side::Upper => xbar.conj_transpose().neg(),
        }
    }

    /// Group matrix exp of the point.
    pub fn to_group(&self) -> Mat {
        self.to_algebra().nil_exp().expect("H-type matrices are nilpotent")
    }

    /// Recover coordinates from a group matrix on the given side.
    pub fn from_group(field: Field, n: usize, side: Side, g: &Mat) -> Result<Self> {
        let mut alg = g.nil_log()?;
        if side == Side::Upper {
            alg = alg.conj_transpose().neg();
        }
        let x: Vec<Scalar> = (0..n - 1).map(|i| alg.get(2 + i, 0)).collect();
        let z = alg.get(0, 0).im_part();
        let p = HTypePoint::new(field, n, x, z, side)?;
        let back = if side == Side::Upper {
            p.to_algebra().conj_transpose().neg()
        } else {
            p.to_algebra()
        };
        if back.sub(&alg).max_abs() > 1e-12 * alg.max_abs().max(1.0) {
            return Err(Error::InvalidInput(
                "matrix is not an H-type group element of this descriptor".into(),
            ));
        }
        Ok(p)
    }
}

/// Group product in coordinates:
/// (x1,z1)*(x2,z2) = (x1+x2, z1+z2+ (x1* x2 - x2* x1)/2).
pub fn ht_mul(p: &HTypePoint, q: &HTypePoint) -> Result<HTypePoint> {
    if p.field != q.field || p.n != q.n || p.side != q.side {
        return Err(Error::InvalidInput("mismatched H-type points".into()));
    }
    let x: Vec<Scalar> = p.x.iter().zip(&q.x).map(|(a, b)| *a + *b).collect();
    let mut w = Scalar::zero();
    for (a, b) in p.x.iter().zip(&q.x) {
        w = w + a.conj() * *b - b.conj() * *a;
    }
    let z = p.z + q.z + w.scale(0.5);
    HTypePoint::new(p.field, p.n, x, z, p.side)
}

/// Group inverse: (x,z)^{-1} = (-x,-z).
pub fn ht_inv(p: &HTypePoint) -> HTypePoint {
    HTypePoint {
        field: p.field,
        n: p.n,
        x: p.x.iter().map(|s| -*s).collect(),
        z: -p.z,
        side: p.side,
    }
}

/// H-type norm N(x,z) = (|x|^4 + 4|z|^2)^{1/4}.
pub fn ht_norm(p: &HTypePoint) -> f64 {
    let x2: f64 = p.x.iter().map(|s| s.norm_sq()).sum();
    (x2 * x2 + 4.0 * p.z.norm_sq()).powf(0.25)
}

/// Square root of a unipotent group element: exp(log(g)/2).
pub fn group_sqrt(g: &Mat) -> Result<Mat> {
    g.nil_log()?.scale(0.5).nil_exp()
}

/// Split n in N as n = n_H * exp(Y) with sigma(n_H) = n_H and
/// sigma(Y) = -Y: n_H = n*(n^{-1} sigma(n))^{1/2}, Y = -log(n^{-1} sigma(n))/2.
pub fn tau_split(d: &GroupDescriptor, n: &Mat) -> Result<(Mat, Mat)> {
    let s = n.inverse()?.matmul(&d.sigma_of(n));
    let log_s = s.nil_log()?;
    let n_h = n.matmul(&log_s.scale(0.5).nil_exp()?);
    let y = log_s.scale(-0.5);
    Ok((n_h, y))
}

/// The n of the descriptor's rank-one realization, or an error for
/// non-rank-one kinds.
pub fn rank1_n(d: &GroupDescriptor) -> Result<usize> {
    match &d.kind {
        Kind::Rank1 { n, .. } | Kind::TrivialSigma { n, .. } => Ok(*n),
        _ => Err(Error::Unsupported("H-type coordinates are rank-one only".into())),
    }
}
