//! Quadrature rules on the unit spheres S^1, S^2, S^3 (with respect to the
//! normalized rotation-invariant measure), boundary sections into the maximal
//! compact subgroup, and a small family of analytic test functions.
//!
//! Convention: the distinguished (polar) axis is the first coordinate; the
//! base point of every sphere is e_1.

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::decomp::complete_unitary;
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, Kind};
use crate::linalg::{dot, RMat};
use crate::mat::Mat;
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::Field;

use core::f64::consts::PI;

/// Quadrature rule on S^dim: unit nodes in R^{dim+1} with weights summing
/// to one.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub dim: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Quadrature value of an integrand given on the nodes.
    pub fn integrate(&self, f: &dyn Fn(&[f64]) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(x, w)| w * f(x))
            .sum()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2).
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Random rotation of R^d from the seed (orthonormalized Gaussian frame).
fn random_rotation(d: usize, rng: &mut Rng) -> RMat {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::new();
        'outer: while cols.len() < d {
            let mut v: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
            for u in &cols {
                let c = dot(&v, u);
                for i in 0..d {
                    v[i] -= c * u[i];
                }
            }
            let nrm = dot(&v, &v).sqrt();
            if nrm < 1e-6 {
                break 'outer;
            }
            for x in v.iter_mut() {
                *x /= nrm;
            }
            cols.push(v);
        }
        if cols.len() == d {
            let mut r = RMat::zeros(d, d);
            for (j, c) in cols.iter().enumerate() {
                for (i, x) in c.iter().enumerate() {
                    r.set(i, j, *x);
                }
            }
            return r;
        }
    }
}

/// Product quadrature on S^2 of the given order (order x 2*order nodes),
/// without the rotation jitter; polar axis first.
fn s2_raw(order: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let (ts, tw) = gauss_legendre(order);
    let naz = 2 * order;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (t, wt) in ts.iter().zip(tw.iter()) {
        let s = (1.0 - t * t).sqrt();
        for j in 0..naz {
            let phi = 2.0 * PI * (j as f64 + 0.5) / naz as f64;
            nodes.push(vec![*t, s * phi.cos(), s * phi.sin()]);
            weights.push(wt / 2.0 / naz as f64);
        }
    }
    (nodes, weights)
}

/// Quadrature rule on S^dim (dim in 1..=3) exact for polynomials up to
/// roughly twice the order, rotated by a seeded random rotation so that no
/// node alignment with coordinate axes is assumed by downstream consumers.
pub fn quad_rule(dim: usize, order: usize, seed: u64) -> Result<SphereRule> {
    if order == 0 {
        return Err(Error::InvalidInput("quadrature order must be positive".into()));
    }
    let (mut nodes, weights): (Vec<Vec<f64>>, Vec<f64>) = match dim {
        1 => {
            let n = 2 * order;
            let nodes = (0..n)
                .map(|i| {
                    let th = 2.0 * PI * (i as f64 + 0.5) / n as f64;
                    vec![th.cos(), th.sin()]
                })
                .collect();
            (nodes, vec![1.0 / n as f64; n])
        }
        2 => s2_raw(order),
        3 => {
            // Gauss-Chebyshev (second kind) in the polar angle against the
            // sin^2 density, times an S^2 rule on the equatorial sphere
            let (inner_nodes, inner_w) = s2_raw(order);
            let np = order;
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            for q in 1..=np {
                let psi = q as f64 * PI / (np as f64 + 1.0);
                let (c, s) = (psi.cos(), psi.sin());
                let wq = PI / (np as f64 + 1.0) * s * s * (2.0 / PI);
                for (xn, xw) in inner_nodes.iter().zip(inner_w.iter()) {
                    nodes.push(vec![c, s * xn[0], s * xn[1], s * xn[2]]);
                    weights.push(wq * xw);
                }
            }
            (nodes, weights)
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no quadrature rule for S^{}",
                dim
            )))
        }
    };
    let rot = random_rotation(dim + 1, &mut Rng::seeded(seed ^ 0x51e4_5eed));
    for x in nodes.iter_mut() {
        *x = rot.mat_vec(x);
    }
    Ok(SphereRule { dim, nodes, weights })
}

/// Real coordinates -> coefficients over the descriptor's base field.
pub(crate) fn scalars_from_real(field: Field, x: &[f64]) -> Result<Vec<Scalar>> {
    let d = field.dim();
    if x.len() % d != 0 {
        return Err(Error::ShapeMismatch(
            "coordinate count incompatible with the base field".into(),
        ));
    }
    Ok(x.chunks(d)
        .map(|c| Scalar {
            w: c[0],
            x: if d > 1 { c[1] } else { 0.0 },
            y: if d > 2 { c[2] } else { 0.0 },
            z: if d > 3 { c[3] } else { 0.0 },
        })
        .collect())
}

/// Coefficients over the base field -> real coordinates.
pub(crate) fn real_from_scalars(field: Field, y: &[Scalar]) -> Vec<f64> {
    let d = field.dim();
    let mut out = Vec::with_capacity(d * y.len());
    for s in y {
        out.push(s.w);
        if d > 1 {
            out.push(s.x);
        }
        if d > 2 {
            out.push(s.y);
        }
        if d > 3 {
            out.push(s.z);
        }
    }
    out
}

/// Dimension of the boundary sphere K/M of a rank-one descriptor, and the
/// real coordinate count (both equal n * dim F - 1 + 1).
pub fn sphere_dim(d: &GroupDescriptor) -> Result<usize> {
    match &d.kind {
        Kind::Rank1 { field, n, .. } | Kind::TrivialSigma { field, n } => {
            Ok(n * field.dim() - 1)
        }
        _ => Err(Error::Unsupported(
            "boundary sphere sections are provided for rank-one kinds".into(),
        )),
    }
}

/// Section of the boundary sphere into the maximal compact subgroup: a
/// matrix k with k * e_1 = x (spatially) whose Iwasawa sphere image is x.
pub fn section_k(d: &GroupDescriptor, x: &[f64]) -> Result<Mat> {
    let sd = sphere_dim(d)?;
    if x.len() != sd + 1 {
        return Err(Error::ShapeMismatch(format!(
            "expected {} sphere coordinates, got {}",
            sd + 1,
            x.len()
        )));
    }
    let nrm = dot(x, x).sqrt();
    if (nrm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput("sphere point must be a unit vector".into()));
    }
    let y = scalars_from_real(d.field, x)?;
    let n = y.len();
    let mut u = complete_unitary(d.field, &y);
    if d.field == Field::C {
        // restore determinant one without touching the first column (the
        // complex case carries a special-unitary constraint)
        let det = u.det_f();
        if n >= 2 {
            let ns = (det.re * det.re + det.im * det.im).max(1e-300);
            let corr = Scalar { w: det.re / ns, x: -det.im / ns, y: 0.0, z: 0.0 };
            for i in 0..n {
                u.set(i, n - 1, u.get(i, n - 1) * corr);
            }
        } else {
            return Err(Error::Unsupported(
                "complex rank-one sections need spatial dimension at least 2".into(),
            ));
        }
    }
    let mut k = Mat::identity(d.field, d.ambient);
    k.set_block(1, 1, &u);
    Ok(k)
}

/// Analytic test functions on spheres, evaluable at arbitrary points.
#[derive(Debug, Clone)]
pub enum SphereFunction {
    /// Constant one.
    Const,
    /// Coordinate x_i.
    Coord(usize),
    /// Product x_i * x_j.
    Quadratic(usize, usize),
    /// exp(-|x - center|^2 / width^2).
    Gaussian { center: Vec<f64>, width: f64 },
    /// Real spherical harmonic on S^2 (degree <= 3), orthonormal for the
    /// surface measure; polar axis is the first coordinate.
    Harmonic { l: usize, m: i32 },
}

impl SphereFunction {
    pub fn eval(&self, p: &[f64]) -> f64 {
        match self {
            SphereFunction::Const => 1.0,
            SphereFunction::Coord(i) => p[*i],
            SphereFunction::Quadratic(i, j) => p[*i] * p[*j],
            SphereFunction::Gaussian { center, width } => {
                let d2: f64 = p
                    .iter()
                    .zip(center.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (-d2 / (width * width)).exp()
            }
            SphereFunction::Harmonic { l, m } => {
                // polar axis first: z is the polar coordinate
                let (z, x, y) = (p[0], p[1], p[2]);
                match (l, m) {
                    (0, 0) => 0.28209479177387814,
                    (1, -1) => 0.4886025119029199 * y,
                    (1, 0) => 0.4886025119029199 * z,
                    (1, 1) => 0.4886025119029199 * x,
                    (2, -2) => 1.0925484305920792 * x * y,
                    (2, -1) => 1.0925484305920792 * y * z,
                    (2, 0) => 0.31539156525252005 * (3.0 * z * z - 1.0),
                    (2, 1) => 1.0925484305920792 * x * z,
                    (2, 2) => 0.5462742152960396 * (x * x - y * y),
                    (3, -3) => 0.5900435899266435 * y * (3.0 * x * x - y * y),
                    (3, -2) => 2.890611442640554 * x * y * z,
                    (3, -1) => 0.4570457994644658 * y * (5.0 * z * z - 1.0),
                    (3, 0) => 0.3731763325901154 * z * (5.0 * z * z - 3.0),
                    (3, 1) => 0.4570457994644658 * x * (5.0 * z * z - 1.0),
                    (3, 2) => 1.445305721320277 * z * (x * x - y * y),
                    (3, 3) => 0.5900435899266435 * x * (x * x - 3.0 * y * y),
                    _ => f64::NAN,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::iwasawa;

    #[test]
    fn weights_are_normalized() {
        for dim in 1..=3 {
            for order in [3usize, 8, 13] {
                let rule = quad_rule(dim, order, 7).unwrap();
                let total: f64 = rule.weights.iter().sum();
                assert!((total - 1.0).abs() < 1e-13, "dim {} order {}", dim, order);
                for x in &rule.nodes {
                    assert!((dot(x, x) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn polynomial_moments_are_exact() {
        // closed moments of the normalized measure on S^{d-1}:
        // <x1^2> = 1/d, <x1^4> = 3/(d(d+2)), <x1^2 x2^2> = 1/(d(d+2))
        for (dim, m2, m4, m22) in [
            (1usize, 0.5, 0.375, 0.125),
            (2, 1.0 / 3.0, 0.2, 1.0 / 15.0),
            (3, 0.25, 0.125, 1.0 / 24.0),
        ] {
            let rule = quad_rule(dim, 10, 3).unwrap();
            for i in 0..=dim {
                let odd = rule.integrate(&|x: &[f64]| x[i]);
                assert!(odd.abs() < 1e-12, "dim {}", dim);
                let even = rule.integrate(&|x: &[f64]| x[i] * x[i]);
                assert!((even - m2).abs() < 1e-12, "dim {} coord {}", dim, i);
            }
            let q4 = rule.integrate(&|x: &[f64]| x[0].powi(4));
            assert!((q4 - m4).abs() < 1e-12, "dim {}", dim);
            let q22 = rule.integrate(&|x: &[f64]| x[0] * x[0] * x[1] * x[1]);
            assert!((q22 - m22).abs() < 1e-12, "dim {}", dim);
        }
    }

    #[test]
    fn different_seeds_agree_on_smooth_integrands() {
        for dim in 1..=3 {
            let mut center = vec![0.0; dim + 1];
            center[0] = 0.6;
            center[dim] = 0.8;
            let f = SphereFunction::Gaussian { center, width: 1.3 };
            let a = quad_rule(dim, 14, 1).unwrap().integrate(&|x: &[f64]| f.eval(x));
            let b = quad_rule(dim, 14, 2).unwrap().integrate(&|x: &[f64]| f.eval(x));
            assert!((a - b).abs() < 1e-9, "dim {}: {} vs {}", dim, a, b);
        }
    }

    #[test]
    fn spherical_harmonics_are_orthonormal() {
        let rule = quad_rule(2, 10, 5).unwrap();
        let fam: Vec<(usize, i32)> = (0..=3)
            .flat_map(|l: usize| (-(l as i32)..=l as i32).map(move |m| (l, m)))
            .collect();
        for (i, &(l1, m1)) in fam.iter().enumerate() {
            for &(l2, m2) in fam.iter().skip(i) {
                let y1 = SphereFunction::Harmonic { l: l1, m: m1 };
                let y2 = SphereFunction::Harmonic { l: l2, m: m2 };
                let ip = rule.integrate(&|x: &[f64]| y1.eval(x) * y2.eval(x));
                let want = if (l1, m1) == (l2, m2) { 1.0 / (4.0 * PI) } else { 0.0 };
                assert!(
                    (ip - want).abs() < 1e-12,
                    "({},{}) x ({},{}): {}",
                    l1,
                    m1,
                    l2,
                    m2,
                    ip
                );
            }
        }
    }

    #[test]
    fn sections_hit_their_targets() {
        let mut rng = Rng::seeded(17);
        for id in ["rank1:R:3:1", "rank1:R:4:2", "rank1:C:2:1", "rank1:H:2:1"] {
            let d = GroupDescriptor::from_id(id).unwrap();
            let sd = sphere_dim(&d).unwrap();
            for _ in 0..20 {
                let mut x: Vec<f64> = (0..=sd).map(|_| rng.normal()).collect();
                let nrm = dot(&x, &x).sqrt();
                for c in x.iter_mut() {
                    *c /= nrm;
                }
                let k = section_k(&d, &x).unwrap();
                // a genuine group element
                assert!(d.defining_residual(&k) < 1e-10, "{}", id);
                // compact: no Iwasawa A- or N-part, sphere image x
                let data = iwasawa(&d, &k).unwrap();
                assert!(data.h_of_g[0].abs() < 1e-10);
                let img = real_from_scalars(d.field, &data.sphere_image);
                for (a, b) in img.iter().zip(x.iter()) {
                    assert!((a - b).abs() < 1e-9, "{}", id);
                }
            }
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        let d = GroupDescriptor::from_id("rank1:R:3:1").unwrap();
        assert!(section_k(&d, &[1.0, 0.0]).is_err());
        assert!(section_k(&d, &[2.0, 0.0, 0.0]).is_err());
        assert!(quad_rule(4, 8, 0).is_err());
        assert!(quad_rule(2, 0, 0).is_err());
        let d = GroupDescriptor::from_id("siegel:2:1").unwrap();
        assert!(sphere_dim(&d).is_err());
    }
}
