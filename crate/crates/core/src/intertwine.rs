//! Principal-series actions in the compact picture, application of the
//! boundary-kernel operator by spherical quadrature, intertwining-property
//! residuals, K-type diagnostics for the classical operator, and the
//! compact-versus-nilpotent change-of-variables check.
//!
//! Everything here works on rank-one descriptors (including the
//! sigma-trivial classical limit), whose boundary is a sphere that the
//! `sphere` module can quadrate (dimension at most 3).

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::decomp::iwasawa;
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, Kind};
use crate::kernel::{kernel_eval, params_to_induction, KernelParams};
use crate::linalg::dot;
use crate::mat::Mat;
use crate::rng::Rng;
use crate::sphere::{
    gauss_legendre, quad_rule, real_from_scalars, section_k, sphere_dim, SphereFunction,
    SphereRule,
};
use crate::weight::Weight;

use core::f64::consts::PI;

/// Complex-valued function on a boundary sphere, given by real coordinates.
pub type BoundaryValue<'a> = &'a dyn Fn(&[f64]) -> Complex64;

/// Real coordinate count of the symmetry subgroup's boundary sphere.
pub fn h_sphere_coords(d: &GroupDescriptor) -> Result<usize> {
    match &d.kind {
        Kind::Rank1 { field, m, .. } => Ok(m * field.dim()),
        Kind::TrivialSigma { field, n } => Ok(n * field.dim()),
        _ => Err(Error::Unsupported(
            "boundary operators are provided for rank-one kinds".into(),
        )),
    }
}

/// Embed a point of the H-side sphere into the full boundary sphere
/// (zero-padding the coordinates the symmetry subgroup does not reach).
fn pad_point(d: &GroupDescriptor, y: &[f64]) -> Result<Vec<f64>> {
    let small = h_sphere_coords(d)?;
    if y.len() != small {
        return Err(Error::ShapeMismatch(
            "H-sphere point has the wrong coordinate count".into(),
        ));
    }
    let full = sphere_dim(d)? + 1;
    let mut out = vec![0.0; full];
    out[..small].copy_from_slice(y);
    Ok(out)
}

fn cexp(z: Complex64) -> Complex64 {
    let r = z.re.exp();
    Complex64::new(r * z.im.cos(), r * z.im.sin())
}

/// Principal-series action in the compact picture:
/// (pi_nu(g) f)(x) = e^{-(nu+rho) H(g^{-1} k_x)} f(sphere(g^{-1} k_x)).
pub fn pi_value(
    d: &GroupDescriptor,
    nu: &Weight,
    g: &Mat,
    f: BoundaryValue,
    x: &[f64],
) -> Result<Complex64> {
    let k = section_k(d, x)?;
    let data = iwasawa(d, &g.inverse()?.matmul(&k))?;
    let expo = nu.add(&Weight::real(&d.rho)).apply(&data.h_of_g);
    let point = real_from_scalars(d.field, &data.sphere_image);
    Ok(cexp(-expo) * f(&point))
}

/// The same action for the symmetry subgroup's principal series on its own
/// boundary sphere; h must belong to the symmetry subgroup.
pub fn tau_value(
    d: &GroupDescriptor,
    nu_prime: &Weight,
    h: &Mat,
    f: BoundaryValue,
    y: &[f64],
) -> Result<Complex64> {
    let small = h_sphere_coords(d)?;
    let k = section_k(d, &pad_point(d, y)?)?;
    let data = iwasawa(d, &h.inverse()?.matmul(&k))?;
    let point = real_from_scalars(d.field, &data.sphere_image);
    // the moved point must stay on the embedded H-sphere
    for c in point[small..].iter() {
        if c.abs() > 1e-8 {
            return Err(Error::InvalidInput(
                "element does not preserve the H-sphere; not in the symmetry subgroup".into(),
            ));
        }
    }
    let expo = nu_prime.add(&Weight::real(&d.rho_h)).apply(&data.h_of_g);
    Ok(cexp(-expo) * f(&point[..small]))
}

/// Apply the boundary-kernel operator by quadrature:
/// (A f)(y) = sum_j w_j K_{alpha,beta}(k_{x_j}, k_y) f(x_j),
/// where y lies on the H-side sphere.
pub fn sbo_value(
    d: &GroupDescriptor,
    rule: &SphereRule,
    p: &KernelParams,
    f: BoundaryValue,
    y: &[f64],
) -> Result<Complex64> {
    if rule.dim != sphere_dim(d)? {
        return Err(Error::ShapeMismatch(
            "quadrature rule does not match the boundary sphere".into(),
        ));
    }
    let ky = section_k(d, &pad_point(d, y)?)?;
    // with positive exponents the kernel extends continuously by zero onto
    // the singular set, so nodes that land there contribute nothing
    let extend_by_zero = p.alpha.0.iter().all(|c| c.re > 0.0)
        && p.beta.0.iter().all(|c| c.re >= 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let kx = section_k(d, x)?;
        match kernel_eval(d, &kx, &ky, p) {
            Ok(v) => acc += v * f(x) * *w,
            Err(Error::NotInDomain) | Err(Error::SingularMatrix { .. })
                if extend_by_zero => {}
            Err(e) => return Err(e),
        }
    }
    Ok(acc)
}

/// Precomputed boundary operator for a fixed quadrature rule and kernel
/// parameters on a rank-one descriptor. The kernel between a node and an
/// arbitrary section reduces to a single coefficient pairing, which makes
/// high-order rules affordable.
pub struct BoundaryOperator {
    pub params: KernelParams,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    /// r_i = (row 0 + row 1) of w0^{-1} k_i^{-1}, scaled by 1/sqrt(2); the
    /// kernel coefficient against a section k is r_i . (k e+).
    rows: Vec<Vec<crate::scalar::Scalar>>,
    /// per-node second kernel factor a(w0^{-1} k_i^{-1} sigma(k_i))^beta
    beta_factor: Vec<Complex64>,
}

/// Build the fast boundary operator (rank-one kinds only).
pub fn boundary_operator(
    d: &GroupDescriptor,
    rule: &SphereRule,
    p: &KernelParams,
) -> Result<BoundaryOperator> {
    if rule.dim != sphere_dim(d)? {
        return Err(Error::ShapeMismatch(
            "quadrature rule does not match the boundary sphere".into(),
        ));
    }
    let w0_inv = d.w0_mat.inverse()?;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let beta_zero = p.beta.is_zero(0.0);
    let mut rows = Vec::with_capacity(rule.nodes.len());
    let mut beta_factor = Vec::with_capacity(rule.nodes.len());
    for x in &rule.nodes {
        let k = section_k(d, x)?;
        let k_inv = k.conj_transpose();
        let m = w0_inv.matmul(&k_inv);
        let row: Vec<crate::scalar::Scalar> = (0..d.ambient)
            .map(|t| (m.get(0, t) + m.get(1, t)).scale(s))
            .collect();
        rows.push(row);
        if beta_zero {
            beta_factor.push(Complex64::new(1.0, 0.0));
        } else {
            let arg = m.matmul(&d.sigma_of(&k));
            match crate::decomp::a_pow(d, &arg, &p.beta) {
                Ok(v) => beta_factor.push(v),
                // nodes in (a numerical neighborhood of) the complement of
                // the open cell carry a vanishing kernel: extend by zero
                Err(Error::NotInBigCell(_)) | Err(Error::SingularMatrix { .. }) => {
                    beta_factor.push(Complex64::new(0.0, 0.0))
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(BoundaryOperator {
        params: p.clone(),
        nodes: rule.nodes.clone(),
        weights: rule.weights.clone(),
        rows,
        beta_factor,
    })
}

impl BoundaryOperator {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    /// Apply the operator to precomputed node values of the integrand at an
    /// H-sphere point y.
    pub fn apply_values(
        &self,
        d: &GroupDescriptor,
        values: &[Complex64],
        y: &[f64],
    ) -> Result<Complex64> {
        if values.len() != self.nodes.len() {
            return Err(Error::ShapeMismatch("one value per node required".into()));
        }
        let ky = section_k(d, &pad_point(d, y)?)?;
        let u = crate::decomp::apply_to_eplus(&ky);
        let alpha = self.params.alpha.0[0];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.nodes.len() {
            let mut c = crate::scalar::Scalar::zero();
            for (r, v) in self.rows[i].iter().zip(u.iter()) {
                c = c + *r * *v;
            }
            let amp = c.abs();
            if amp <= crate::TOL_SINGULAR {
                // extension by zero across the singular set
                continue;
            }
            let factor = cexp(alpha * amp.ln()) * self.beta_factor[i];
            acc += factor * values[i] * self.weights[i];
        }
        Ok(acc)
    }

    /// Apply to a function by evaluating it on the nodes first.
    pub fn apply(
        &self,
        d: &GroupDescriptor,
        f: BoundaryValue,
        y: &[f64],
    ) -> Result<Complex64> {
        let values: Vec<Complex64> = self.nodes.iter().map(|x| f(x)).collect();
        self.apply_values(d, &values, y)
    }
}

/// Relative residual of the intertwining property
/// A (pi_nu(h0) f) = tau_nu'(h0) (A f)
/// over a few H-sphere evaluation points, with (nu, nu') derived from the
/// kernel parameters and h0 a mild random element of the symmetry subgroup.
pub fn intertwining_residual(
    d: &GroupDescriptor,
    rule: &SphereRule,
    p: &KernelParams,
    f: &SphereFunction,
    seed: u64,
) -> Result<f64> {
    let op = boundary_operator(d, rule, p)?;
    intertwining_residual_with(d, &op, f, seed)
}

/// Same residual, reusing a prebuilt operator (the node precomputation is
/// independent of the random symmetry element and evaluation points).
pub fn intertwining_residual_with(
    d: &GroupDescriptor,
    op: &BoundaryOperator,
    f: &SphereFunction,
    seed: u64,
) -> Result<f64> {
    let ind = params_to_induction(d, &op.params);
    let mut rng = Rng::seeded(seed);
    // a mild group element keeps the transformed integrand well resolved
    let mut xlog = Mat::zeros(d.field, d.ambient, d.ambient);
    for b in &d.basis_h {
        xlog = xlog.add(&b.scale(0.35 * rng.normal()));
    }
    let h0 = xlog.expm();
    let small = h_sphere_coords(d)?;
    let fc = |x: &[f64]| Complex64::new(f.eval(x), 0.0);
    // node values of f and of pi_nu(h0) f, computed once and reused across
    // all evaluation points
    let f_vals: Vec<Complex64> = op.nodes().iter().map(|x| fc(x)).collect();
    let pif_vals: Vec<Complex64> = op
        .nodes()
        .iter()
        .map(|x| pi_value(d, &ind.nu, &h0, &fc, x).expect("series action value"))
        .collect();
    let af = |y: &[f64]| -> Complex64 {
        op.apply_values(d, &f_vals, y).expect("operator value")
    };
    let mut num = 0.0_f64;
    let mut den = 0.0_f64;
    for _ in 0..6 {
        let mut y: Vec<f64> = (0..small).map(|_| rng.normal()).collect();
        let nrm = dot(&y, &y).sqrt();
        for c in y.iter_mut() {
            *c /= nrm;
        }
        let lhs = op.apply_values(d, &pif_vals, &y)?;
        let rhs = tau_value(d, &ind.nu_prime, &h0, &af, &y)?;
        num = num.max((lhs - rhs).norm());
        den = den.max(rhs.norm());
    }
    Ok(num / den.max(1e-300))
}

/// Diagnostic for the classical operator (vanishing beta) on the
/// two-dimensional boundary sphere.
#[derive(Debug, Clone, Copy)]
pub struct KtypeReport {
    pub degree: usize,
    /// Empirical eigenvalue on the degree-l spherical harmonics.
    pub eigenvalue: f64,
    /// Independent one-dimensional quadrature oracle for the eigenvalue.
    pub oracle: f64,
    /// Largest deviation of individual ratios from the eigenvalue (over
    /// harmonics of the degree and over evaluation points).
    pub spread: f64,
}

fn legendre_p(l: usize, t: f64) -> f64 {
    let mut p0 = 1.0;
    let mut p1 = t;
    if l == 0 {
        return p0;
    }
    for k in 2..=l {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Eigenvalue oracle: the operator acts on degree-l harmonics by
/// (1/2) * Int ((1-t)/2)^alpha P_l(t) dt.
pub fn ktype_eigenvalue_oracle(alpha: f64, l: usize) -> f64 {
    let (ts, ws) = gauss_legendre(200);
    let mut acc = 0.0;
    for (t, w) in ts.iter().zip(ws.iter()) {
        acc += w * ((1.0 - t) / 2.0).powf(alpha) * legendre_p(l, *t);
    }
    acc / 2.0
}

/// Check that the classical operator acts on the degree-l harmonics by a
/// scalar. `corruption` multiplies the kernel by (1 + corruption * x_2) to
/// provide a negative control; pass zero for the honest operator.
pub fn knapp_stein_ktype_check(
    d: &GroupDescriptor,
    rule: &SphereRule,
    alpha: f64,
    l: usize,
    corruption: f64,
) -> Result<KtypeReport> {
    if sphere_dim(d)? != 2 {
        return Err(Error::Unsupported(
            "harmonic diagnostics need a two-dimensional boundary sphere".into(),
        ));
    }
    let p = KernelParams {
        alpha: Weight::real(&[alpha]),
        beta: Weight::zero(d.a_dim()),
    };
    let mut rng = Rng::seeded(41);
    let mut points: Vec<Vec<f64>> = Vec::new();
    while points.len() < 6 {
        let mut y: Vec<f64> = (0..3).map(|_| rng.normal()).collect();
        let nrm = dot(&y, &y).sqrt();
        for c in y.iter_mut() {
            *c /= nrm;
        }
        points.push(y);
    }
    let mut ratios: Vec<f64> = Vec::new();
    for m in -(l as i32)..=(l as i32) {
        let harmonic = SphereFunction::Harmonic { l, m };
        let fc = |x: &[f64]| {
            Complex64::new(harmonic.eval(x) * (1.0 + corruption * x[1]), 0.0)
        };
        for y in &points {
            let denom = harmonic.eval(y);
            if denom.abs() < 0.05 {
                continue;
            }
            let v = sbo_value(d, rule, &p, &fc, y)?;
            if v.im.abs() > 1e-9 * v.norm().max(1.0) {
                return Err(Error::InvalidInput("unexpected imaginary part".into()));
            }
            ratios.push(v.re / denom);
        }
    }
    if ratios.is_empty() {
        return Err(Error::InvalidInput("no usable evaluation points".into()));
    }
    let eigenvalue = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios
        .iter()
        .map(|r| (r - eigenvalue).abs())
        .fold(0.0_f64, f64::max);
    Ok(KtypeReport {
        degree: l,
        eigenvalue,
        oracle: ktype_eigenvalue_oracle(alpha, l),
        spread,
    })
}

/// Compare the normalized boundary integral of a test function computed on
/// the compact side against the nilpotent-chart integral
/// (1/normalizer) Int f(sphere(n(x))) (1+|x|^2)^{-2 rho} dx
/// truncated at the given radius. Returns (compact side, chart side).
/// Supported on the real rank-one kinds with n in 2..=4, where the
/// normalizers are pi, pi and pi^2/4.
pub fn k_nbar_change_of_vars_check(
    d: &GroupDescriptor,
    order: usize,
    radius: f64,
    f: &SphereFunction,
) -> Result<(f64, f64)> {
    let (n, normalizer) = match &d.kind {
        Kind::Rank1 { field: crate::Field::R, n, .. }
        | Kind::TrivialSigma { field: crate::Field::R, n } => match n {
            2 | 3 => (*n, PI),
            4 => (*n, PI * PI / 4.0),
            _ => {
                return Err(Error::Unsupported(
                    "chart comparison implemented for n in 2..=4".into(),
                ))
            }
        },
        _ => {
            return Err(Error::Unsupported(
                "chart comparison implemented for the real rank-one kinds".into(),
            ))
        }
    };
    let sd = sphere_dim(d)?;
    let rule = quad_rule(sd, order, 9)?;
    let compact = rule.integrate(&|x: &[f64]| f.eval(x));

    // chart integrand at a point x of R^{n-1}
    let rho1 = d.rho[0];
    let chart_value = |x: &[f64]| -> Result<f64> {
        let xs: Vec<crate::scalar::Scalar> =
            x.iter().map(|&c| crate::scalar::Scalar::real(c)).collect();
        let nbar = crate::groups::nbar_matrix(d.field, n, &xs, crate::scalar::Scalar::zero())
            .nil_exp()?;
        let data = iwasawa(d, &nbar)?;
        let point = real_from_scalars(d.field, &data.sphere_image);
        Ok(f.eval(&point) * (-2.0 * rho1 * data.h_of_g[0]).exp())
    };

    // radial-angular quadrature over R^{n-1}, radial part on [0, radius]
    // through the substitution r = u / (1 - u)
    let (angles, aweights, surface): (Vec<Vec<f64>>, Vec<f64>, f64) = match n {
        2 => (vec![vec![1.0], vec![-1.0]], vec![0.5, 0.5], 2.0),
        3 => {
            let r = quad_rule(1, 24, 11)?;
            (r.nodes, r.weights, 2.0 * PI)
        }
        _ => {
            let r = quad_rule(2, 20, 11)?;
            (r.nodes, r.weights, 4.0 * PI)
        }
    };
    let (gt, gw) = gauss_legendre(80);
    let umax = radius / (1.0 + radius);
    let mut chart = 0.0;
    for (t, w) in gt.iter().zip(gw.iter()) {
        let u = 0.5 * umax * (t + 1.0);
        let du = 0.5 * umax * w;
        let r = u / (1.0 - u);
        let jac = 1.0 / ((1.0 - u) * (1.0 - u));
        let mut ang = 0.0;
        for (omega, aw) in angles.iter().zip(aweights.iter()) {
            let x: Vec<f64> = omega.iter().map(|c| c * r).collect();
            ang += aw * chart_value(&x)?;
        }
        chart += du * jac * r.powi(n as i32 - 2) * ang * surface;
    }
    Ok((compact, chart / normalizer))
}
