//! The invariant kernel K_{alpha,beta}(g,h) = a(w0^{-1}g^{-1}h)^alpha *
//! a(w0^{-1}g^{-1}sigma(g))^beta, its flat-picture closed form on rank-one
//! descriptors, the domain condition (D), and the parameter maps
//! (alpha, beta) <-> (nu, nu').

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::decomp::a_pow;
use crate::error::{Error, Result};
use crate::groups::{GroupDescriptor, Kind};
use crate::htype::{ht_inv, ht_mul, ht_norm, HTypePoint};
use crate::linalg::{dot, norm, svd, RMat};
use crate::mat::Mat;
use crate::rng::Rng;
use crate::weight::Weight;

/// Kernel parameters (alpha, beta), both in a*-coordinates.
#[derive(Debug, Clone)]
pub struct KernelParams {
    pub alpha: Weight,
    pub beta: Weight,
}

impl KernelParams {
    /// Convergent-regime flag: Re(alpha), Re(beta) in the open positive
    /// chamber.
    pub fn convergent(&self, d: &GroupDescriptor) -> bool {
        d.in_a_plus(&self.alpha) && d.in_a_plus(&self.beta)
    }
}

/// Principal-series parameters (nu on a, nu' on a_H).
#[derive(Debug, Clone)]
pub struct InductionParams {
    pub nu: Weight,
    /// In `basis_ah` dual coordinates (split part first, then the
    /// a_H ∩ m part).
    pub nu_prime: Weight,
}

/// K_{alpha,beta}(g,h). A vanishing beta skips the second factor entirely
/// (the classical Knapp-Stein kernel), so sigma-trivial descriptors remain
/// usable.
pub fn kernel_eval(
    d: &GroupDescriptor,
    g: &Mat,
    h: &Mat,
    p: &KernelParams,
) -> Result<Complex64> {
    let w0_inv = d.w0_mat.inverse()?;
    let g_inv = g.inverse()?;
    let first = match a_pow(d, &w0_inv.matmul(&g_inv).matmul(h), &p.alpha) {
        Ok(v) => v,
        Err(Error::NotInBigCell(_)) => return Err(Error::NotInDomain),
        Err(e) => return Err(e),
    };
    if p.beta.is_zero(0.0) {
        return Ok(first);
    }
    let second = match a_pow(d, &w0_inv.matmul(&g_inv).matmul(&d.sigma_of(g)), &p.beta) {
        Ok(v) => v,
        Err(Error::NotInBigCell(_)) => return Err(Error::NotInDomain),
        Err(e) => return Err(e),
    };
    Ok(first * second)
}

/// Flat-picture kernel on rank-one descriptors:
/// N(X^{-1}Y)^{2 alpha} * N(X^{-1} sigma(X))^{2 beta} with scalar
/// parameters along the descriptor's a*-ray. Vanishing norms extend by 0
/// when the corresponding exponent has positive real part and are
/// NotInDomain otherwise.
pub fn flat_kernel_eval(
    d: &GroupDescriptor,
    x: &HTypePoint,
    y: &HTypePoint,
    p: &KernelParams,
) -> Result<Complex64> {
    let alpha = p.alpha.0[0];
    let beta = p.beta.0[0];
    // Y must lie in nbar_H
    let ya = y.to_algebra();
    if d.sigma_of(&ya).sub(&ya).max_abs() > 1e-9 * ya.max_abs().max(1.0) {
        return Err(Error::InvalidInput("Y must lie in the H-side nilradical".into()));
    }
    let n1 = ht_norm(&ht_mul(&ht_inv(x), y)?);
    let sx = HTypePoint::from_group(
        x.field,
        x.n,
        x.side,
        &d.sigma_of(&x.to_group()),
    )?;
    let n2 = ht_norm(&ht_mul(&ht_inv(x), &sx)?);
    let pow = |base: f64, e: Complex64| -> Result<Complex64> {
        if base <= 1e-300 {
            if e.re > 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if e.norm() < 1e-300 {
                return Ok(Complex64::new(1.0, 0.0));
            }
            return Err(Error::NotInDomain);
        }
        Ok((e * 2.0 * base.ln()).exp())
    };
    Ok(pow(n1, alpha)? * pow(n2, beta)?)
}

/// Outcome of the condition (D) check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionD {
    /// Empirical: p^lambda restricted to nbar^{-sigma} is not identically 0.
    pub holds: bool,
    /// Closed-form answer for the catalogue kind.
    pub analytic: bool,
}

/// Condition (D): the restriction of p^lambda to nbar^{-sigma} does not
/// vanish identically (equivalently, the kernel's domain is non-empty).
pub fn check_condition_d(d: &GroupDescriptor) -> ConditionD {
    let lam = Weight(d.scalar_ray.iter().map(|&r| Complex64::new(r, 0.0)).collect());
    let mut rng = Rng::seeded(0x5eed);
    let mut best: f64 = 0.0;
    let mut samples: Vec<Mat> = d.basis_nbar_minus_sigma.clone();
    for _ in 0..20 {
        if d.basis_nbar_minus_sigma.is_empty() {
            break;
        }
        samples.push(d.random_algebra_element(&d.basis_nbar_minus_sigma, &mut rng));
    }
    for x in &samples {
        if let Ok(v) = crate::decomp::p_lambda(d, x, &lam) {
            best = best.max(v.norm());
        }
    }
    let holds = best > crate::TOL_SINGULAR;
    let analytic = match &d.kind {
        Kind::Rank1 { .. } | Kind::Product { .. } | Kind::Gl4nOverGl2nC { .. } => true,
        Kind::Siegel { n, m } | Kind::GlBlock { n, m, .. } => *n == 2 * m,
        Kind::TrivialSigma { .. } => false,
    };
    ConditionD { holds, analytic }
}

fn pullback_t(w: &Weight, m: &RMat) -> Weight {
    // coordinates of the functional composed with the linear map given by m
    w.pullback(m)
}

/// nu = -w0.alpha + sigma.beta - w0.beta + rho;
/// nu' = -(alpha restricted to a ∩ a_H) - rho_H (zero on the a_H ∩ m part).
pub fn params_to_induction(d: &GroupDescriptor, p: &KernelParams) -> InductionParams {
    let rho = Weight::real(&d.rho);
    let nu = pullback_t(&p.alpha, &d.w0_on_a)
        .neg()
        .add(&pullback_t(&p.beta, &d.sigma_on_a))
        .sub(&pullback_t(&p.beta, &d.w0_on_a))
        .add(&rho);
    let mut npc = vec![Complex64::new(0.0, 0.0); d.a_h_dim()];
    for (i, c) in npc.iter_mut().enumerate() {
        if i < d.a_h_split {
            // alpha evaluated on the i-th split basis vector of a_H
            let mut v = Complex64::new(0.0, 0.0);
            for j in 0..d.a_dim() {
                v += p.alpha.0[j] * d.a_h_in_a.get(j, i);
            }
            *c = -v - d.rho_h[i];
        } else {
            *c = Complex64::new(-d.rho_h[i], 0.0);
        }
    }
    InductionParams { nu, nu_prime: Weight(npc) }
}

/// Least-squares solve of a small real system via the SVD.
fn lsq(m: &RMat, b: &[f64]) -> Vec<f64> {
    let (u, s, vt) = svd(m);
    let mut c = vec![0.0; m.cols];
    for k in 0..s.len() {
        if s[k] <= 1e-12 * s[0].max(1.0) {
            continue;
        }
        let ub = dot(&u.col(k), b);
        for j in 0..m.cols {
            c[j] += vt.get(k, j) * ub / s[k];
        }
    }
    c
}

/// Invert the parameter map on descriptors where w0 acts as -1 on a,
/// returning the canonical gauge representative with beta vanishing on
/// a^{-sigma}. Fails with ParameterConstraint when (nu'+rho_H) does not
/// vanish on a_H ∩ m, and Unsupported when w0|a is not -1.
pub fn induction_to_params(d: &GroupDescriptor, i: &InductionParams) -> Result<KernelParams> {
    let k = d.a_dim();
    for r in 0..k {
        for c in 0..k {
            let want = if r == c { -1.0 } else { 0.0 };
            if (d.w0_on_a.get(r, c) - want).abs() > 1e-12 {
                return Err(Error::Unsupported(
                    "parameter inversion requires w0 = -1 on a".into(),
                ));
            }
        }
    }
    // necessary condition: (nu' + rho_H) vanishes on a_H ∩ m
    for idx in d.a_h_split..d.a_h_dim() {
        let v = i.nu_prime.0[idx] + d.rho_h[idx];
        if v.norm() > 1e-9 {
            return Err(Error::ParameterConstraint(alloc::format!(
                "(nu' + rho_H) must vanish on a_H ∩ m; coordinate {} is {}",
                idx,
                v
            )));
        }
    }
    // alpha = P_{-sigma}iᵀ(mu) + sigma-fixed functional matching
    // -(nu'+rho_H) on a ∩ a_H, where mu = nu - rho
    let mu = i.nu.sub(&Weight::real(&d.rho));
    let s = &d.sigma_on_a;
    // sigma-anti part of mu: ((I - Sᵀ)/2) mu
    let mut alpha = vec![Complex64::new(0.0, 0.0); k];
    for r in 0..k {
        let mut acc = mu.0[r];
        for c in 0..k {
            acc -= mu.0[c] * s.get(r, c);
        }
        alpha[r] = acc * 0.5;
    }
    // solve for the sigma-fixed functional: (I - Sᵀ)c = 0 and
    // a_h_in_aᵀ c = -(nu' + rho_H)|split
    let rows = k + d.a_h_split;
    let mut m = RMat::zeros(rows, k);
    for r in 0..k {
        for c in 0..k {
            let v = if r == c { 1.0 } else { 0.0 };
            m.set(r, c, v - s.get(c, r));
        }
    }
    for idx in 0..d.a_h_split {
        for j in 0..k {
            m.set(k + idx, j, d.a_h_in_a.get(j, idx));
        }
    }
    let mut rhs_re = vec![0.0; rows];
    let mut rhs_im = vec![0.0; rows];
    for idx in 0..d.a_h_split {
        let v = -(i.nu_prime.0[idx] + d.rho_h[idx]);
        rhs_re[k + idx] = v.re;
        rhs_im[k + idx] = v.im;
    }
    let cre = lsq(&m, &rhs_re);
    let cim = lsq(&m, &rhs_im);
    // consistency of the overdetermined solve
    let back_re = m.mat_vec(&cre);
    let back_im = m.mat_vec(&cim);
    let res = back_re
        .iter()
        .zip(&rhs_re)
        .chain(back_im.iter().zip(&rhs_im))
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if res > 1e-9 * (norm(&rhs_re) + norm(&rhs_im)).max(1.0) {
        return Err(Error::ParameterConstraint(
            "nu' split values are incompatible with a sigma-fixed alpha".into(),
        ));
    }
    for r in 0..k {
        alpha[r] += Complex64::new(cre[r], cim[r]);
    }
    let alpha = Weight(alpha);
    // beta = (mu - alpha)/2, sigma-fixed by construction
    let beta = mu.sub(&alpha).scale(Complex64::new(0.5, 0.0));
    Ok(KernelParams { alpha, beta })
}

/// Basis of the gauge directions (a^{w0 sigma})* along which beta may be
/// shifted without changing the kernel; empty when the space is zero
/// (rank-one and the GL(4n)/GL(2n,C) pair).
pub fn beta_gauge_directions(d: &GroupDescriptor) -> Vec<Weight> {
    let k = d.a_dim();
    // fixed functionals of (w0 sigma)ᵀ: kernel of (w0 sigma)ᵀ - I
    let mut m = RMat::zeros(k, k);
    for r in 0..k {
        for c in 0..k {
            let mut ws = 0.0;
            for t in 0..k {
                ws += d.sigma_on_a.get(r, t) * d.w0_on_a.get(t, c);
            }
            // transpose minus identity
            let v = ws - if r == c { 1.0 } else { 0.0 };
            m.set(c, r, v);
        }
    }
    crate::linalg::kernel_basis(&m, 1e-10)
        .into_iter()
        .map(|v| Weight(v.iter().map(|&x| Complex64::new(x, 0.0)).collect()))
        .collect()
}
