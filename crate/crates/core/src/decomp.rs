//! Group factorizations: Iwasawa (rank-one, via the lightcone highest-weight
//! vector), Bruhat big-cell factorization g = nbar * m * a * n, the function
//! a(g)^lambda on the open cell, and the polynomial p^lambda on nbar.

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{eplus_coeff, nbar_matrix, GroupDescriptor, Kind};
use crate::mat::Mat;
use crate::scalar::{Field, Scalar};
use crate::weight::Weight;
use crate::TOL_SINGULAR;

/// Iwasawa data for g = kappa * m * exp(H) * n (rank-one kinds only).
#[derive(Debug, Clone)]
pub struct IwasawaData {
    /// K-part (well-defined modulo M ∩ K).
    pub kappa: Mat,
    /// a-logarithm of the A-part, in `basis_a` coordinates.
    pub h_of_g: Vec<f64>,
    /// kappa * basepoint: unit sphere point (spatial coordinates).
    pub sphere_image: Vec<Scalar>,
    /// M-part of the residual kappa^{-1} g in MAN.
    pub m_part: Mat,
    /// N-part.
    pub n_part: Mat,
}

/// Bruhat data for g = nbar * m * a * n in the open cell.
#[derive(Debug, Clone)]
pub struct BruhatData {
    pub nbar: Mat,
    pub m_part: Mat,
    /// a-logarithm in `basis_a` coordinates.
    pub a_log: Vec<f64>,
    pub n_part: Mat,
}

impl BruhatData {
    /// A-part as a matrix.
    pub fn a_mat(&self, d: &GroupDescriptor) -> Mat {
        a_exp(d, &self.a_log)
    }
}

/// exp of an a-coordinate vector.
pub fn a_exp(d: &GroupDescriptor, t: &[f64]) -> Mat {
    let mut x = Mat::zeros(d.field, d.ambient, d.ambient);
    for (ti, ai) in t.iter().zip(d.basis_a.iter()) {
        x = x.add(&ai.scale(*ti));
    }
    x.expm()
}

/// Change of basis to lightcone coordinates (e+, spatial, e-) for an
/// (n+1)-dimensional rank-one ambient space; real orthogonal.
fn lightcone_basis(field: Field, nn: usize) -> Mat {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut c = Mat::zeros(field, nn, nn);
    c.set(0, 0, Scalar::real(s));
    c.set(1, 0, Scalar::real(s));
    c.set(0, nn - 1, Scalar::real(s));
    c.set(1, nn - 1, Scalar::real(-s));
    for i in 2..nn {
        c.set(i, i - 1, Scalar::one());
    }
    c
}

/// g * e+ in ambient coordinates.
pub(crate) fn apply_to_eplus(g: &Mat) -> Vec<Scalar> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut eplus = vec![Scalar::zero(); g.rows];
    eplus[0] = Scalar::real(s);
    eplus[1] = Scalar::real(s);
    g.mat_vec(&eplus)
}

/// Complete a unit vector to a unitary matrix over F having it as first
/// column (modified Gram-Schmidt against the standard basis).
pub(crate) fn complete_unitary(field: Field, y: &[Scalar]) -> Mat {
    let n = y.len();
    let mut cols: Vec<Vec<Scalar>> = vec![y.to_vec()];
    let inner = |a: &[Scalar], b: &[Scalar]| -> Scalar {
        let mut s = Scalar::zero();
        for (ai, bi) in a.iter().zip(b.iter()) {
            s = s + ai.conj() * *bi;
        }
        s
    };
    let mut k = 0;
    while cols.len() < n && k < n {
        let mut v = vec![Scalar::zero(); n];
        v[k] = Scalar::one();
        k += 1;
        for _ in 0..2 {
            for u in cols.iter() {
                let c = inner(u, &v);
                for i in 0..n {
                    v[i] = v[i] - u[i] * c;
                }
            }
        }
        let norm: f64 = v.iter().map(|s| s.norm_sq()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for vi in v.iter_mut() {
                *vi = vi.scale(1.0 / norm);
            }
            cols.push(v);
        }
    }
    Mat::from_fn(field, n, n, |i, j| cols[j][i])
}

/// Split an element of MAN (stabilizer of the e+ ray) into its M, A, N
/// factors via the lightcone basis.
fn split_man(d: &GroupDescriptor, nn: usize, w: &Mat) -> Result<(Mat, f64, Mat)> {
    let c = lightcone_basis(d.field, nn);
    let ct = c.transpose();
    let w_lc = ct.matmul(w).matmul(&c);
    let lead = w_lc.get(0, 0);
    let amp = lead.abs();
    if amp <= TOL_SINGULAR {
        return Err(Error::NotInBigCell(amp));
    }
    let t = amp.ln();
    let u = lead.scale(1.0 / amp);
    let mut m_lc = Mat::zeros(d.field, nn, nn);
    m_lc.set(0, 0, u);
    m_lc.set(nn - 1, nn - 1, u);
    let wblk = w_lc.block(1, 1, nn - 2, nn - 2);
    m_lc.set_block(1, 1, &wblk);
    let m = c.matmul(&m_lc).matmul(&ct);
    let mut a_lc_d = vec![1.0; nn];
    a_lc_d[0] = t.exp();
    a_lc_d[nn - 1] = (-t).exp();
    let a = c.matmul(&Mat::diag(d.field, &a_lc_d)).matmul(&ct);
    let n_part = a
        .inverse()?
        .matmul(&m.inverse()?)
        .matmul(w);
    Ok((m, t, n_part))
}

/// Rank-one Iwasawa via the lightcone highest-weight vector. The same code
/// serves the H-factor of a rank-one pair: for h in H the sphere image lies
/// in the H-sphere and kappa lands in K ∩ H automatically.
fn iwasawa_rank1(d: &GroupDescriptor, nn: usize, g: &Mat) -> Result<IwasawaData> {
    let v = apply_to_eplus(g);
    let v0 = v[0];
    let amp = v0.abs();
    if amp <= TOL_SINGULAR {
        return Err(Error::InvalidInput(
            "time component of g * e+ vanished; not a group element".into(),
        ));
    }
    let t = (core::f64::consts::SQRT_2 * amp).ln();
    let v0_inv = v0.inv();
    let y: Vec<Scalar> = (1..nn).map(|i| v[i] * v0_inv).collect();
    let u_sp = complete_unitary(d.field, &y);
    let mut kappa = Mat::identity(d.field, nn);
    kappa.set_block(1, 1, &u_sp);
    let w = kappa.conj_transpose().matmul(g);
    let (m_part, t2, n_part) = split_man(d, nn, &w)?;
    if (t2 - t).abs() > 1e-8 {
        return Err(Error::InvalidInput("inconsistent Iwasawa A-part".into()));
    }
    Ok(IwasawaData { kappa, h_of_g: vec![t], sphere_image: y, m_part, n_part })
}

/// Iwasawa decomposition g = kappa * m * exp(H) * n. Implemented for the
/// rank-one kinds and their products; block-parabolic kinds only need the
/// Bruhat machinery.
pub fn iwasawa(d: &GroupDescriptor, g: &Mat) -> Result<IwasawaData> {
    match &d.kind {
        Kind::Rank1 { n, .. } | Kind::TrivialSigma { n, .. } => iwasawa_rank1(d, n + 1, g),
        Kind::Product { n, .. } => {
            let nn = n + 1;
            let g1 = g.block(0, 0, nn, nn);
            let g2 = g.block(nn, nn, nn, nn);
            let d1 = iwasawa_rank1(d, nn, &g1)?;
            let d2 = iwasawa_rank1(d, nn, &g2)?;
            let mut sphere = d1.sphere_image.clone();
            sphere.extend(d2.sphere_image.iter().copied());
            Ok(IwasawaData {
                kappa: Mat::block_diag(&[&d1.kappa, &d2.kappa]),
                h_of_g: vec![d1.h_of_g[0], d2.h_of_g[0]],
                sphere_image: sphere,
                m_part: Mat::block_diag(&[&d1.m_part, &d2.m_part]),
                n_part: Mat::block_diag(&[&d1.n_part, &d2.n_part]),
            })
        }
        _ => Err(Error::Unsupported(
            "Iwasawa is implemented for rank-one kinds only".into(),
        )),
    }
}

/// Rank-one Bruhat factorization via the highest-weight coefficient.
fn bruhat_rank1(d: &GroupDescriptor, nn: usize, g: &Mat) -> Result<BruhatData> {
    let scale = g.max_abs().max(1.0);
    let c = eplus_coeff(g);
    if c.abs() <= TOL_SINGULAR * scale {
        return Err(Error::NotInBigCell(c.abs() / scale));
    }
    // g * e+ = (nbar * e+) * c with nbar * e+ determining (x, z)
    let v = apply_to_eplus(g);
    let c_inv = c.inv();
    let w_vec: Vec<Scalar> = v.iter().map(|vi| *vi * c_inv).collect();
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let x: Vec<Scalar> = (2..nn).map(|i| w_vec[i].scale(s)).collect();
    let v_minus = (w_vec[0] - w_vec[1]).scale(s);
    let xsq: f64 = x.iter().map(|xi| xi.norm_sq()).sum();
    let z = (v_minus - Scalar::real(xsq)).scale(0.5).im_part();
    let nbar = nbar_matrix(d.field, nn - 1, &x, z).nil_exp()?;
    let w = nbar.inverse()?.matmul(g);
    let (m_part, t, n_part) = split_man(d, nn, &w)?;
    Ok(BruhatData { nbar, m_part, a_log: vec![t], n_part })
}

/// Block-parabolic Bruhat factorization via block LDU at the half split.
fn bruhat_block(d: &GroupDescriptor, g: &Mat) -> Result<BruhatData> {
    let half = d.ambient / 2;
    let (l, dd, u) = g.block_ldu(half)?;
    let a_log = d.ma_a_coords(&dd)?;
    let a = a_exp(d, &a_log);
    let m_part = dd.matmul(&a.inverse()?);
    Ok(BruhatData { nbar: l, m_part, a_log, n_part: u })
}

/// Bruhat factorization g = nbar * m * a * n on the open cell.
pub fn bruhat_factor(d: &GroupDescriptor, g: &Mat) -> Result<BruhatData> {
    match &d.kind {
        Kind::Rank1 { n, .. } | Kind::TrivialSigma { n, .. } => bruhat_rank1(d, n + 1, g),
        Kind::Siegel { .. } | Kind::GlBlock { .. } | Kind::Gl4nOverGl2nC { .. } => {
            bruhat_block(d, g)
        }
        Kind::Product { n, .. } => {
            let nn = n + 1;
            let g1 = g.block(0, 0, nn, nn);
            let g2 = g.block(nn, nn, nn, nn);
            let b1 = bruhat_rank1(d, nn, &g1)?;
            let b2 = bruhat_rank1(d, nn, &g2)?;
            Ok(BruhatData {
                nbar: Mat::block_diag(&[&b1.nbar, &b2.nbar]),
                m_part: Mat::block_diag(&[&b1.m_part, &b2.m_part]),
                a_log: vec![b1.a_log[0], b2.a_log[0]],
                n_part: Mat::block_diag(&[&b1.n_part, &b2.n_part]),
            })
        }
    }
}

/// Normalized magnitude of the leading coefficient/minor that must be
/// nonzero for open-cell membership (scale-invariant).
pub fn cell_coefficient(d: &GroupDescriptor, g: &Mat) -> f64 {
    let scale = g.max_abs().max(1e-300);
    match &d.kind {
        Kind::Rank1 { .. } | Kind::TrivialSigma { .. } => eplus_coeff(g).abs() / scale,
        Kind::Siegel { n, .. } => {
            let a = g.block(0, 0, *n, *n);
            a.det_f().norm().powf(1.0 / *n as f64) / scale
        }
        Kind::GlBlock { n, .. } => {
            let a = g.block(0, 0, *n, *n);
            let nc = crate::groups::complex_block_dim(d.field, *n);
            a.det_f().norm().powf(1.0 / nc as f64) / scale
        }
        Kind::Gl4nOverGl2nC { n } => {
            let half = 2 * n;
            let a = g.block(0, 0, half, half);
            a.det_f().norm().powf(1.0 / half as f64) / scale
        }
        Kind::Product { n, .. } => {
            let nn = n + 1;
            let c1 = eplus_coeff(&g.block(0, 0, nn, nn)).abs();
            let c2 = eplus_coeff(&g.block(nn, nn, nn, nn)).abs();
            c1.min(c2) / scale
        }
    }
}

/// Open-cell membership g ∈ N̄MAN.
pub fn in_open_cell(d: &GroupDescriptor, g: &Mat) -> bool {
    bruhat_factor(d, g).is_ok()
}

/// a(g)^lambda = exp(lambda(a_log(g))) on the open cell.
pub fn a_pow(d: &GroupDescriptor, g: &Mat, lambda: &Weight) -> Result<Complex64> {
    let b = bruhat_factor(d, g)?;
    Ok(lambda.apply(&b.a_log).exp())
}

/// p^lambda(X) = a(w0^{-1} exp X)^lambda for X in nbar; extends by 0 on the
/// zero set (the complement of the open cell pulls back to p^lambda = 0).
pub fn p_lambda(d: &GroupDescriptor, x: &Mat, lambda: &Weight) -> Result<Complex64> {
    let e = x.nil_exp()?;
    let g = d.w0_mat.inverse()?.matmul(&e);
    match a_pow(d, &g, lambda) {
        Ok(v) => Ok(v),
        // the factorization machinery only degenerates on (a numerical
        // neighborhood of) the complement of the open cell, where the
        // polynomial extends by zero
        Err(Error::NotInBigCell(_)) | Err(Error::SingularMatrix { .. }) => {
            Ok(Complex64::new(0.0, 0.0))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Scope;
    use crate::rng::Rng;

    fn recon_bruhat(d: &GroupDescriptor, g: &Mat, b: &BruhatData) -> f64 {
        let back = b
            .nbar
            .matmul(&b.m_part)
            .matmul(&b.a_mat(d))
            .matmul(&b.n_part);
        back.sub(g).max_abs() / g.max_abs().max(1.0)
    }

    #[test]
    fn bruhat_identity_and_a_elements() {
        for id in ["rank1:C:2:1", "siegel:2:1", "glblock:H:2:1", "product:R:2"] {
            let d = GroupDescriptor::from_id(id).unwrap();
            let b = bruhat_factor(&d, &Mat::identity(d.field, d.ambient)).unwrap();
            for t in &b.a_log {
                assert!(t.abs() < 1e-12, "{}", id);
            }
            let t: Vec<f64> = (0..d.a_dim()).map(|i| 0.3 + 0.1 * i as f64).collect();
            let a = a_exp(&d, &t);
            let b = bruhat_factor(&d, &a).unwrap();
            for (got, want) in b.a_log.iter().zip(&t) {
                assert!((got - want).abs() < 1e-10, "{}: {:?} vs {:?}", id, b.a_log, t);
            }
            assert!(recon_bruhat(&d, &a, &b) < 1e-10);
        }
    }

    #[test]
    fn bruhat_reconstructs_random_elements() {
        let ids = [
            "rank1:R:3:1",
            "rank1:C:2:1",
            "rank1:H:2:1",
            "siegel:2:1",
            "glblock:R:2:1",
            "glblock:C:2:1",
            "gl4R:gl2C:1",
            "product:R:2",
            "ks:C:2",
        ];
        let mut rng = Rng::seeded(11);
        for id in ids {
            let d = GroupDescriptor::from_id(id).unwrap();
            for _ in 0..20 {
                let g = d.random_element(Scope::G, &mut rng).mat;
                let b = match bruhat_factor(&d, &g) {
                    Ok(b) => b,
                    Err(Error::NotInBigCell(_)) => continue,
                    Err(e) => panic!("{}: {:?}", id, e),
                };
                let r = recon_bruhat(&d, &g, &b);
                assert!(r < 1e-10, "{}: reconstruction {:.3e}", id, r);
                // factors land where they should
                let mc = d.ma_a_coords(&b.m_part).unwrap();
                for c in mc {
                    assert!(c.abs() < 1e-8, "{}: m-part has a-component", id);
                }
            }
        }
    }

    #[test]
    fn w0_is_outside_the_open_cell() {
        let d = GroupDescriptor::from_id("rank1:R:3:1").unwrap();
        assert!(!in_open_cell(&d, &d.w0_mat));
        assert!(matches!(
            bruhat_factor(&d, &d.w0_mat),
            Err(Error::NotInBigCell(_))
        ));
        assert!(in_open_cell(&d, &Mat::identity(d.field, d.ambient)));
    }

    #[test]
    fn iwasawa_reconstructs_and_matches_spec_examples() {
        let ids = ["rank1:R:2:1", "rank1:R:3:1", "rank1:C:2:1", "rank1:H:2:1", "product:C:2"];
        let mut rng = Rng::seeded(23);
        for id in ids {
            let d = GroupDescriptor::from_id(id).unwrap();
            // identity
            let iw = iwasawa(&d, &Mat::identity(d.field, d.ambient)).unwrap();
            for t in &iw.h_of_g {
                assert!(t.abs() < 1e-12);
            }
            // exp(t H0)
            let t = vec![0.7; d.a_dim()];
            let iw = iwasawa(&d, &a_exp(&d, &t)).unwrap();
            for (got, want) in iw.h_of_g.iter().zip(&t) {
                assert!((got - want).abs() < 1e-12);
            }
            // random elements reconstruct
            for _ in 0..20 {
                let g = d.random_element(Scope::G, &mut rng).mat;
                let iw = iwasawa(&d, &g).unwrap();
                let back = iw
                    .kappa
                    .matmul(&iw.m_part)
                    .matmul(&a_exp(&d, &iw.h_of_g))
                    .matmul(&iw.n_part);
                let r = back.sub(&g).max_abs() / g.max_abs().max(1.0);
                assert!(r < 1e-10, "{}: iwasawa reconstruction {:.3e}", id, r);
                // sphere image is a unit vector per factor
                let n2: f64 = iw.sphere_image.iter().map(|s| s.norm_sq()).sum();
                let want = if matches!(d.kind, Kind::Product { .. }) { 2.0 } else { 1.0 };
                assert!((n2 - want).abs() < 1e-10);
                // kappa is in K: kappa* kappa = 1 and defining relation holds
                let kk = iw.kappa.conj_transpose().matmul(&iw.kappa);
                assert!(kk.sub(&Mat::identity(d.field, d.ambient)).max_abs() < 1e-10);
                assert!(d.defining_residual(&iw.kappa) < 1e-9);
            }
        }
    }

    #[test]
    fn h_of_g_is_section_independent() {
        // multiplying g on the right by elements of M ∩ K changes kappa but
        // not H(g)
        let d = GroupDescriptor::from_id("rank1:H:2:1").unwrap();
        let mut rng = Rng::seeded(31);
        for _ in 0..10 {
            let g = d.random_element(Scope::G, &mut rng).mat;
            let k = d.random_element(Scope::MCapK, &mut rng).mat;
            let a = iwasawa(&d, &g).unwrap().h_of_g;
            let b = iwasawa(&d, &g.matmul(&k)).unwrap().h_of_g;
            // right M-multiplication preserves H(g) since M normalizes N and
            // centralizes A
            assert!((a[0] - b[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn a_pow_equivariance() {
        // a(nbar' m' a' g m a n) picks up e^{lambda(a')} e^{lambda(a)}
        let ids = ["rank1:C:2:1", "siegel:2:1", "glblock:R:2:1"];
        let mut rng = Rng::seeded(41);
        for id in ids {
            let d = GroupDescriptor::from_id(id).unwrap();
            let lam = Weight(
                (0..d.a_dim())
                    .map(|i| Complex64::new(0.8 - 0.2 * i as f64, 0.4))
                    .collect(),
            );
            for _ in 0..10 {
                let g = d.random_element(Scope::G, &mut rng).mat;
                if bruhat_factor(&d, &g).is_err() {
                    continue;
                }
                let nb = d.random_element(Scope::Nbar, &mut rng).mat;
                let m1 = d.random_element(Scope::M, &mut rng).mat;
                let m2 = d.random_element(Scope::M, &mut rng).mat;
                let n = d.random_element(Scope::N, &mut rng).mat;
                let t1: Vec<f64> = (0..d.a_dim()).map(|_| rng.range(-0.5, 0.5)).collect();
                let t2: Vec<f64> = (0..d.a_dim()).map(|_| rng.range(-0.5, 0.5)).collect();
                let left = nb.matmul(&m1).matmul(&a_exp(&d, &t1));
                let right = m2.matmul(&a_exp(&d, &t2)).matmul(&n);
                let lhs = a_pow(&d, &left.matmul(&g).matmul(&right), &lam).unwrap();
                let rhs = (lam.apply(&t1) + lam.apply(&t2)).exp()
                    * a_pow(&d, &g, &lam).unwrap();
                assert!(
                    (lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0),
                    "{}: {} vs {}",
                    id,
                    lhs,
                    rhs
                );
            }
        }
    }

    #[test]
    fn a_pow_inverse_symmetry() {
        // a(w0^{-1} g^{-1})^lambda = a(w0^{-1} g)^{-w0 lambda}
        let mut rng = Rng::seeded(43);
        for id in ["rank1:R:3:1", "rank1:C:2:1", "glblock:R:2:1"] {
            let d = GroupDescriptor::from_id(id).unwrap();
            let w0_inv = d.w0_mat.inverse().unwrap();
            let lam = Weight(
                (0..d.a_dim())
                    .map(|i| Complex64::new(0.9 + 0.3 * i as f64, -0.2))
                    .collect(),
            );
            // -w0 lambda in a-coordinates
            let mw0lam = lam.pullback(&d.w0_on_a).neg();
            for _ in 0..10 {
                let g = d.random_element(Scope::G, &mut rng).mat;
                let g1 = w0_inv.matmul(&g.inverse().unwrap());
                let g2 = w0_inv.matmul(&g);
                let (Ok(lhs), Ok(rhs)) =
                    (a_pow(&d, &g1, &lam), a_pow(&d, &g2, &mw0lam))
                else {
                    continue;
                };
                assert!(
                    (lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0),
                    "{}: {} vs {}",
                    id,
                    lhs,
                    rhs
                );
            }
        }
    }

    #[test]
    fn p_lambda_closed_forms() {
        let mut rng = Rng::seeded(53);
        // Siegel: p^lambda(X) = |det X|^lambda, diag(2,3) at lambda = 1 -> 6
        let d = GroupDescriptor::from_id("siegel:2:1").unwrap();
        let lam = d.scalar_weight(Complex64::new(1.0, 0.0));
        let mut xbar = Mat::zeros(Field::R, 4, 4);
        xbar.set(2, 0, Scalar::real(2.0));
        xbar.set(3, 1, Scalar::real(3.0));
        let v = p_lambda(&d, &xbar, &lam).unwrap();
        assert!((v - Complex64::new(6.0, 0.0)).norm() < 1e-10, "{}", v);
        // zero matrix -> 0
        let v0 = p_lambda(&d, &Mat::zeros(Field::R, 4, 4), &lam).unwrap();
        assert!(v0.norm() < 1e-12);

        // rank one R: p^lambda(x) = |x|^{2 lambda}
        let d = GroupDescriptor::from_id("rank1:R:3:1").unwrap();
        let lam = d.scalar_weight(Complex64::new(0.7, 0.2));
        for _ in 0..5 {
            let x = [Scalar::real(rng.normal()), Scalar::real(rng.normal())];
            let xbar = crate::groups::nbar_matrix(Field::R, 3, &x, Scalar::zero());
            let v = p_lambda(&d, &xbar, &lam).unwrap();
            let r2 = x[0].norm_sq() + x[1].norm_sq();
            let want = Complex64::new(r2, 0.0).powc(Complex64::new(0.7, 0.2));
            assert!((v - want).norm() < 1e-9 * want.norm(), "{} vs {}", v, want);
        }

        // rank one H: p^lambda = N(x,z)^{2 lambda}, N = (|x|^4 + 4|z|^2)^{1/4}
        let d = GroupDescriptor::from_id("rank1:H:2:1").unwrap();
        let lam = d.scalar_weight(Complex64::new(1.3, -0.4));
        for _ in 0..5 {
            let x = [Scalar::quat(rng.normal(), rng.normal(), rng.normal(), rng.normal())];
            let z = Scalar::quat(0.0, rng.normal(), rng.normal(), rng.normal());
            let xbar = crate::groups::nbar_matrix(Field::H, 2, &x, z);
            let v = p_lambda(&d, &xbar, &lam).unwrap();
            let nq = (x[0].norm_sq() * x[0].norm_sq() + 4.0 * z.norm_sq()).sqrt();
            let want = Complex64::new(nq, 0.0).powc(Complex64::new(1.3, -0.4));
            assert!((v - want).norm() < 1e-9 * want.norm(), "{} vs {}", v, want);
        }

        // cross-check against bruhat_factor for the GL block case
        let d = GroupDescriptor::from_id("glblock:C:2:1").unwrap();
        let lam = Weight(vec![Complex64::new(0.9, 0.1), Complex64::new(-0.3, 0.2)]);
        for _ in 0..5 {
            let x = d.random_algebra_element(&d.basis_nbar, &mut rng);
            let v = p_lambda(&d, &x, &lam).unwrap();
            let g = d.w0_mat.inverse().unwrap().matmul(&x.nil_exp().unwrap());
            let b = bruhat_factor(&d, &g).unwrap();
            let want = lam.apply(&b.a_log).exp();
            assert!((v - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn p_lambda_homogeneity_and_parity() {
        let mut rng = Rng::seeded(59);
        for id in ["rank1:C:2:1", "siegel:2:1", "glblock:R:2:1"] {
            let d = GroupDescriptor::from_id(id).unwrap();
            let lam = Weight(
                (0..d.a_dim())
                    .map(|i| Complex64::new(1.1 - 0.4 * i as f64, 0.3))
                    .collect(),
            );
            // (w0 lambda - lambda) in a-coordinates
            let shift = lam.pullback(&d.w0_on_a).sub(&lam);
            for _ in 0..8 {
                let x = d.random_algebra_element(&d.basis_nbar, &mut rng);
                let t: Vec<f64> = (0..d.a_dim()).map(|_| rng.range(-0.6, 0.6)).collect();
                let a = a_exp(&d, &t);
                let ax = a.matmul(&x).matmul(&a.inverse().unwrap());
                let lhs = p_lambda(&d, &ax, &lam).unwrap();
                let rhs = shift.apply(&t).exp() * p_lambda(&d, &x, &lam).unwrap();
                assert!(
                    (lhs - rhs).norm() < 1e-9 * rhs.norm().max(1e-6),
                    "{} homogeneity: {} vs {}",
                    id,
                    lhs,
                    rhs
                );
                // parity: p^lambda(-X) = p^{-w0 lambda}(X)
                let lhs = p_lambda(&d, &x.neg(), &lam).unwrap();
                let rhs = p_lambda(&d, &x, &lam.pullback(&d.w0_on_a).neg()).unwrap();
                assert!(
                    (lhs - rhs).norm() < 1e-10 * rhs.norm().max(1e-6),
                    "{} parity: {} vs {}",
                    id,
                    lhs,
                    rhs
                );
            }
        }
    }

    #[test]
    fn a_pow_bounded_on_k_in_positive_chamber() {
        let d = GroupDescriptor::from_id("rank1:C:2:1").unwrap();
        let lam = d.scalar_weight(Complex64::new(1.5, 0.0));
        let mut rng = Rng::seeded(61);
        let mut seen = 0;
        for _ in 0..2000 {
            let k = d.random_element(Scope::K, &mut rng).mat;
            if let Ok(v) = a_pow(&d, &k, &lam) {
                assert!(v.norm() <= 1.0 + 1e-9, "|a^lambda| = {} > 1 on K", v.norm());
                seen += 1;
            }
        }
        assert!(seen > 1500);
    }
}
