//! Group descriptors: a catalogue of symmetric-pair setups (G, H, P, w0,
//! sigma) realized as explicit matrix data, together with structure-condition
//! checkers and seeded sampling of group elements.
//!
//! A descriptor ships matrices and Lie-algebra bases for its pair; the
//! structural claims about them (w0 conjugates P to the opposite parabolic,
//! sigma preserves P, sigma(w0)·w0 lies in M, half-trace values of rho) are
//! *validated numerically*, not trusted.

mod build;

pub(crate) use build::nbar_matrix;

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::error::{Error, Result};
use crate::linalg::{RMat, Subspace};
use crate::mat::Mat;
use crate::rng::Rng;
use crate::scalar::{Field, Scalar};
use crate::TOL_SINGULAR;

/// Which catalogue family a descriptor belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    /// G = SU(1,n;F), H = S(U(1,m;F) x U(n-m;F)).
    Rank1 { field: Field, n: usize, m: usize },
    /// G = Sp(n,R) with the Siegel parabolic, H = Sp(m,R) x Sp(n-m,R).
    Siegel { n: usize, m: usize },
    /// G = GL(2n,F) with the (n,n) block parabolic, H = GL(2m,F) x GL(2(n-m),F).
    GlBlock { field: Field, n: usize, m: usize },
    /// G = GL(4n,R) with the (2n,2n) block parabolic, H = GL(2n,C).
    Gl4nOverGl2nC { n: usize },
    /// G = G' x G' for rank-one G', H the diagonal, sigma the factor swap.
    Product { field: Field, n: usize },
    /// Rank-one G with sigma = id (H = G): the classical limit case.
    TrivialSigma { field: Field, n: usize },
}

/// Sampling scopes for [`GroupDescriptor::random_element`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    G,
    H,
    K,
    KH,
    M,
    MH,
    MCapK,
    A,
    AH,
    N,
    Nbar,
    NH,
    NbarH,
    P,
    PH,
}

/// A validated group element (matrix satisfying the descriptor's defining
/// relation to working precision).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub mat: Mat,
}

/// Outcome of a structure-condition check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    /// Largest residual observed (the witness of failure when `!holds`).
    pub witness: f64,
}

pub struct GroupDescriptor {
    pub id: String,
    pub kind: Kind,
    /// Scalar field of the ambient matrices.
    pub field: Field,
    /// Ambient matrix size.
    pub ambient: usize,
    /// Defining sesquilinear form J with g* J g = J, if any (GL kinds: none).
    pub j_form: Option<Mat>,
    pub sigma_mat: Mat,
    pub sigma_inv_mat: Mat,
    pub w0_mat: Mat,

    // Lie algebra bases (real bases of the corresponding real subspaces).
    pub basis_g: Vec<Mat>,
    pub basis_k: Vec<Mat>,
    pub basis_m_alg: Vec<Mat>,
    pub basis_a: Vec<Mat>,
    pub basis_n: Vec<Mat>,
    pub basis_nbar: Vec<Mat>,
    pub basis_h: Vec<Mat>,
    pub basis_kh: Vec<Mat>,
    pub basis_mh: Vec<Mat>,
    pub basis_nh: Vec<Mat>,
    pub basis_nbar_h: Vec<Mat>,
    pub basis_n_minus_sigma: Vec<Mat>,
    pub basis_nbar_minus_sigma: Vec<Mat>,
    pub basis_m_cap_k: Vec<Mat>,

    /// Basis of a_H; the first `a_h_split` entries span a ∩ a_H, the rest
    /// span a_H ∩ m.
    pub basis_ah: Vec<Mat>,
    pub a_h_split: usize,
    /// Coordinates of the (a ∩ a_H)-part basis vectors in the `basis_a`
    /// coordinates (a_dim x a_h_split).
    pub a_h_in_a: RMat,

    /// rho in dual coordinates of `basis_a` (computed from ad-traces).
    pub rho: Vec<f64>,
    /// rho_H in dual coordinates of `basis_ah`.
    pub rho_h: Vec<f64>,

    /// Action of Ad(w0) on a in `basis_a` coordinates (a signed permutation).
    pub w0_on_a: RMat,
    /// Action of sigma on a in `basis_a` coordinates.
    pub sigma_on_a: RMat,
    /// Generators of the open positive chamber: lambda lies in a*_+ iff its
    /// real part is a strictly positive combination of these rays (and the
    /// imaginary part lies in their span).
    pub a_plus_rays: Vec<Vec<f64>>,
    /// Coordinate ray identifying "scalar" spectral parameters with weights
    /// (the direction used by the printed closed-form kernels).
    pub scalar_ray: Vec<f64>,
}

impl core::fmt::Debug for GroupDescriptor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "GroupDescriptor({})", self.id)
    }
}

impl GroupDescriptor {
    /// Parse a descriptor id string, e.g. `rank1:R:3:1`, `siegel:2:1`,
    /// `glblock:C:2:1`, `gl4R:gl2C:1`, `product:R:2`, `ks:R:3`.
    pub fn from_id(id: &str) -> Result<GroupDescriptor> {
        let parts: Vec<&str> = id.split(':').collect();
        let bad = || Error::UnknownDescriptor(id.to_string());
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["rank1", f, n, m] => {
                let field = Field::parse(f).ok_or_else(bad)?;
                build::rank1(field, num(n)?, num(m)?)
            }
            ["siegel", n, m] => build::siegel(num(n)?, num(m)?),
            ["glblock", f, n, m] => {
                let field = Field::parse(f).ok_or_else(bad)?;
                build::gl_block(field, num(n)?, num(m)?)
            }
            ["gl4R", "gl2C", n] => build::gl4n_over_gl2nc(num(n)?),
            ["product", f, n] => {
                let field = Field::parse(f).ok_or_else(bad)?;
                build::product(field, num(n)?)
            }
            ["ks", f, n] => {
                let field = Field::parse(f).ok_or_else(bad)?;
                build::trivial_sigma(field, num(n)?)
            }
            _ => Err(bad()),
        }
    }

    pub fn a_dim(&self) -> usize {
        self.basis_a.len()
    }

    pub fn a_h_dim(&self) -> usize {
        self.basis_ah.len()
    }

    /// sigma as a group/Lie-algebra automorphism (conjugation).
    pub fn sigma_of(&self, g: &Mat) -> Mat {
        self.sigma_mat.matmul(g).matmul(&self.sigma_inv_mat)
    }

    /// Cartan involution on the Lie algebra: X -> -X*.
    pub fn theta(&self, x: &Mat) -> Mat {
        x.conj_transpose().neg()
    }

    /// Residual of the defining relation for a group-element candidate.
    pub fn defining_residual(&self, g: &Mat) -> f64 {
        let mut r: f64 = 0.0;
        if !g.entries_in_field(1e-12 * g.max_abs().max(1.0)) {
            r = r.max(1.0);
        }
        if let Some(j) = &self.j_form {
            let lhs = g.conj_transpose().matmul(j).matmul(g);
            r = r.max(lhs.sub(j).max_abs() / g.max_abs().max(1.0));
        } else {
            // GL kinds: invertibility
            let d = g.det_f().norm();
            if d <= TOL_SINGULAR {
                r = r.max(1.0);
            }
        }
        if let Kind::Product { .. } = self.kind {
            let nh = self.ambient / 2;
            r = r.max(g.block(0, nh, nh, nh).max_abs());
            r = r.max(g.block(nh, 0, nh, nh).max_abs());
        }
        r
    }

    /// Wrap a matrix as a validated element.
    pub fn element(&self, mat: Mat) -> Result<GroupElement> {
        mat.shape_check(self.ambient, self.ambient)?;
        let r = self.defining_residual(&mat);
        if r > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "defining relation residual {:.3e} exceeds 1e-9",
                r
            )));
        }
        Ok(GroupElement { mat })
    }

    pub fn scope_basis(&self, scope: Scope) -> &[Mat] {
        match scope {
            Scope::G => &self.basis_g,
            Scope::H => &self.basis_h,
            Scope::K => &self.basis_k,
            Scope::KH => &self.basis_kh,
            Scope::M => &self.basis_m_alg,
            Scope::MH => &self.basis_mh,
            Scope::MCapK => &self.basis_m_cap_k,
            Scope::A => &self.basis_a,
            Scope::AH => &self.basis_ah,
            Scope::N => &self.basis_n,
            Scope::Nbar => &self.basis_nbar,
            Scope::NH => &self.basis_nh,
            Scope::NbarH => &self.basis_nbar_h,
            Scope::P => unreachable!(),
            Scope::PH => unreachable!(),
        }
    }

    fn scope_vectors(&self, scope: Scope) -> Vec<Mat> {
        match scope {
            Scope::P => {
                let mut v = self.basis_m_alg.clone();
                v.extend(self.basis_a.iter().cloned());
                v.extend(self.basis_n.iter().cloned());
                v
            }
            Scope::PH => {
                let mut v = self.basis_mh.clone();
                v.extend(self.basis_ah.iter().cloned());
                v.extend(self.basis_nh.iter().cloned());
                v
            }
            s => self.scope_basis(s).to_vec(),
        }
    }

    /// Seeded random element: exp of a bounded random Lie-algebra element of
    /// the requested scope.
    pub fn random_element(&self, scope: Scope, rng: &mut Rng) -> GroupElement {
        let basis = self.scope_vectors(scope);
        let x = self.random_algebra_element(&basis, rng);
        GroupElement { mat: x.expm() }
    }

    /// Random element of the span of `basis` with Frobenius norm <= 1.5.
    pub fn random_algebra_element(&self, basis: &[Mat], rng: &mut Rng) -> Mat {
        let mut x = Mat::zeros(self.field, self.ambient, self.ambient);
        if basis.is_empty() {
            return x;
        }
        for b in basis {
            x = x.add(&b.scale(rng.normal()));
        }
        let n = x.norm_frobenius();
        let target = rng.range(0.05, 1.5);
        if n > 0.0 {
            x = x.scale(target / n);
        }
        x
    }

    fn subspace_of(&self, mats: &[Mat]) -> Subspace {
        let vecs: Vec<Vec<f64>> = mats.iter().map(|m| m.vectorize()).collect();
        Subspace::from_vectors(4 * self.ambient * self.ambient, &vecs, 1e-9)
    }

    fn ad_residual_into(&self, g: &Mat, from: &[Mat], into: &Subspace) -> f64 {
        let ginv = match g.inverse() {
            Ok(gi) => gi,
            Err(_) => return 1.0,
        };
        let mut worst: f64 = 0.0;
        for x in from {
            let y = g.matmul(x).matmul(&ginv);
            let v = y.vectorize();
            worst = worst.max(into.residual(&v) / crate::linalg::norm(&v).max(1e-300));
        }
        worst
    }

    /// Condition (G): Ad(w0^{-1}) maps n onto nbar and preserves m + a
    /// (w0 conjugates P to the opposite parabolic).
    pub fn check_condition_g(&self) -> ConditionReport {
        let w0_inv = self.w0_mat.inverse().expect("w0 invertible");
        let nbar_span = self.subspace_of(&self.basis_nbar);
        let ma: Vec<Mat> = self
            .basis_m_alg
            .iter()
            .chain(self.basis_a.iter())
            .cloned()
            .collect();
        let ma_span = self.subspace_of(&ma);
        let mut worst = self.ad_residual_into(&w0_inv, &self.basis_n, &nbar_span);
        worst = worst.max(self.ad_residual_into(&w0_inv, &ma, &ma_span));
        ConditionReport { holds: worst < 1e-9, witness: worst }
    }

    /// Condition (H): sigma preserves P (it maps n into n and m + a into
    /// m + a).
    pub fn check_condition_h(&self) -> ConditionReport {
        let n_span = self.subspace_of(&self.basis_n);
        let ma: Vec<Mat> = self
            .basis_m_alg
            .iter()
            .chain(self.basis_a.iter())
            .cloned()
            .collect();
        let ma_span = self.subspace_of(&ma);
        let mut worst: f64 = 0.0;
        for x in &self.basis_n {
            let y = self.sigma_of(x);
            let v = y.vectorize();
            worst = worst.max(n_span.residual(&v) / crate::linalg::norm(&v).max(1e-300));
        }
        for x in &ma {
            let y = self.sigma_of(x);
            let v = y.vectorize();
            worst = worst.max(ma_span.residual(&v) / crate::linalg::norm(&v).max(1e-300));
        }
        ConditionReport { holds: worst < 1e-9, witness: worst }
    }

    /// sigma(w0) * w0 must lie in M: it has to centralize a, normalize n and
    /// nbar, satisfy the defining relation, and carry trivial a-part.
    pub fn check_sigma_w0(&self) -> ConditionReport {
        let z = self.sigma_of(&self.w0_mat).matmul(&self.w0_mat);
        let mut worst = self.defining_residual(&z);
        let n_span = self.subspace_of(&self.basis_n);
        let nbar_span = self.subspace_of(&self.basis_nbar);
        worst = worst.max(self.ad_residual_into(&z, &self.basis_n, &n_span));
        worst = worst.max(self.ad_residual_into(&z, &self.basis_nbar, &nbar_span));
        if let Ok(zi) = z.inverse() {
            for h in &self.basis_a {
                let c = z.matmul(h).matmul(&zi).sub(h).max_abs();
                worst = worst.max(c / h.max_abs());
            }
        } else {
            worst = worst.max(1.0);
        }
        match self.ma_a_coords(&z) {
            Ok(coords) => {
                for c in coords {
                    worst = worst.max(c.abs());
                }
            }
            Err(_) => worst = worst.max(1.0),
        }
        ConditionReport { holds: worst < 1e-9, witness: worst }
    }

    /// For z in MA, the a-coordinates (in `basis_a` dual coordinates) of its
    /// A-part, read off through the kind's determinant/highest-weight
    /// characters.
    pub fn ma_a_coords(&self, z: &Mat) -> Result<Vec<f64>> {
        match &self.kind {
            Kind::Rank1 { .. } | Kind::TrivialSigma { .. } => {
                let c = eplus_coeff(z);
                let a = c.abs();
                if a <= TOL_SINGULAR {
                    return Err(Error::NotInBigCell(a));
                }
                Ok(vec![a.ln()])
            }
            Kind::Siegel { n, .. } => {
                let a_blk = z.block(0, 0, *n, *n);
                let d = a_blk.det_f().norm();
                if d <= TOL_SINGULAR {
                    return Err(Error::NotInBigCell(d));
                }
                Ok(vec![d.ln() / *n as f64])
            }
            Kind::GlBlock { field, n, .. } => {
                let nc = complex_block_dim(*field, *n);
                let a_blk = z.block(0, 0, *n, *n);
                let d_blk = z.block(*n, *n, *n, *n);
                let (da, dd) = (a_blk.det_f().norm(), d_blk.det_f().norm());
                if da <= TOL_SINGULAR || dd <= TOL_SINGULAR {
                    return Err(Error::NotInBigCell(da.min(dd)));
                }
                Ok(vec![da.ln() / nc as f64, dd.ln() / nc as f64])
            }
            Kind::Gl4nOverGl2nC { n } => {
                let half = 2 * n;
                let a_blk = z.block(0, 0, half, half);
                let d_blk = z.block(half, half, half, half);
                let (da, dd) = (a_blk.det_f().norm(), d_blk.det_f().norm());
                if da <= TOL_SINGULAR || dd <= TOL_SINGULAR {
                    return Err(Error::NotInBigCell(da.min(dd)));
                }
                Ok(vec![da.ln() / half as f64, dd.ln() / half as f64])
            }
            Kind::Product { .. } => {
                let half = self.ambient / 2;
                let z1 = z.block(0, 0, half, half);
                let z2 = z.block(half, half, half, half);
                let (c1, c2) = (eplus_coeff(&z1).abs(), eplus_coeff(&z2).abs());
                if c1 <= TOL_SINGULAR || c2 <= TOL_SINGULAR {
                    return Err(Error::NotInBigCell(c1.min(c2)));
                }
                Ok(vec![c1.ln(), c2.ln()])
            }
        }
    }

    /// Recompute rho from ad-traces on n (independent of the stored value).
    pub fn rho_from_traces(&self) -> Vec<f64> {
        half_trace_functional(&self.basis_a, &self.basis_n)
    }

    /// Recompute rho_H from ad-traces on n_H.
    pub fn rho_h_from_traces(&self) -> Vec<f64> {
        half_trace_functional(&self.basis_ah, &self.basis_nh)
    }

    /// Membership of a weight's real part in the open chamber a*_+.
    pub fn in_a_plus(&self, lambda: &crate::weight::Weight) -> bool {
        let rays = RMat::from_rows(&self.a_plus_rays).transpose();
        // solve rays * c = re(lambda) by least squares through the SVD
        let re: Vec<f64> = lambda.0.iter().map(|c| c.re).collect();
        let im: Vec<f64> = lambda.0.iter().map(|c| c.im).collect();
        let (u, s, vt) = crate::linalg::svd(&rays);
        let solve = |b: &[f64]| -> Option<Vec<f64>> {
            let mut c = vec![0.0; rays.cols];
            for k in 0..s.len() {
                if s[k] <= 1e-12 * s[0].max(1.0) {
                    continue;
                }
                let ub = crate::linalg::dot(&u.col(k), b);
                for j in 0..rays.cols {
                    c[j] += vt.get(k, j) * ub / s[k];
                }
            }
            // consistency: rays * c must reproduce b
            let back = rays.mat_vec(&c);
            let res: f64 = back
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            if res > 1e-9 * crate::linalg::norm(b).max(1.0) {
                None
            } else {
                Some(c)
            }
        };
        let Some(c_re) = solve(&re) else { return false };
        if solve(&im).is_none() {
            return false;
        }
        c_re.iter().all(|&x| x > 1e-12)
    }

    /// Weight along the descriptor's scalar ray (the parameter appearing in
    /// the printed closed-form kernels).
    pub fn scalar_weight(&self, v: num_complex::Complex64) -> crate::weight::Weight {
        crate::weight::Weight(self.scalar_ray.iter().map(|&r| v * r).collect())
    }

    /// Coordinates of a Lie-algebra element lying in span(basis_a).
    pub fn a_coords_of(&self, x: &Mat) -> Vec<f64> {
        coords_in_basis(x, &self.basis_a)
    }

    /// Coordinates in the a_H basis.
    pub fn ah_coords_of(&self, x: &Mat) -> Vec<f64> {
        coords_in_basis(x, &self.basis_ah)
    }
}

/// e+ highest-weight coefficient for the rank-one lightcone realization:
/// the (e0+e1)/sqrt(2) component of g * e+.
pub(crate) fn eplus_coeff(g: &Mat) -> Scalar {
    let n = g.rows;
    let mut eplus = vec![Scalar::zero(); n];
    let s = core::f64::consts::FRAC_1_SQRT_2;
    eplus[0] = Scalar::real(s);
    eplus[1] = Scalar::real(s);
    let v = g.mat_vec(&eplus);
    (v[0] + v[1]).scale(s)
}

pub(crate) fn complex_block_dim(field: Field, n: usize) -> usize {
    match field {
        Field::R | Field::C => n,
        Field::H => 2 * n,
    }
}

/// Half of the trace of ad(A_i) on span(basis_sub), for each A_i.
fn half_trace_functional(basis_a: &[Mat], basis_sub: &[Mat]) -> Vec<f64> {
    let ortho = orthonormalize_mats(basis_sub);
    basis_a
        .iter()
        .map(|a| {
            let tr: f64 = ortho
                .iter()
                .map(|e| {
                    let br = a.matmul(e).sub(&e.matmul(a));
                    br.inner(e)
                })
                .sum();
            0.5 * tr
        })
        .collect()
}

pub(crate) fn orthonormalize_mats(mats: &[Mat]) -> Vec<Mat> {
    let mut out: Vec<Mat> = Vec::new();
    for m in mats {
        let mut w = m.clone();
        for _ in 0..2 {
            for b in &out {
                let c = w.inner(b);
                w = w.sub(&b.scale(c));
            }
        }
        let n = w.norm_frobenius();
        if n > 1e-9 * m.norm_frobenius().max(1.0) {
            out.push(w.scale(1.0 / n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDS: [&str; 8] = [
        "rank1:R:3:1",
        "rank1:C:2:1",
        "rank1:H:2:1",
        "siegel:2:1",
        "glblock:R:2:1",
        "gl4R:gl2C:1",
        "product:R:2",
        "ks:C:2",
    ];

    #[test]
    fn catalogue_structure_conditions_hold() {
        for id in IDS {
            let d = GroupDescriptor::from_id(id).unwrap();
            let g = d.check_condition_g();
            assert!(g.holds, "{}: condition G witness {:.3e}", id, g.witness);
            let h = d.check_condition_h();
            assert!(h.holds, "{}: condition H witness {:.3e}", id, h.witness);
            let sw = d.check_sigma_w0();
            assert!(sw.holds, "{}: sigma(w0)w0 witness {:.3e}", id, sw.witness);
        }
    }

    #[test]
    fn rho_matches_closed_forms() {
        // rho(H0) = (d(n-1) + 2(d-1)) / 2 for the rank-one family,
        // rho_H likewise on the H-side nilradical F^{m-1} + Im F.
        let cases: [(&str, &[f64], &[f64]); 8] = [
            ("rank1:R:3:1", &[1.0], &[0.0]),
            ("rank1:C:2:1", &[2.0], &[1.0]),
            ("rank1:H:2:1", &[5.0], &[3.0]),
            ("siegel:2:1", &[3.0], &[2.0, 0.0]),
            ("glblock:R:2:1", &[2.0, -2.0], &[1.0, -1.0, 0.0, 0.0]),
            ("gl4R:gl2C:1", &[2.0, -2.0], &[1.0, -1.0]),
            ("product:R:2", &[0.5, 0.5], &[0.5]),
            ("ks:C:2", &[2.0], &[2.0]),
        ];
        for (id, rho, rho_h) in cases {
            let d = GroupDescriptor::from_id(id).unwrap();
            assert_eq!(d.rho.len(), rho.len(), "{}", id);
            for (a, b) in d.rho.iter().zip(rho) {
                assert!((a - b).abs() < 1e-9, "{}: rho {:?} != {:?}", id, d.rho, rho);
            }
            assert_eq!(d.rho_h.len(), rho_h.len(), "{}", id);
            for (a, b) in d.rho_h.iter().zip(rho_h) {
                assert!(
                    (a - b).abs() < 1e-9,
                    "{}: rho_h {:?} != {:?}",
                    id,
                    d.rho_h,
                    rho_h
                );
            }
        }
    }

    #[test]
    fn dimensions_match_classical_counts() {
        let d = GroupDescriptor::from_id("rank1:R:3:1").unwrap();
        assert_eq!(d.basis_g.len(), 6); // so(1,3)
        assert_eq!(d.basis_k.len(), 3);
        assert_eq!(d.basis_n.len(), 2);
        assert_eq!(d.basis_m_alg.len(), 1);
        assert_eq!(d.basis_nh.len(), 0);
        assert_eq!(d.basis_nbar_minus_sigma.len(), 2);

        let d = GroupDescriptor::from_id("rank1:H:2:1").unwrap();
        assert_eq!(d.basis_g.len(), 21); // sp(1,2)
        assert_eq!(d.basis_n.len(), 7);
        assert_eq!(d.basis_nh.len(), 3);

        let d = GroupDescriptor::from_id("siegel:2:1").unwrap();
        assert_eq!(d.basis_g.len(), 10); // sp(2,R)
        assert_eq!(d.basis_n.len(), 3);
        assert_eq!(d.basis_nh.len(), 2);
        assert_eq!(d.basis_n_minus_sigma.len(), 1);

        let d = GroupDescriptor::from_id("gl4R:gl2C:1").unwrap();
        assert_eq!(d.basis_g.len(), 16);
        assert_eq!(d.basis_h.len(), 8); // gl(2,C) as a real algebra
        assert_eq!(d.basis_n.len(), 4);
        assert_eq!(d.basis_n_minus_sigma.len(), 2); // M(1,C)
    }

    #[test]
    fn random_elements_satisfy_defining_relations() {
        let mut rng = Rng::seeded(7);
        for id in IDS {
            let d = GroupDescriptor::from_id(id).unwrap();
            for scope in [Scope::G, Scope::H, Scope::K, Scope::N, Scope::Nbar, Scope::P] {
                for _ in 0..3 {
                    let g = d.random_element(scope, &mut rng);
                    let r = d.defining_residual(&g.mat);
                    assert!(r < 1e-9, "{} {:?}: residual {:.3e}", id, scope, r);
                }
            }
            // H-scope samples are sigma-fixed
            for _ in 0..3 {
                let g = d.random_element(Scope::H, &mut rng).mat;
                let r = d.sigma_of(&g).sub(&g).max_abs();
                assert!(r < 1e-9, "{}: sigma-fixedness {:.3e}", id, r);
            }
        }
    }

    #[test]
    fn w0_and_sigma_act_as_expected_on_a() {
        let d = GroupDescriptor::from_id("rank1:C:2:1").unwrap();
        assert!((d.w0_on_a.get(0, 0) + 1.0).abs() < 1e-12);
        assert!((d.sigma_on_a.get(0, 0) - 1.0).abs() < 1e-12);
        let d = GroupDescriptor::from_id("glblock:R:2:1").unwrap();
        // w0 swaps the two block scalars
        assert!((d.w0_on_a.get(0, 1) - 1.0).abs() < 1e-12);
        assert!((d.w0_on_a.get(1, 0) - 1.0).abs() < 1e-12);
        assert!((d.w0_on_a.get(0, 0)).abs() < 1e-12);
    }

    #[test]
    fn chamber_membership() {
        let d = GroupDescriptor::from_id("rank1:R:3:1").unwrap();
        assert!(d.in_a_plus(&d.scalar_weight(num_complex::Complex64::new(2.0, 0.3))));
        assert!(!d.in_a_plus(&d.scalar_weight(num_complex::Complex64::new(-1.0, 0.0))));
        let d = GroupDescriptor::from_id("glblock:R:2:1").unwrap();
        // chamber ray is (1,-1): (2,-2) inside, (1,1) outside
        assert!(d.in_a_plus(&crate::weight::Weight::real(&[2.0, -2.0])));
        assert!(!d.in_a_plus(&crate::weight::Weight::real(&[1.0, 1.0])));
    }

    #[test]
    fn bad_descriptors_rejected() {
        assert!(GroupDescriptor::from_id("rank1:R:3:3").is_err());
        assert!(GroupDescriptor::from_id("rank1:Q:3:1").is_err());
        assert!(GroupDescriptor::from_id("nonsense").is_err());
        assert!(GroupDescriptor::from_id("siegel:1:1").is_err());
    }
}

/// Coordinates of `x` in the (not necessarily orthonormal) basis via the
/// Gram system.
pub(crate) fn coords_in_basis(x: &Mat, basis: &[Mat]) -> Vec<f64> {
    let k = basis.len();
    let mut gram = RMat::zeros(k, k);
    let mut rhs = vec![0.0; k];
    for i in 0..k {
        rhs[i] = x.inner(&basis[i]);
        for j in 0..k {
            gram.set(i, j, basis[i].inner(&basis[j]));
        }
    }
    // solve by SVD (small, well conditioned for catalogue bases)
    let (u, s, vt) = crate::linalg::svd(&gram);
    let mut c = vec![0.0; k];
    for t in 0..k {
        if s[t] <= 1e-12 * s[0].max(1.0) {
            continue;
        }
        let ub = crate::linalg::dot(&u.col(t), &rhs);
        for j in 0..k {
            c[j] += vt.get(t, j) * ub / s[t];
        }
    }
    c
}
