//! Catalogue constructors: explicit matrix data per descriptor kind.
//!
//! Lie-algebra bases are obtained as numerical kernels of the defining
//! linear constraints over an explicit real basis of M(N,F); subalgebras cut
//! out by involutions (theta, sigma, ad of a) reuse the same machinery
//! restricted to a span.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use super::{coords_in_basis, half_trace_functional, GroupDescriptor, Kind};
use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;
use crate::linalg::{kernel_basis, RMat};
use crate::mat::Mat;
use crate::scalar::{Field, Scalar};

/// Real basis of M(rows x cols, F): one unit matrix per entry per real axis.
fn unit_mats(field: Field, rows: usize, cols: usize) -> Vec<Mat> {
    let mut out = Vec::with_capacity(field.dim() * rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            for axis in 0..field.dim() {
                let mut m = Mat::zeros(field, rows, cols);
                m.set(i, j, Scalar::unit(axis));
                out.push(m);
            }
        }
    }
    out
}

/// Basis of the common kernel of real-linear constraints on span(span).
fn kernel_in_span(span: &[Mat], ops: &[&dyn Fn(&Mat) -> Vec<f64>]) -> Vec<Mat> {
    if span.is_empty() {
        return Vec::new();
    }
    let cols = span.len();
    let res_len: usize = ops.iter().map(|op| op(&span[0]).len()).sum();
    let mut m = RMat::zeros(res_len, cols);
    for (j, x) in span.iter().enumerate() {
        let mut r0 = 0;
        for op in ops {
            let r = op(x);
            for (i, v) in r.iter().enumerate() {
                m.set(r0 + i, j, *v);
            }
            r0 += r.len();
        }
    }
    kernel_basis(&m, 1e-10)
        .into_iter()
        .map(|c| {
            let mut x = Mat::zeros(span[0].field, span[0].rows, span[0].cols);
            for (j, b) in span.iter().enumerate() {
                x = x.add(&b.scale(c[j]));
            }
            x
        })
        .collect()
}

/// The action of a group-side transform on a, in `basis_a` coordinates;
/// entries are snapped to integers (they are signed permutations for every
/// catalogue kind) and validated.
fn map_on_a(
    basis_a: &[Mat],
    transform: impl Fn(&Mat) -> Mat,
) -> Result<RMat> {
    let k = basis_a.len();
    let mut w = RMat::zeros(k, k);
    for (j, a) in basis_a.iter().enumerate() {
        let img = transform(a);
        let coords = coords_in_basis(&img, basis_a);
        // validate that the image actually lies in span(basis_a)
        let mut back = Mat::zeros(a.field, a.rows, a.cols);
        for (i, b) in basis_a.iter().enumerate() {
            back = back.add(&b.scale(coords[i]));
        }
        if !back.approx_eq(&img, 1e-9 * img.max_abs().max(1.0)) {
            return Err(Error::DescriptorInvalid(
                "a is not preserved by the stored involution".into(),
            ));
        }
        for i in 0..k {
            let snapped = coords[i].round();
            if (coords[i] - snapped).abs() > 1e-9 {
                return Err(Error::DescriptorInvalid(
                    "action on a is not a signed permutation".into(),
                ));
            }
            w.set(i, j, snapped);
        }
    }
    Ok(w)
}

/// Shared su(1,n;F) lightcone realization data.
struct Su1n {
    j: Mat,
    h0: Mat,
    basis_g: Vec<Mat>,
    basis_k: Vec<Mat>,
    basis_m: Vec<Mat>,
    basis_n: Vec<Mat>,
    basis_nbar: Vec<Mat>,
    w0: Mat,
}

/// The nbar matrix of an H-type coordinate pair (x, z), x in F^{n-1},
/// z in Im(F).
pub(crate) fn nbar_matrix(field: Field, n: usize, x: &[Scalar], z: Scalar) -> Mat {
    let nn = n + 1;
    let mut m = Mat::zeros(field, nn, nn);
    m.set(0, 0, z);
    m.set(0, 1, z);
    m.set(1, 0, -z);
    m.set(1, 1, -z);
    for (i, &xi) in x.iter().enumerate() {
        m.set(0, 2 + i, xi.conj());
        m.set(1, 2 + i, -xi.conj());
        m.set(2 + i, 0, xi);
        m.set(2 + i, 1, xi);
    }
    m
}

fn build_su1n(field: Field, n: usize) -> Result<Su1n> {
    if n < 2 {
        return Err(Error::DescriptorInvalid(format!("rank-one needs n >= 2, got {}", n)));
    }
    let nn = n + 1;
    let d = field.dim();
    let mut jd = vec![-1.0; nn];
    jd[0] = 1.0;
    let j = Mat::diag(field, &jd);

    let units = unit_mats(field, nn, nn);
    let rel = |x: &Mat| -> Vec<f64> {
        x.conj_transpose().matmul(&j).add(&j.matmul(x)).vectorize()
    };
    let trace0 = |x: &Mat| -> Vec<f64> {
        let t = x.trace();
        vec![t.w, t.x]
    };
    let ops: Vec<&dyn Fn(&Mat) -> Vec<f64>> = if field == Field::C {
        vec![&rel, &trace0]
    } else {
        vec![&rel]
    };
    let basis_g = kernel_in_span(&units, &ops);
    let expect = match field {
        Field::R => nn * n / 2,
        Field::C => nn * nn - 1,
        Field::H => nn * (2 * nn + 1),
    };
    if basis_g.len() != expect {
        return Err(Error::DescriptorInvalid(format!(
            "dim g = {}, expected {}",
            basis_g.len(),
            expect
        )));
    }

    let mut h0 = Mat::zeros(field, nn, nn);
    h0.set(0, 1, Scalar::one());
    h0.set(1, 0, Scalar::one());

    // nbar from the H-type coordinates; n = theta(nbar)
    let mut basis_nbar = Vec::new();
    for i in 0..n - 1 {
        for axis in 0..d {
            let mut x = vec![Scalar::zero(); n - 1];
            x[i] = Scalar::unit(axis);
            basis_nbar.push(nbar_matrix(field, n, &x, Scalar::zero()));
        }
    }
    for axis in 1..d {
        basis_nbar.push(nbar_matrix(field, n, &vec![Scalar::zero(); n - 1], Scalar::unit(axis)));
    }
    let basis_n: Vec<Mat> = basis_nbar.iter().map(|x| x.conj_transpose().neg()).collect();

    let theta_fix = |x: &Mat| -> Vec<f64> { x.add(&x.conj_transpose()).vectorize() };
    let basis_k = kernel_in_span(&basis_g, &[&theta_fix]);
    let ad_h0 = |x: &Mat| -> Vec<f64> { h0.matmul(x).sub(&x.matmul(&h0)).vectorize() };
    let basis_m = kernel_in_span(&basis_g, &[&ad_h0, &theta_fix]);

    if basis_g.len() != basis_m.len() + 1 + 2 * basis_n.len() {
        return Err(Error::DescriptorInvalid("Bruhat dimension count failed".into()));
    }

    let mut w0d = vec![1.0; nn];
    w0d[1] = -1.0;
    w0d[2] = -1.0;
    let w0 = Mat::diag(field, &w0d);

    Ok(Su1n { j, h0, basis_g, basis_k, basis_m, basis_n, basis_nbar, w0 })
}

/// Assemble the sigma-dependent parts shared by all kinds.
#[allow(clippy::too_many_arguments)]
fn finish(
    id: String,
    kind: Kind,
    field: Field,
    ambient: usize,
    j_form: Option<Mat>,
    sigma_mat: Mat,
    sigma_inv_mat: Mat,
    w0_mat: Mat,
    basis_g: Vec<Mat>,
    basis_k: Vec<Mat>,
    basis_m_alg: Vec<Mat>,
    basis_a: Vec<Mat>,
    basis_n: Vec<Mat>,
    basis_nbar: Vec<Mat>,
    basis_ah: Vec<Mat>,
    a_h_split: usize,
    a_h_in_a: RMat,
    a_plus_rays: Vec<Vec<f64>>,
    scalar_ray: Vec<f64>,
) -> Result<GroupDescriptor> {
    let sig = |x: &Mat| sigma_mat.matmul(x).matmul(&sigma_inv_mat);
    let sigma_fix = |x: &Mat| -> Vec<f64> { x.sub(&sig(x)).vectorize() };
    let sigma_anti = |x: &Mat| -> Vec<f64> { x.add(&sig(x)).vectorize() };
    let theta_fix = |x: &Mat| -> Vec<f64> { x.add(&x.conj_transpose()).vectorize() };

    let basis_h = kernel_in_span(&basis_g, &[&sigma_fix]);
    let basis_kh = kernel_in_span(&basis_k, &[&sigma_fix]);
    let basis_mh = kernel_in_span(&basis_m_alg, &[&sigma_fix]);
    let basis_nh = kernel_in_span(&basis_n, &[&sigma_fix]);
    let basis_nbar_h = kernel_in_span(&basis_nbar, &[&sigma_fix]);
    let basis_n_minus_sigma = kernel_in_span(&basis_n, &[&sigma_anti]);
    let basis_nbar_minus_sigma = kernel_in_span(&basis_nbar, &[&sigma_anti]);
    let basis_m_cap_k = kernel_in_span(&basis_m_alg, &[&theta_fix]);

    let w0_inv = w0_mat.inverse().map_err(|_| {
        Error::DescriptorInvalid("w0 representative is singular".into())
    })?;
    let w0_on_a = map_on_a(&basis_a, |x| w0_inv.matmul(x).matmul(&w0_mat))?;
    let sigma_on_a = map_on_a(&basis_a, sig)?;

    let rho = half_trace_functional(&basis_a, &basis_n);
    let rho_h = half_trace_functional(&basis_ah, &basis_nh);

    Ok(GroupDescriptor {
        id,
        kind,
        field,
        ambient,
        j_form,
        sigma_mat,
        sigma_inv_mat,
        w0_mat,
        basis_g,
        basis_k,
        basis_m_alg,
        basis_a,
        basis_n,
        basis_nbar,
        basis_h,
        basis_kh,
        basis_mh,
        basis_nh,
        basis_nbar_h,
        basis_n_minus_sigma,
        basis_nbar_minus_sigma,
        basis_m_cap_k,
        basis_ah,
        a_h_split,
        a_h_in_a,
        rho,
        rho_h,
        w0_on_a,
        sigma_on_a,
        a_plus_rays,
        scalar_ray,
    })
}

pub(super) fn rank1(field: Field, n: usize, m: usize) -> Result<GroupDescriptor> {
    if m == 0 || m >= n {
        return Err(Error::DescriptorInvalid(format!(
            "rank-one pair needs 0 < m < n, got m={} n={}",
            m, n
        )));
    }
    let su = build_su1n(field, n)?;
    let nn = n + 1;
    let mut sd = vec![1.0; nn];
    for item in sd.iter_mut().take(nn).skip(m + 1) {
        *item = -1.0;
    }
    let sigma = Mat::diag(field, &sd);
    let ah = vec![su.h0.clone()];
    let mut a_h_in_a = RMat::zeros(1, 1);
    a_h_in_a.set(0, 0, 1.0);
    finish(
        format!("rank1:{}:{}:{}", field.tag(), n, m),
        Kind::Rank1 { field, n, m },
        field,
        nn,
        Some(su.j),
        sigma.clone(),
        sigma,
        su.w0,
        su.basis_g,
        su.basis_k,
        su.basis_m,
        vec![su.h0],
        su.basis_n,
        su.basis_nbar,
        ah,
        1,
        a_h_in_a,
        vec![vec![1.0]],
        vec![1.0],
    )
}

pub(super) fn trivial_sigma(field: Field, n: usize) -> Result<GroupDescriptor> {
    let su = build_su1n(field, n)?;
    let nn = n + 1;
    let sigma = Mat::identity(field, nn);
    let ah = vec![su.h0.clone()];
    let mut a_h_in_a = RMat::zeros(1, 1);
    a_h_in_a.set(0, 0, 1.0);
    finish(
        format!("ks:{}:{}", field.tag(), n),
        Kind::TrivialSigma { field, n },
        field,
        nn,
        Some(su.j),
        sigma.clone(),
        sigma,
        su.w0,
        su.basis_g,
        su.basis_k,
        su.basis_m,
        vec![su.h0],
        su.basis_n,
        su.basis_nbar,
        ah,
        1,
        a_h_in_a,
        vec![vec![1.0]],
        vec![1.0],
    )
}

pub(super) fn product(field: Field, n: usize) -> Result<GroupDescriptor> {
    let su = build_su1n(field, n)?;
    let nn = n + 1;
    let ambient = 2 * nn;
    let emb1 = |x: &Mat| {
        let mut m = Mat::zeros(field, ambient, ambient);
        m.set_block(0, 0, x);
        m
    };
    let emb2 = |x: &Mat| {
        let mut m = Mat::zeros(field, ambient, ambient);
        m.set_block(nn, nn, x);
        m
    };
    let both = |v: &[Mat]| -> Vec<Mat> {
        v.iter().map(emb1).chain(v.iter().map(emb2)).collect()
    };
    let mut swap = Mat::zeros(field, ambient, ambient);
    for i in 0..nn {
        swap.set(i, nn + i, Scalar::one());
        swap.set(nn + i, i, Scalar::one());
    }
    let j2 = Mat::block_diag(&[&su.j, &su.j]);
    let w0 = Mat::block_diag(&[&su.w0, &su.w0]);
    let mut diag_h0 = Mat::zeros(field, ambient, ambient);
    diag_h0.set_block(0, 0, &su.h0);
    diag_h0.set_block(nn, nn, &su.h0);
    let mut a_h_in_a = RMat::zeros(2, 1);
    a_h_in_a.set(0, 0, 1.0);
    a_h_in_a.set(1, 0, 1.0);
    finish(
        format!("product:{}:{}", field.tag(), n),
        Kind::Product { field, n },
        field,
        ambient,
        Some(j2),
        swap.clone(),
        swap,
        w0,
        both(&su.basis_g),
        both(&su.basis_k),
        both(&su.basis_m),
        vec![emb1(&su.h0), emb2(&su.h0)],
        both(&su.basis_n),
        both(&su.basis_nbar),
        vec![diag_h0],
        1,
        a_h_in_a,
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![1.0, 1.0],
    )
}

pub(super) fn siegel(n: usize, m: usize) -> Result<GroupDescriptor> {
    if m == 0 || m >= n {
        return Err(Error::DescriptorInvalid(format!(
            "Siegel pair needs 0 < m < n, got m={} n={}",
            m, n
        )));
    }
    let field = Field::R;
    let ambient = 2 * n;
    let mut omega = Mat::zeros(field, ambient, ambient);
    for i in 0..n {
        omega.set(i, n + i, Scalar::one());
        omega.set(n + i, i, -Scalar::one());
    }
    let units = unit_mats(field, ambient, ambient);
    let rel = |x: &Mat| -> Vec<f64> {
        x.transpose().matmul(&omega).add(&omega.matmul(x)).vectorize()
    };
    let basis_g = kernel_in_span(&units, &[&rel]);
    if basis_g.len() != n * (2 * n + 1) {
        return Err(Error::DescriptorInvalid("dim sp(n,R) mismatch".into()));
    }

    // n: symmetric matrices in the upper-right block; nbar: transpose
    let mut basis_n = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut x = Mat::zeros(field, ambient, ambient);
            x.set(i, n + j, Scalar::one());
            x.set(j, n + i, Scalar::one());
            basis_n.push(x);
        }
    }
    let basis_nbar: Vec<Mat> = basis_n.iter().map(|x| x.transpose()).collect();

    // m + a = {diag(A, -A^T)}; m is the trace-zero part
    let mut ma_units = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut x = Mat::zeros(field, ambient, ambient);
            x.set(i, j, Scalar::one());
            x.set(n + j, n + i, -Scalar::one());
            ma_units.push(x);
        }
    }
    let trace_top = |x: &Mat| -> Vec<f64> {
        vec![(0..n).map(|i| x.get(i, i).w).sum()]
    };
    let basis_m_alg = kernel_in_span(&ma_units, &[&trace_top]);
    let mut a_s_d = vec![1.0; ambient];
    for item in a_s_d.iter_mut().take(ambient).skip(n) {
        *item = -1.0;
    }
    let a_s = Mat::diag(field, &a_s_d);

    let theta_fix = |x: &Mat| -> Vec<f64> { x.add(&x.transpose()).vectorize() };
    let basis_k = kernel_in_span(&basis_g, &[&theta_fix]);

    let mut eps = vec![1.0; ambient];
    for i in m..n {
        eps[i] = -1.0;
        eps[n + i] = -1.0;
    }
    let sigma = Mat::diag(field, &eps);

    // a_H: the split parts of Sp(m) and Sp(n-m), organized as
    // (a ∩ a_H) + (a_H ∩ m)
    let mut a1d = vec![0.0; ambient];
    let mut a2d = vec![0.0; ambient];
    for i in 0..n {
        let v = if i < m { 1.0 } else { 0.0 };
        a1d[i] = v;
        a1d[n + i] = -v;
        a2d[i] = 1.0 - v;
        a2d[n + i] = -(1.0 - v);
    }
    let a1 = Mat::diag(field, &a1d);
    let a2 = Mat::diag(field, &a2d);
    let a_m_part = a1.scale((n - m) as f64).sub(&a2.scale(m as f64));
    let basis_ah = vec![a_s.clone(), a_m_part];
    let mut a_h_in_a = RMat::zeros(1, 1);
    a_h_in_a.set(0, 0, 1.0);

    finish(
        format!("siegel:{}:{}", n, m),
        Kind::Siegel { n, m },
        field,
        ambient,
        Some(omega.clone()),
        sigma.clone(),
        sigma,
        omega,
        basis_g,
        basis_k,
        basis_m_alg,
        vec![a_s],
        basis_n,
        basis_nbar,
        basis_ah,
        1,
        a_h_in_a,
        vec![vec![1.0]],
        // |det X|^lambda corresponds to the weight n*lambda on H_s
        vec![n as f64],
    )
}

fn gl_like(
    id: String,
    kind: Kind,
    field: Field,
    half: usize,
    sigma: Mat,
    sigma_inv: Mat,
    basis_ah: Vec<Mat>,
    a_h_split: usize,
    a_h_in_a: RMat,
) -> Result<GroupDescriptor> {
    let ambient = 2 * half;
    let basis_g = unit_mats(field, ambient, ambient);
    let mut basis_n = Vec::new();
    let mut basis_nbar = Vec::new();
    for i in 0..half {
        for j in 0..half {
            for axis in 0..field.dim() {
                let mut x = Mat::zeros(field, ambient, ambient);
                x.set(i, half + j, Scalar::unit(axis));
                basis_n.push(x);
                let mut y = Mat::zeros(field, ambient, ambient);
                y.set(half + i, j, Scalar::unit(axis));
                basis_nbar.push(y);
            }
        }
    }
    let mut ma_units = Vec::new();
    for blk in 0..2 {
        let off = blk * half;
        for i in 0..half {
            for j in 0..half {
                for axis in 0..field.dim() {
                    let mut x = Mat::zeros(field, ambient, ambient);
                    x.set(off + i, off + j, Scalar::unit(axis));
                    ma_units.push(x);
                }
            }
        }
    }
    let re_traces = |x: &Mat| -> Vec<f64> {
        let t1: f64 = (0..half).map(|i| x.get(i, i).w).sum();
        let t2: f64 = (0..half).map(|i| x.get(half + i, half + i).w).sum();
        vec![t1, t2]
    };
    let basis_m_alg = kernel_in_span(&ma_units, &[&re_traces]);

    let mut a1d = vec![0.0; ambient];
    let mut a2d = vec![0.0; ambient];
    for i in 0..half {
        a1d[i] = 1.0;
        a2d[half + i] = 1.0;
    }
    let basis_a = vec![Mat::diag(field, &a1d), Mat::diag(field, &a2d)];

    let theta_fix = |x: &Mat| -> Vec<f64> { x.add(&x.conj_transpose()).vectorize() };
    let basis_k = kernel_in_span(&basis_g, &[&theta_fix]);

    let mut w0 = Mat::zeros(field, ambient, ambient);
    for i in 0..half {
        w0.set(i, half + i, Scalar::one());
        w0.set(half + i, i, Scalar::one());
    }

    let nc = super::complex_block_dim(field, half) as f64;
    finish(
        id,
        kind,
        field,
        ambient,
        None,
        sigma,
        sigma_inv,
        w0,
        basis_g,
        basis_k,
        basis_m_alg,
        basis_a,
        basis_n,
        basis_nbar,
        basis_ah,
        a_h_split,
        a_h_in_a,
        vec![vec![1.0, -1.0]],
        vec![nc / 2.0, -nc / 2.0],
    )
}

pub(super) fn gl_block(field: Field, n: usize, m: usize) -> Result<GroupDescriptor> {
    if m == 0 || m >= n {
        return Err(Error::DescriptorInvalid(format!(
            "block pair needs 0 < m < n, got m={} n={}",
            m, n
        )));
    }
    let ambient = 2 * n;
    let mut eps = vec![1.0; ambient];
    for i in m..n {
        eps[i] = -1.0;
        eps[n + i] = -1.0;
    }
    let sigma = Mat::diag(field, &eps);

    // a_H: scalars on the four sub-blocks, split into the a-part
    // (A1 = F1+F2, A2 = F3+F4) and the m-part
    let fmat = |range: core::ops::Range<usize>| {
        let mut d = vec![0.0; ambient];
        for i in range {
            d[i] = 1.0;
        }
        Mat::diag(field, &d)
    };
    let f1 = fmat(0..m);
    let f2 = fmat(m..n);
    let f3 = fmat(n..n + m);
    let f4 = fmat(n + m..2 * n);
    let a1 = f1.add(&f2);
    let a2 = f3.add(&f4);
    let m1 = f1.scale((n - m) as f64).sub(&f2.scale(m as f64));
    let m2 = f3.scale((n - m) as f64).sub(&f4.scale(m as f64));
    let basis_ah = vec![a1, a2, m1, m2];
    gl_like(
        format!("glblock:{}:{}:{}", field.tag(), n, m),
        Kind::GlBlock { field, n, m },
        field,
        n,
        sigma.clone(),
        sigma,
        basis_ah,
        2,
        RMat::identity(2),
    )
}

pub(super) fn gl4n_over_gl2nc(n: usize) -> Result<GroupDescriptor> {
    if n == 0 {
        return Err(Error::DescriptorInvalid("n must be positive".into()));
    }
    let field = Field::R;
    let half = 2 * n;
    let ambient = 2 * half;
    // J = diag(J_half, J_half) with J_half the standard complex structure
    let mut j = Mat::zeros(field, ambient, ambient);
    for blk in 0..2 {
        let off = blk * half;
        for i in 0..n {
            j.set(off + i, off + n + i, Scalar::one());
            j.set(off + n + i, off + i, -Scalar::one());
        }
    }
    let j_inv = j.transpose(); // J^{-1} = -J = J^T
    let fmat = |range: core::ops::Range<usize>| {
        let mut d = vec![0.0; ambient];
        for i in range {
            d[i] = 1.0;
        }
        Mat::diag(field, &d)
    };
    let basis_ah = vec![fmat(0..half), fmat(half..ambient)];
    gl_like(
        format!("gl4R:gl2C:{}", n),
        Kind::Gl4nOverGl2nC { n },
        field,
        half,
        j,
        j_inv,
        basis_ah,
        2,
        RMat::identity(2),
    )
}
