//! GL(2n,C)-orbits on the Grassmannian of half-dimensional subspaces of
//! R^{4n}: the quadruple invariant (k, l1, l2, m), its computation from a
//! spanning matrix, and the enumeration of all orbits with representatives.
//!
//! Throughout, J is the block complex structure [[0, I], [-I, 0]] on R^{2n};
//! a subspace is "complex" when J-invariant and "totally real" when it meets
//! its own J-image trivially.

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, kernel_basis, singular_values, svd, RMat, Subspace};
use crate::mat::Mat;
use crate::orbits::OrbitLabel;
use crate::scalar::Scalar;
use crate::{Field, TOL_SINGULAR};

/// Result of classifying a half-dimensional subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlClassification {
    /// Rank of the projection to the second factor.
    pub k: usize,
    /// Complex dimension of the maximal complex part of the first-factor piece.
    pub l1: usize,
    /// Complex dimension of the maximal complex part of the second-factor piece.
    pub l2: usize,
    /// Complex rank of the coupling block.
    pub m: usize,
    /// Ratio between the smallest counted and the largest discarded singular
    /// value in the rank decision for `m` (infinite when the decision had no
    /// discarded or no counted values).
    pub spectral_gap: f64,
}

impl GlClassification {
    pub fn label(&self) -> OrbitLabel {
        OrbitLabel::Gl { k: self.k, l1: self.l1, l2: self.l2, m: self.m }
    }
}

/// One orbit of the enumeration, with enough data to build a representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlOrbit {
    pub n: usize,
    pub k: usize,
    pub l1: usize,
    pub l2: usize,
    pub m: usize,
}

impl GlOrbit {
    pub fn label(&self) -> OrbitLabel {
        OrbitLabel::Gl { k: self.k, l1: self.l1, l2: self.l2, m: self.m }
    }

    /// Spanning matrix (4n x 2n) of a representative subspace.
    pub fn representative(&self) -> RMat {
        let (n, k, l1, l2, m) = (self.n, self.k, self.l1, self.l2, self.m);
        let mut cols: Vec<Vec<f64>> = Vec::new();
        let e = |i: usize| -> Vec<f64> {
            let mut v = vec![0.0; 4 * n];
            v[i] = 1.0;
            v
        };
        let sum = |a: Vec<f64>, b: Vec<f64>, s: f64| -> Vec<f64> {
            a.iter().zip(b.iter()).map(|(x, y)| x + s * y).collect()
        };
        for j in 0..2 * n - k - l1 {
            cols.push(e(j));
        }
        for j in 0..l1 {
            cols.push(e(n + j));
        }
        for j in 0..m {
            cols.push(sum(e(2 * n - k - l1 + j), e(2 * n + j), 1.0));
        }
        for j in m..k - l2 {
            cols.push(e(2 * n + j));
        }
        for j in 0..m {
            cols.push(sum(e(3 * n - k - l1 + j), e(3 * n + j), -1.0));
        }
        for j in m..l2 {
            cols.push(e(3 * n + j));
        }
        debug_assert_eq!(cols.len(), 2 * n);
        let mut b = RMat::zeros(4 * n, 2 * n);
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                b.set(i, j, *x);
            }
        }
        b
    }
}

/// All orbits for the given n, in lexicographic (k, l1, l2, m) order.
pub fn enumerate_gl(n: usize) -> Vec<GlOrbit> {
    let mut out = Vec::new();
    for k in 0..=2 * n {
        let l1_lo = n.saturating_sub(k);
        let l1_hi = (2 * n - k) / 2;
        let l2_lo = k.saturating_sub(n);
        let l2_hi = k / 2;
        for l1 in l1_lo..=l1_hi {
            for l2 in l2_lo..=l2_hi {
                let m_hi = (k + l1 - n).min(l2);
                for m in 0..=m_hi {
                    out.push(GlOrbit { n, k, l1, l2, m });
                }
            }
        }
    }
    out
}

fn jmul(v: &[f64]) -> Vec<f64> {
    let n = v.len() / 2;
    let mut out = vec![0.0; 2 * n];
    for i in 0..n {
        out[i] = v[n + i];
        out[n + i] = -v[i];
    }
    out
}

/// Subtract from v its complex projection onto the complex line of the unit
/// vector w (real span of {w, Jw}).
fn deflate(v: &mut [f64], w: &[f64]) {
    let jw = jmul(w);
    let re = dot(v, w);
    let im = dot(v, &jw);
    for i in 0..v.len() {
        v[i] -= re * w[i] + im * jw[i];
    }
}

/// Complex Gram-Schmidt over the real picture: returns complex-orthonormal
/// representatives (one real vector per complex line).
fn complex_mgs(vectors: &[Vec<f64>], seed: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in seed.iter().chain(out.iter()) {
                deflate(&mut w, u);
            }
        }
        let nrm = dot(&w, &w).sqrt();
        if nrm > tol {
            for x in w.iter_mut() {
                *x /= nrm;
            }
            out.push(w);
        }
    }
    out
}

/// Real Gram-Schmidt, dropping near-dependent vectors.
fn real_mgs(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = dot(&w, u);
                for i in 0..w.len() {
                    w[i] -= c * u[i];
                }
            }
        }
        let nrm = dot(&w, &w).sqrt();
        if nrm > tol {
            for x in w.iter_mut() {
                *x /= nrm;
            }
            out.push(w);
        }
    }
    out
}

fn rmat_inverse(a: &RMat) -> Result<RMat> {
    let n = a.rows;
    let mut m = Mat::zeros(Field::R, n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, Scalar::real(a.get(i, j)));
        }
    }
    let inv = m.inverse()?;
    let mut out = RMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, inv.get(i, j).w);
        }
    }
    Ok(out)
}

/// Minimum-norm least-squares solution of a x = y.
fn lsq(a: &RMat, y: &[f64]) -> Vec<f64> {
    let (u, s, vt) = svd(a);
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let thr = TOL_SINGULAR * smax.max(1.0);
    let mut x = vec![0.0; a.cols];
    for (idx, &sv) in s.iter().enumerate() {
        if sv <= thr {
            continue;
        }
        let c = dot(&u.col(idx), y) / sv;
        for j in 0..a.cols {
            x[j] += c * vt.get(idx, j);
        }
    }
    x
}

fn rank_with_scale(a: &RMat, scale: f64) -> usize {
    let s = singular_values(a);
    let thr = TOL_SINGULAR * scale.max(1.0);
    s.iter().filter(|&&x| x > thr).count()
}

fn rows_of(a: &RMat, lo: usize, hi: usize) -> RMat {
    let mut out = RMat::zeros(hi - lo, a.cols);
    for i in lo..hi {
        for j in 0..a.cols {
            out.set(i - lo, j, a.get(i, j));
        }
    }
    out
}

fn j_image(s: &Subspace) -> Subspace {
    let imgs: Vec<Vec<f64>> = s.basis.iter().map(|v| jmul(v)).collect();
    Subspace::from_vectors(s.ambient, &imgs, TOL_SINGULAR)
}

/// Complex rank of the anti-linear map with real coefficient blocks (a, b),
/// through the rank of the real embedding [[a, -b], [b, a]]. Also returns the
/// spectral gap of the rank decision.
fn complex_rank(a: &RMat, b: &RMat) -> (usize, f64) {
    let (r, c) = (a.rows, a.cols);
    if r == 0 || c == 0 {
        return (0, f64::INFINITY);
    }
    let mut e = RMat::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            e.set(i, j, a.get(i, j));
            e.set(i, c + j, -b.get(i, j));
            e.set(r + i, j, b.get(i, j));
            e.set(r + i, c + j, a.get(i, j));
        }
    }
    let s = singular_values(&e);
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let thr = TOL_SINGULAR * smax.max(1.0);
    let cnt = s.iter().filter(|&&x| x > thr).count();
    let gap = if cnt == 0 || cnt == s.len() {
        f64::INFINITY
    } else {
        s[cnt - 1] / s[cnt].max(1e-300)
    };
    (cnt / 2, gap)
}

/// Build a real 2n x 2n matrix g, commuting with J, that maps the given
/// subspace onto the standard model with complex part on the first `l`
/// complex coordinates and a totally real part on the next `dim - 2l`.
/// Returns (g, l).
fn adapted_map(n: usize, s: &Subspace) -> Result<(RMat, usize)> {
    let two_n = 2 * n;
    let w_space = s.intersection(&j_image(s), TOL_SINGULAR);
    if w_space.dim() % 2 != 0 {
        return Err(Error::InvalidSubspace("complex part has odd dimension".into()));
    }
    let l = w_space.dim() / 2;
    // complex-orthonormal basis of the complex part
    let wbasis = complex_mgs(&w_space.basis, &[], 1e-8);
    if wbasis.len() != l {
        return Err(Error::InvalidSubspace("complex part basis extraction failed".into()));
    }
    // totally real complement inside the subspace: deflate the complex part
    // away, then real-orthonormalize (stays inside the subspace)
    let mut residuals: Vec<Vec<f64>> = Vec::new();
    for v in &s.basis {
        let mut w = v.clone();
        for u in &wbasis {
            deflate(&mut w, u);
        }
        residuals.push(w);
    }
    let ubasis = real_mgs(&residuals, 1e-8);
    if ubasis.len() != s.dim() - 2 * l {
        return Err(Error::InvalidSubspace("totally real part extraction failed".into()));
    }
    // complete to a complex basis of the ambient space; the completion only
    // needs complex independence, so orthogonalize against a complex frame of
    // everything found so far
    let mut frame = wbasis.clone();
    frame.extend(complex_mgs(&ubasis, &frame, 1e-8));
    if frame.len() != l + ubasis.len() {
        return Err(Error::InvalidSubspace("subspace is not totally real off its complex part".into()));
    }
    let std_vecs: Vec<Vec<f64>> = (0..two_n)
        .map(|i| {
            let mut v = vec![0.0; two_n];
            v[i] = 1.0;
            v
        })
        .collect();
    let completion = complex_mgs(&std_vecs, &frame, 1e-6);
    let mut cols: Vec<Vec<f64>> = Vec::new();
    cols.extend(wbasis);
    cols.extend(ubasis);
    cols.extend(completion);
    cols.truncate(n);
    if cols.len() != n {
        return Err(Error::InvalidSubspace("complex completion failed".into()));
    }
    let mut p = RMat::zeros(two_n, two_n);
    for (t, v) in cols.iter().enumerate() {
        let jv = jmul(v);
        for i in 0..two_n {
            p.set(i, t, v[i]);
            p.set(i, n + t, jv[i]);
        }
    }
    Ok((rmat_inverse(&p)?, l))
}

/// Classify a half-dimensional subspace of R^{4n}, given by the columns of a
/// spanning matrix (4n rows, any number of columns spanning a 2n-dimensional
/// space), into its orbit quadruple (k, l1, l2, m).
pub fn classify_gl(n: usize, spanning: &RMat) -> Result<GlClassification> {
    let two_n = 2 * n;
    let four_n = 4 * n;
    if spanning.rows != four_n {
        return Err(Error::InvalidSubspace(format!(
            "spanning matrix must have {} rows, got {}",
            four_n, spanning.rows
        )));
    }
    let s_all = singular_values(spanning);
    let scale = s_all.iter().cloned().fold(0.0_f64, f64::max);
    let rank = s_all.iter().filter(|&&x| x > TOL_SINGULAR * scale.max(1.0)).count();
    if rank != two_n {
        return Err(Error::InvalidSubspace(format!(
            "spanning matrix must have rank {}, got {}",
            two_n, rank
        )));
    }
    let b_top = rows_of(spanning, 0, two_n);
    let b_bot = rows_of(spanning, two_n, four_n);
    let k = rank_with_scale(&b_bot, scale);

    // first-factor piece: tops of combinations that vanish below
    let ker = kernel_basis(&b_bot, TOL_SINGULAR * scale.max(1.0));
    let lprime_vecs: Vec<Vec<f64>> = ker.iter().map(|c| b_top.mat_vec(c)).collect();
    let lprime = Subspace::from_vectors(two_n, &lprime_vecs, TOL_SINGULAR);
    // second-factor piece: the column space below
    let ldbl_vecs: Vec<Vec<f64>> = (0..b_bot.cols).map(|j| b_bot.col(j)).collect();
    let ldbl = Subspace::from_vectors(two_n, &ldbl_vecs, TOL_SINGULAR);
    if lprime.dim() != two_n - k || ldbl.dim() != k {
        return Err(Error::InvalidSubspace("piece dimensions are inconsistent".into()));
    }

    let (g1, l1) = adapted_map(n, &lprime)?;
    let (g2, l2) = adapted_map(n, &ldbl)?;

    // move both pieces to standard position
    let t_top = g1.matmul(&b_top);
    let t_bot = g2.matmul(&b_bot);

    // graph map over the standard second-factor piece, reduced modulo the
    // standard first-factor piece (set those coordinates to zero)
    let mut bmat = RMat::zeros(two_n, two_n);
    let std_dbl: Vec<usize> =
        (0..k - l2).chain((0..l2).map(|j| n + j)).collect();
    for &idx in &std_dbl {
        let mut y = vec![0.0; two_n];
        y[idx] = 1.0;
        let c = lsq(&t_bot, &y);
        let resid: f64 = t_bot
            .mat_vec(&c)
            .iter()
            .zip(y.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if resid > 1e-7 {
            return Err(Error::InvalidSubspace("standard piece not reachable".into()));
        }
        let mut top = t_top.mat_vec(&c);
        for j in 0..two_n - k - l1 {
            top[j] = 0.0;
        }
        for j in 0..l1 {
            top[n + j] = 0.0;
        }
        for (i, x) in top.iter().enumerate() {
            bmat.set(i, idx, *x);
        }
    }

    // anti-linear part of the graph map: (b + JbJ)/2 = [[A, B], [B, -A]]
    let mut a_blk = RMat::zeros(n, n);
    let mut b_blk = RMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a_blk.set(i, j, 0.5 * (bmat.get(i, j) - bmat.get(n + i, n + j)));
            b_blk.set(i, j, 0.5 * (bmat.get(i, n + j) + bmat.get(n + i, j)));
        }
    }
    // coupling block: the last (k - n + l1) complex rows against the first
    // l2 complex columns
    let rows_start = (two_n - k - l1).min(n);
    let mut a31 = RMat::zeros(n - rows_start, l2);
    let mut b31 = RMat::zeros(n - rows_start, l2);
    for i in rows_start..n {
        for j in 0..l2 {
            a31.set(i - rows_start, j, a_blk.get(i, j));
            b31.set(i - rows_start, j, b_blk.get(i, j));
        }
    }
    let (m, spectral_gap) = complex_rank(&a31, &b31);
    Ok(GlClassification { k, l1, l2, m, spectral_gap })
}

/// Complex rank of an element of the (-1)-eigenspace of the involution on the
/// nilradical, read off from the upper-right block of the ambient matrix.
pub(crate) fn nsigma_complex_rank(n: usize, y: &Mat) -> Result<usize> {
    let two_n = 2 * n;
    if y.rows != 4 * n || y.cols != 4 * n {
        return Err(Error::ShapeMismatch("expected a 4n x 4n matrix".into()));
    }
    let mut a = RMat::zeros(n, n);
    let mut b = RMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, y.get(i, two_n + j).w);
            b.set(i, j, y.get(i, two_n + n + j).w);
        }
    }
    Ok(complex_rank(&a, &b).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupDescriptor, Scope};
    use crate::rng::Rng;

    fn rmat_of(m: &Mat) -> RMat {
        let mut out = RMat::zeros(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.set(i, j, m.get(i, j).w);
            }
        }
        out
    }

    #[test]
    fn enumeration_for_n_equal_one() {
        let orbits = enumerate_gl(1);
        let quads: Vec<(usize, usize, usize, usize)> =
            orbits.iter().map(|o| (o.k, o.l1, o.l2, o.m)).collect();
        assert_eq!(quads, vec![(0, 1, 0, 0), (1, 0, 0, 0), (2, 0, 1, 0), (2, 0, 1, 1)]);
    }

    #[test]
    fn representatives_round_trip() {
        for n in 1..=3 {
            for orbit in enumerate_gl(n) {
                let rep = orbit.representative();
                let got = classify_gl(n, &rep)
                    .unwrap_or_else(|e| panic!("n={} {:?}: {:?}", n, orbit, e));
                assert_eq!(
                    (got.k, got.l1, got.l2, got.m),
                    (orbit.k, orbit.l1, orbit.l2, orbit.m),
                    "n={} {:?}",
                    n,
                    orbit
                );
            }
        }
    }

    #[test]
    fn extreme_subspaces() {
        // R^{2n} + 0 and 0 + R^{2n}
        for n in [1usize, 2] {
            let mut top = RMat::zeros(4 * n, 2 * n);
            let mut bot = RMat::zeros(4 * n, 2 * n);
            for j in 0..2 * n {
                top.set(j, j, 1.0);
                bot.set(2 * n + j, j, 1.0);
            }
            let c = classify_gl(n, &top).unwrap();
            assert_eq!((c.k, c.l1, c.l2, c.m), (0, n, 0, 0));
            let c = classify_gl(n, &bot).unwrap();
            assert_eq!((c.k, c.l1, c.l2, c.m), (2 * n, 0, n, 0));
        }
    }

    #[test]
    fn invariant_under_parabolic_moves_and_spanning_choice() {
        let n = 2;
        let d = GroupDescriptor::from_id("gl4R:gl2C:2").unwrap();
        let mut rng = Rng::seeded(211);
        for orbit in enumerate_gl(n) {
            let rep = orbit.representative();
            for _ in 0..5 {
                // the quadruple labels orbits of the parabolic of the
                // symmetry subgroup, so move by its random elements
                let h = rmat_of(&d.random_element(Scope::PH, &mut rng).mat);
                // remix the spanning columns on the right
                let mut mix = RMat::zeros(2 * n, 2 * n);
                loop {
                    for i in 0..2 * n {
                        for j in 0..2 * n {
                            mix.set(i, j, rng.normal());
                        }
                    }
                    let s = singular_values(&mix);
                    if s[s.len() - 1] > 0.2 {
                        break;
                    }
                }
                let moved = h.matmul(&rep).matmul(&mix);
                let got = classify_gl(n, &moved).unwrap();
                assert_eq!(
                    (got.k, got.l1, got.l2, got.m),
                    (orbit.k, orbit.l1, orbit.l2, orbit.m),
                    "{:?}",
                    orbit
                );
            }
        }
    }

    #[test]
    fn random_subspaces_land_in_the_open_orbit() {
        let mut rng = Rng::seeded(223);
        for n in [1usize, 2] {
            let mut open = 0;
            let total = 200;
            for _ in 0..total {
                let mut b = RMat::zeros(4 * n, 2 * n);
                for i in 0..4 * n {
                    for j in 0..2 * n {
                        b.set(i, j, rng.normal());
                    }
                }
                let c = classify_gl(n, &b).unwrap();
                if (c.k, c.l1, c.l2, c.m) == (2 * n, 0, n, n) {
                    open += 1;
                }
            }
            assert!(open as f64 / total as f64 >= 0.99, "n={} open={}", n, open);
        }
    }

    #[test]
    fn open_orbit_representative_has_clean_gap() {
        let orbit = GlOrbit { n: 2, k: 4, l1: 0, l2: 2, m: 2 };
        let c = classify_gl(2, &orbit.representative()).unwrap();
        assert_eq!(c.m, 2);
        assert!(c.spectral_gap > 1e6);
    }

    #[test]
    fn degenerate_input_rejected() {
        let n = 1;
        // rank-deficient spanning matrix
        let mut b = RMat::zeros(4 * n, 2 * n);
        b.set(0, 0, 1.0);
        b.set(0, 1, 2.0);
        assert!(matches!(classify_gl(n, &b), Err(Error::InvalidSubspace(_))));
        // wrong ambient dimension
        let b = RMat::zeros(6, 2);
        assert!(matches!(classify_gl(n, &b), Err(Error::InvalidSubspace(_))));
    }

    #[test]
    fn orbit_count_matches_enumeration_formula_samples() {
        assert_eq!(enumerate_gl(1).len(), 4);
        // every quadruple in range appears exactly once
        for n in 1..=3 {
            let orbits = enumerate_gl(n);
            let mut seen = orbits.clone();
            seen.dedup();
            assert_eq!(seen.len(), orbits.len());
            for o in &orbits {
                assert!(o.k <= 2 * n);
                assert!(o.l1 >= n.saturating_sub(o.k) && 2 * o.l1 <= 2 * n - o.k);
                assert!(o.l2 >= o.k.saturating_sub(n) && 2 * o.l2 <= o.k);
                assert!(o.m <= o.l2 && o.m + n <= o.k + o.l1);
            }
        }
    }
}
