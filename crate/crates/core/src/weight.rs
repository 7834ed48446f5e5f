//! Complex-valued weights (functionals on a split abelian subalgebra),
//! stored as coordinate vectors with respect to a descriptor's basis.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::linalg::RMat;

/// A functional on `a` (or on `a_H`), coordinates in the dual of the
/// descriptor's stored basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight(pub Vec<Complex64>);

impl Weight {
    pub fn zero(dim: usize) -> Weight {
        Weight(alloc::vec![Complex64::new(0.0, 0.0); dim])
    }

    pub fn real(coords: &[f64]) -> Weight {
        Weight(coords.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Constant multiple of the first basis functional (the common case for
    /// one-dimensional `a`).
    pub fn scalar(dim: usize, v: Complex64) -> Weight {
        let mut w = Weight::zero(dim);
        w.0[0] = v;
        w
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Evaluate on a coordinate vector of `a` (e.g. `a_log`).
    pub fn apply(&self, h: &[f64]) -> Complex64 {
        assert_eq!(h.len(), self.0.len());
        self.0
            .iter()
            .zip(h.iter())
            .map(|(c, &x)| c * x)
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    }

    /// Pullback along a linear map of `a` given in basis coordinates:
    /// `(self ∘ W)` has coordinate vector `W^T · self`.
    pub fn pullback(&self, w: &RMat) -> Weight {
        assert_eq!(w.rows, self.0.len());
        let mut out = Weight::zero(w.cols);
        for j in 0..w.cols {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..w.rows {
                s += self.0[i] * w.get(i, j);
            }
            out.0[j] = s;
        }
        out
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(o.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, t: Complex64) -> Weight {
        Weight(self.0.iter().map(|a| a * t).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, o: &Weight) -> f64 {
        self.sub(o).max_abs()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }
}
