//! Scalar tower over the three real division algebras.
//!
//! A single quaternion-shaped storage (four machine reals) serves all three
//! fields: R and C sit inside H as subrings, with the unused components
//! pinned to zero. Matrices carry a [`Field`] tag that records which subring
//! their entries are required to live in.

#[cfg(not(feature = "std"))]
use crate::flt::FloatExt;

use num_complex::Complex64;

/// The base field (real division algebra) of a matrix or descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    /// Real dimension of the algebra.
    pub fn dim(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    /// Short tag used in descriptor id strings.
    pub fn tag(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        }
    }

    pub fn parse(s: &str) -> Option<Field> {
        match s {
            "R" => Some(Field::R),
            "C" => Some(Field::C),
            "H" => Some(Field::H),
            _ => None,
        }
    }
}

/// Element of R, C or H stored as `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Scalar = Scalar { w: 0.0, x: 0.0, y: 0.0, z: 0.0 };
pub const ONE: Scalar = Scalar { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

impl Scalar {
    pub fn real(w: f64) -> Scalar {
        Scalar { w, x: 0.0, y: 0.0, z: 0.0 }
    }

    pub fn complex(w: f64, x: f64) -> Scalar {
        Scalar { w, x, y: 0.0, z: 0.0 }
    }

    pub fn quat(w: f64, x: f64, y: f64, z: f64) -> Scalar {
        Scalar { w, x, y, z }
    }

    pub fn zero() -> Scalar {
        ZERO
    }

    pub fn one() -> Scalar {
        ONE
    }

    /// Imaginary unit along the requested axis (1 = i, 2 = j, 3 = k).
    pub fn unit(axis: usize) -> Scalar {
        let mut s = ZERO;
        match axis {
            0 => s.w = 1.0,
            1 => s.x = 1.0,
            2 => s.y = 1.0,
            3 => s.z = 1.0,
            _ => panic!("scalar axis out of range"),
        }
        s
    }

    pub fn conj(self) -> Scalar {
        Scalar { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn abs(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(self, tol: f64) -> bool {
        self.abs() <= tol
    }

    pub fn inv(self) -> Scalar {
        let n = self.norm_sq();
        let c = self.conj();
        Scalar { w: c.w / n, x: c.x / n, y: c.y / n, z: c.z / n }
    }

    /// Real part.
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part (vector part); zero real component.
    pub fn im_part(self) -> Scalar {
        Scalar { w: 0.0, ..self }
    }

    /// Interpret as a complex number (valid for R/C-tagged data).
    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.w, self.x)
    }

    pub fn from_complex(c: Complex64) -> Scalar {
        Scalar::complex(c.re, c.im)
    }

    /// Does the value lie in the subring for `field` (within `tol`)?
    pub fn in_field(self, field: Field, tol: f64) -> bool {
        match field {
            Field::R => self.x.abs() <= tol && self.y.abs() <= tol && self.z.abs() <= tol,
            Field::C => self.y.abs() <= tol && self.z.abs() <= tol,
            Field::H => true,
        }
    }

    pub fn scale(self, t: f64) -> Scalar {
        Scalar { w: self.w * t, x: self.x * t, y: self.y * t, z: self.z * t }
    }

    /// Quaternion product; restricts to complex/real multiplication on the
    /// corresponding subrings.
    pub fn mul(self, o: Scalar) -> Scalar {
        Scalar {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }
}

impl core::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar { w: self.w + o.w, x: self.x + o.x, y: self.y + o.y, z: self.z + o.z }
    }
}

impl core::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar { w: self.w - o.w, x: self.x - o.x, y: self.y - o.y, z: self.z - o.z }
    }
}

impl core::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }
}

impl core::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_units_multiply_like_hamilton() {
        let i = Scalar::unit(1);
        let j = Scalar::unit(2);
        let k = Scalar::unit(3);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, -ONE);
        assert_eq!(j * j, -ONE);
        assert_eq!(k * k, -ONE);
    }

    #[test]
    fn complex_subring_closed() {
        let a = Scalar::complex(1.0, 2.0);
        let b = Scalar::complex(-0.5, 3.0);
        let p = a * b;
        assert!(p.in_field(Field::C, 0.0));
        let c = a.as_complex() * b.as_complex();
        assert!((p.w - c.re).abs() < 1e-15 && (p.x - c.im).abs() < 1e-15);
    }

    #[test]
    fn inverse_and_modulus() {
        let q = Scalar::quat(1.0, -2.0, 0.5, 3.0);
        let p = q * q.inv();
        assert!((p - ONE).abs() < 1e-14);
        // |pq| = |p||q| (multiplicativity of the quaternion norm)
        let r = Scalar::quat(0.3, 1.0, -1.0, 0.2);
        assert!(((q * r).abs() - q.abs() * r.abs()).abs() < 1e-12);
    }
}
