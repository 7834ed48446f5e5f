//! Float intrinsics shim: inherent `f64` methods under `std`, `libm` otherwise.
//!
//! Modules that need transcendental functions import `FloatExt` under
//! `no_std`; with `std` enabled the inherent methods shadow the trait.

#![allow(dead_code)]

#[cfg(not(feature = "std"))]
pub trait FloatExt {
    fn sqrt(self) -> f64;
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn powf(self, p: f64) -> f64;
    fn powi(self, p: i32) -> f64;
    fn abs(self) -> f64;
    fn hypot(self, o: f64) -> f64;
    fn cos(self) -> f64;
    fn sin(self) -> f64;
    fn tan(self) -> f64;
    fn acos(self) -> f64;
    fn atan2(self, o: f64) -> f64;
    fn floor(self) -> f64;
    fn round(self) -> f64;
    fn signum(self) -> f64;
}

#[cfg(not(feature = "std"))]
impl FloatExt for f64 {
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn powf(self, p: f64) -> f64 {
        libm::pow(self, p)
    }
    fn powi(self, p: i32) -> f64 {
        libm::pow(self, p as f64)
    }
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn hypot(self, o: f64) -> f64 {
        libm::hypot(self, o)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn tan(self) -> f64 {
        libm::tan(self)
    }
    fn acos(self) -> f64 {
        libm::acos(self)
    }
    fn atan2(self, o: f64) -> f64 {
        libm::atan2(self, o)
    }
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    fn round(self) -> f64 {
        libm::round(self)
    }
    fn signum(self) -> f64 {
        if self > 0.0 {
            1.0
        } else if self < 0.0 {
            -1.0
        } else {
            self
        }
    }
}
