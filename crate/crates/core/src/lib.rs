//! Numerical core for rank-one and block symmetric pairs: scalar towers over
//! R/C/H, dense matrix kernels, group descriptors with validated structure
//! data, Iwasawa/Bruhat factorizations, H-type nilpotent coordinates,
//! two-parameter invariant kernels, orbit classification, and quadrature-based
//! verification of intertwining identities.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature switches float intrinsics to the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub(crate) mod flt;
pub mod scalar;
pub mod mat;
pub mod linalg;
pub mod rng;
pub mod weight;
pub mod groups;
pub mod decomp;
pub mod htype;
pub mod kernel;
pub mod orbits;
pub mod sphere;
pub mod intertwine;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
pub use mat::Mat;
pub use weight::Weight;
pub use groups::{GroupDescriptor, GroupElement};

/// Relative threshold below which a pivot/coefficient is treated as singular.
pub const TOL_SINGULAR: f64 = 1e-10;
