//! Exact Clebsch-Gordan matrices for integer-weight SO(3) irreps, invariant
//! quadratic forms, crystal-system reductions and the invariant
//! symmetric-hyperbolic model of linear elasticity.
//!
//! Scalars are generic over [`Scalar`]: [`RadicalScalar`] for exact
//! arithmetic in rationals extended by square roots, `f64` for speed.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

use alloc::string::String;

pub mod cg;
pub mod elasticity;
pub mod invariants;
pub mod irreps;
pub mod matrix;
pub mod oracle;
pub mod radix;

pub use cg::{AnyFamily, CgEngine, CgFamily, FamilyKey};
pub use irreps::{Axis, BasisKind, PiFraction, Weight};
pub use matrix::Matrix;
pub use radix::{Complex, ComplexRadical, RadicalScalar, RadixError, Ring, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Radix(#[from] RadixError),
    #[error("index {index} out of range for weight {weight}")]
    Index { weight: u32, index: i64 },
    #[error("weights ({n1}, {n2}, {n}) violate the triangle condition")]
    Triangle { n1: u32, n2: u32, n: u32 },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("not a rotation: {0}")]
    NotRotation(&'static str),
    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),
    #[error("{0}")]
    Domain(String),
    #[error("angle is not a multiple of pi/12 with exact cosine and sine")]
    UnsupportedAngle,
    #[error("calibration failed: {0}")]
    Calibration(&'static str),
}
