//! Numerical toolkit for automorphic L-functions: coefficient tables,
//! evaluation anywhere in the plane, mollifiers, Mellin contour integrals,
//! mollified second moments and zero-density diagnostics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod character;
pub mod coeffs;
pub mod contour;
pub mod error;
pub mod eval;
pub mod hurwitz;
pub mod instance;
pub mod moments;
pub mod mollifier;
pub mod quad;
pub mod special;
pub mod tau;
pub mod theorems;

pub use error::{Error, Result};
pub use num_complex::Complex64;
