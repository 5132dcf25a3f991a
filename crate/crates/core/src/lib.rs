//! Closed-form summation of binomially weighted power series of the classical
//! orthogonal polynomials, with independent oracles (truncated series in
//! standard or extended precision, contour quadrature and asymptotic limits)
//! and the application to the harmonic-oscillator propagator.
//!
//! Every numerical routine is generic over [`scalar::Real`], implemented for
//! `f32`, `f64` and the 256-bit software float [`Extended`].

// negated comparisons are how NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
mod bigfloat;
pub mod case;
pub mod closed;
pub mod contour;
pub mod error;
pub mod genfn;
pub mod limits;
pub mod oracle;
pub mod poly;
pub mod propagator;
pub mod scalar;
pub mod verify;

pub use bigfloat::BigFloat;
pub use error::{Error, Result};
pub use num_complex::Complex;

pub type Extended = BigFloat<4>;
pub type Complex64 = Complex<f64>;
pub type ComplexExt = Complex<Extended>;
