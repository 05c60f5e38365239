//! Bounds, explicit constructions and numerical rank certificates for
//! equilateral and s-distance sets in `ℓ_p^n` and in `ℓ_p` sums of Euclidean
//! spaces.
//!
//! The crate is organised around five modules:
//!
//! * [`space`] – the normed spaces, norms, distances and point sets;
//! * [`approx`] – even polynomial approximations of `|x|^p` with a measured
//!   sup-error certificate;
//! * [`bounds`] – the catalogue of known upper and lower bounds;
//! * [`certify`] – rank-lemma certificate matrices, span-dimension counts and
//!   the linear independence checks built on multivariate expansions;
//! * [`construct`] – explicit equilateral configurations and a numerical
//!   witness search.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`, which is what the CLI uses.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod approx;
pub mod bounds;
pub mod certify;
pub mod construct;
pub mod error;
pub mod io;
pub(crate) mod linalg;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use space::{Exponent, Space};

pub type PointSet64 = space::PointSet<f64>;
pub type PointSet32 = space::PointSet<f32>;
pub type EvenPolynomial64 = approx::EvenPolynomial<f64>;
pub type EvenPolynomial32 = approx::EvenPolynomial<f32>;
pub type SymMatrix64 = certify::SymMatrix<f64>;
pub type SymMatrix32 = certify::SymMatrix<f32>;
