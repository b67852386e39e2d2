//! Exact even central moments of centered binomial sums, the location of
//! their maximum in `p`, and moment-optimized Chebyshev sample sizes.
//!
//! `S_n(p) = Σ (X_j − p)` for i.i.d. Bernoulli(`p`) variables. Every moment,
//! bound and tail probability is an exact rational; floating point only
//! appears in the Monte Carlo harness and in decimal rendering.
//!
//! The numeric kernels are generic over [`Scalar`]; the public operations
//! are instantiated at [`ExactRational`].

pub mod argmax;
pub mod cli;
pub mod composition;
pub mod error;
pub mod montecarlo;
pub mod moments;
pub mod number;
pub mod planner;
pub mod polynomial;
pub mod recurrence;
pub mod scalar;
pub mod sturm;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision signed integer.
pub type Integer = num_bigint::BigInt;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactRational = num_rational::BigRational;

/// Binary floating point instantiation of the generic kernels.
pub type Float = f64;
