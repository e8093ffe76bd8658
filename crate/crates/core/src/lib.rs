//! Norms on complex matrices induced by random vectors.
//!
//! For a random vector `X = (X_1, .., X_n)` of iid nondegenerate random
//! variables with `d` finite moments, the quantity
//!
//! ```text
//! |||A|||_{X,d} = ( E|<X, lambda(A)>|^d / d! )^(1/d)
//! ```
//!
//! is a norm on Hermitian matrices, and for even `d` it extends to a norm on
//! all square complex matrices as a trace polynomial in `Z` and `Z*`.
//!
//! The crate evaluates these norms along several independent routes:
//!
//! - [`norm::hermitian_norm_pow`]: sum over integer partitions of cumulant
//!   products times power sums `tr(A^k)`.
//! - [`norm::series_norm_pow`]: coefficient extraction from a truncated
//!   exponential of the cumulant series.
//! - [`norm::general_norm_pow`]: averaged trace words in `Z` and `Z*`.
//! - [`oracle::mc_norm_pow`]: seeded Monte Carlo estimation of the defining
//!   expectation.
//!
//! It also emits the symbolic trace-polynomial form of each norm
//! ([`words::symbolic_formula`]) and evaluates the generalized Hunter
//! polynomials ([`sympoly::hunter_poly`]).

pub mod cumulants;
pub mod error;
pub mod matrix;
pub mod norm;
pub mod oracle;
pub mod partitions;
pub mod random;
pub mod scalar;
pub mod series;
pub mod symbolic;
pub mod sympoly;
pub mod verify;
pub mod words;

pub use cumulants::{CumulantVector, DistributionSpec, Family};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, EigenvalueVector, Matrix};
pub use partitions::Partition;
pub use series::TruncatedSeries;
pub use words::{TracePolynomial, TraceWord};
