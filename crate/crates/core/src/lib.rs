//! Exact minor statistics of `{+1, -1}` matrices.
//!
//! * [`matrix`]: the [`SignMatrix`] type, `had`/`json` formats, Hadamard test.
//! * [`construct`]: Sylvester and Paley Hadamard matrices, seeded random matrices.
//! * [`det`] and [`minors`]: exact determinants, full minor censuses, and the
//!   Cauchy-Binet Gram shortcut for sums of squared minors.
//! * [`bounds`]: closed-form bounds, thresholds and densities as exact rationals.
//! * [`sampling`]: exhaustive and Monte Carlo expectations over random matrices.
//! * [`cli`]: the `signminors` command-line front end.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod det;
pub mod error;
pub mod matrix;
pub mod minors;
pub mod rational;
pub mod sampling;
pub mod subsets;

pub use error::{Error, Result};
pub use matrix::{is_hadamard, parse_sign_matrix, serialize_sign_matrix, Format, SignMatrix};
pub use minors::{enumerate_minors, sum_squares_gram, EngineConfig, MinorStats, Strategy};
pub use rational::ExactRational;
