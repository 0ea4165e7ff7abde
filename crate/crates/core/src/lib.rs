//! Weighted topological entropy and pressure for chains of symbolic systems.
//!
//! A chain `X_1 -> X_2 -> ... -> X_r` is built either from a digit set of a
//! self-affine sponge (every level a full shift) or from a labelled graph
//! (a sofic bottom level with projected upper levels). For exponents
//! `a = (a_1, ..., a_{r-1})` the crate provides
//!
//! - exact closed forms: the Kenyon–Peres recursion for sponges ([`sponge`])
//!   and eigenvalue nesting for spectrally aligned sofic chains ([`sofic`]);
//! - the exact nested cylinder count `S_N` for any chain, with Fekete upper
//!   bounds ([`estimator`]);
//! - the Bernoulli side of the variational principle ([`variational`]);
//! - JSON configuration, reports and the invariant suite behind the `wtp`
//!   binary ([`cli`]).
//!
//! ```
//! use wtp_core::catalog;
//! use wtp_core::sponge::{hausdorff_dimension, minkowski_dimension};
//!
//! let carpet = catalog::carpet();
//! let dim_h = hausdorff_dimension(&carpet).unwrap();
//! let dim_b = minkowski_dimension(&carpet);
//! assert!((dim_h - 1.3497).abs() < 1e-4);
//! assert!((dim_b - 1.3691).abs() < 1e-4);
//! ```

pub mod catalog;
pub mod cli;
pub mod error;
pub mod estimator;
mod numeric;
pub mod potential;
pub mod sofic;
pub mod sponge;
pub mod symbolic;
pub mod variational;
pub mod weights;

pub use error::{Error, Result};
pub use potential::Potential;
pub use symbolic::{Chain, DigitSystem, LabeledGraph, Word};
pub use weights::{Exponents, WeightVector};
