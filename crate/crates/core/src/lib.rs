//! Moment sequences of convex distribution functions on [0,1], completely
//! alternating sequences, Laplace exponents of subordinators, and the
//! regenerative composition structures they drive.
//!
//! The pieces connect as follows:
//!
//! - [`momentrep`]: a convex CDF `F` is a mixture of uniforms on `[ξ,1]`
//!   with mixing probability `ν`; its moments `c` give `a(n) = n c(n−1)`,
//!   which is completely alternating.
//! - [`subord`]: `Φ(n)` of a subordinator is completely alternating and,
//!   normalized by `Φ(1) = 1`, equals `a(n)` for some convex `F`.
//! - [`compstruct`]: `Φ` fixes the first-part law `q(n, ·)` of a regenerative
//!   composition structure, sampled either recursively or by clustering
//!   uniform points in the gaps of the subordinator's range.
//! - [`kconvex`]: the same story one convexity order up.
//!
//! All identities run in exact rational arithmetic ([`Rational`]); only the
//! samplers and Newton interpolation use floating point.

pub mod compstruct;
pub mod error;
pub mod gof;
pub mod kconvex;
pub mod momentrep;
pub mod montecarlo;
pub mod rational;
pub mod seqcalc;
pub mod subord;

pub use error::{Error, Result};
pub use rational::Rational;
