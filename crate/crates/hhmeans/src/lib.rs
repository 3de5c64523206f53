//! Weighted scalar means, Hermite-Hadamard-type functionals, and executable
//! inequality chains.
//!
//! The crate has three layers:
//!
//! - closed-form evaluators for the weighted arithmetic, geometric,
//!   logarithmic, and identric means with limit handling at every removable
//!   singularity ([`means`]), the Young gap and its classical bound families
//!   ([`young`]);
//! - quadrature evaluation of the weighted Hermite-Hadamard functional and
//!   its refinement bounds ([`hh`], [`quad`], [`convex`], [`fnspec`]);
//! - every named inequality chain as a per-term-reporting predicate plus a
//!   seeded randomized verification suite ([`chains`], [`sampling`]).

pub mod chains;
pub mod convex;
pub mod fnspec;
pub mod hh;
pub mod means;
pub mod quad;
pub mod sampling;
pub mod young;

pub use convex::{convexity_probe, ConvexFn, Interval, ProbeReport};
pub use means::{LimitPolicy, MeanError, PositivePair, Weight};
pub use quad::{FunctionalResult, QuadratureSpec};
pub use young::{BoundPair, Direction};
