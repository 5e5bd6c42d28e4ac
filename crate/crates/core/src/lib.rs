//! Exact symbolic calculus of linear weightings on trivialized vector bundles.
//!
//! Everything here works over the rationals: functions are polynomials in
//! weighted coordinates, sections are polynomial combinations of a weighted
//! frame, and deformation families are Laurent polynomials in a parameter `t`.
//! Every identity between filtrations, graded objects and deformations can
//! therefore be checked by exact equality.
//!
//! Module map:
//! - [`exact`]: rationals, polynomials, Laurent families and jets.
//! - [`weighting`]: weighted charts, filtration degrees, graded classes,
//!   Rees elements, zoom rescaling, weighted morphisms and weighted paths.
//! - [`bundle`]: weighted bundles, sections, induced weightings, homogeneous
//!   approximation and interpolation of sections.
//! - [`diffop`]: differential operators, weighted order, linearization and
//!   recovery of weightings from operators.
//! - [`clifford`]: Clifford algebra with word-length filtration, Getzler
//!   order and symbol, rotors and the pair-group action check.
//! - [`checks`]: seeded randomized property suites run in batches.

pub mod batch;
pub mod bundle;
pub mod checks;
pub mod clifford;
pub mod diffop;
mod error;
pub mod exact;
pub mod weighting;

pub use error::{Error, Result};
pub use exact::{FiltDegree, Jet, Laurent, Poly, Rational, Ring};
