//! Exact incidence geometry in real projective space, built around point
//! configurations that span few ordinary hyperplanes.
//!
//! The crate constructs configurations with few ordinary hyperplanes
//! (elliptic-curve lifts into `P^4`, normal-rational-curve examples), counts
//! ordinary hyperplanes exactly, builds and classifies the dual arrangement
//! graph, computes spaces of quadrics through point sets, and runs a
//! desk-scale structure-detection pipeline with machine-checkable
//! verification at every step.
//!
//! All core math is generic over the scalar field via [`scalar::Scalar`]:
//! exact arbitrary-precision rationals ([`Rat`]) for every verification
//! suite, and `f64` with a configurable absolute tolerance for numerically
//! generated curve points. Concrete aliases for the common instantiations
//! live at the crate root.

pub mod arrangement;
pub mod checks;
pub mod dual_graph;
pub mod elliptic;
pub mod error;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod projective;
pub mod quadrics;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};
pub use scalar::{float_tolerance, set_float_tolerance, Rat, Scalar};

/// Exact-mode aliases.
pub type ExactPoint = projective::ProjectivePoint<Rat>;
pub type ExactHyperplane = projective::Hyperplane<Rat>;
pub type ExactConfig = projective::PointConfig<Rat>;



/// Float-mode aliases (tolerance-based zero tests).
pub type FloatPoint = projective::ProjectivePoint<f64>;
pub type FloatHyperplane = projective::Hyperplane<f64>;
pub type FloatConfig = projective::PointConfig<f64>;
