//! Symmetry groups of Julia sets of rational maps on the Riemann sphere.
//!
//! The crate computes, verifies and classifies the holomorphic isometries
//! of the sphere that map the Julia set of a rational map onto itself.
//! It provides:
//!
//! - sphere geometry in homogeneous coordinates with the chordal metric,
//! - the isometry group of the sphere and classification of its finite
//!   subgroups,
//! - rational-map algebra (evaluation, composition, conjugation, critical
//!   points, homogeneous lifts, polynomial root finding),
//! - numeric dynamics: Julia-set sampling by backward orbits, escape-time
//!   rasters, the escape-rate and basin potentials, and the ergodic
//!   potential of the maximal-entropy measure,
//! - executable symmetry criteria (commutation tests, Hausdorff
//!   verification, precritical-set permutation, shared-Julia-set checks)
//!   and an overall symmetry-group classifier,
//! - the family `z^m + lambda/z^d` with its exact symmetry classification
//!   and parameter-plane rendering,
//! - a small expression grammar for maps and isometries used by the CLI.

pub mod dynamics;
pub mod error;
pub mod isometry;
pub mod mcmullen;
pub mod parse;
pub mod poly;
pub mod ppm;
pub mod rational;
pub mod sphere;
pub mod symmetry;
pub mod tolerances;

pub use error::Error;
pub use isometry::{classify_finite_group, GroupClass, Isometry};
pub use mcmullen::McMullenParams;
pub use poly::Polynomial;
pub use rational::RationalMap;
pub use sphere::{chordal_distance, SpherePoint};
