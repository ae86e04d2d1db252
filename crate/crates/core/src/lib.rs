//! Exact combinatorics of `σ_d`-invariant laminations of the circle.
//!
//! The crate works entirely with rational angles in `R/Z`: it validates
//! critical portraits, computes their unlinked classes and symbolic
//! itineraries, decides kneading periodicity, builds finite-depth
//! approximations of the lamination a portrait generates, audits them
//! against the lamination axioms, classifies classes (critical,
//! precritical, preperiodic, wandering to a horizon), and runs seeded
//! parameter-space experiments.

pub mod arith;
pub mod circle;
mod error;
pub mod experiments;
pub mod lamination;
pub mod portrait;
pub mod word;

pub use circle::{Angle, AngleSet, Chord, CircleArc, Degree, OrbitShape};
pub use error::{Error, Result};
pub use portrait::{CriticalPortrait, Kneading, Side, Violation};
