//! Exact chain calculus and numerical dynamics for polynomial
//! correspondences on the Riemann sphere.
//!
//! The crate has an exact half and a numeric half. The exact half
//! ([`algebra`], [`corresp`]) does integer polynomial elimination:
//! composition of correspondences by resultants, squarefree chain normal
//! forms, graph degrees and projective fixed-point counts. The numeric
//! half ([`orbits`], [`entropy`], [`julia`]) samples multivalued orbits on
//! the sphere with the chordal metric and estimates topological entropy,
//! degree-growth bounds and the local volume-growth indicators used to map
//! Julia- and Fatou-like sets.
//!
//! Everything downstream of a seed is deterministic, independent of thread
//! count.

pub mod algebra;
pub mod corresp;
pub mod entropy;
pub mod error;
pub mod julia;
pub mod orbits;
pub mod selftest;

pub use corresp::{compose, iterate, parse_correspondence, Correspondence, DegreeReport};
pub use error::{CoreError, Result};
