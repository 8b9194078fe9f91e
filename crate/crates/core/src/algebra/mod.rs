//! Exact arithmetic on bivariate integer polynomials: the elimination
//! engine (resultants), normalization (content, squarefree part),
//! discriminants and numeric specialization.
//!
//! All values are immutable after construction and every operation is a
//! pure function; callers may parallelize over independent calls.

pub mod bipoly;
pub mod factor;
pub mod gcd;
pub mod parse;
pub mod resultant;
pub mod unipoly;
pub(crate) mod zpoly;

pub use bipoly::{BiPoly, Var};
pub use factor::normalize;
pub use gcd::divides;
pub use parse::parse_bipoly;
pub use resultant::{discriminant_w, resultant_middle, resultant_wrt};
pub use unipoly::{specialize, UniPolyC};
