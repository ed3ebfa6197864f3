//! Lines on Calabi-Yau complete-intersection threefolds.
//!
//! The crate constructs explicit lines on two families of Calabi-Yau
//! complete intersections (a (3,3) pencil in P⁵ and a (2,2,2,2) family in
//! P⁷), expands them into orbits under finite automorphism groups, computes
//! normal-bundle splitting types via minimal-degree syzygies, and computes
//! expected generic line counts by Schubert calculus on the Grassmannian of
//! lines.

pub mod algebra;
pub mod error;
pub mod geometry;
pub mod line_search;
pub mod normal_bundle;
pub mod report;
pub mod schubert;
pub mod symmetry;

pub use error::{Error, Result};
