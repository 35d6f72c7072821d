//! Closed ideals, their intersections with intermediate subalgebras, and the
//! constructions separating systems with and without the intersection
//! property for every intermediate subalgebra.

mod constructions;
mod hull;
mod intersect;
mod subalgebra;

pub use constructions::*;
pub use hull::*;
pub use intersect::*;
pub use subalgebra::*;
