//! Combinatorial tools for counting immersed surfaces in right-angled reflection
//! orbifolds and for distinguishing graph covers of the bouquet of two circles.

pub mod cli;
pub mod coxeter;
pub mod error;
pub mod graphcovers;
pub mod involution;
pub mod metricgraph;
pub mod polyhedron;
pub mod surfaces;

pub use error::{Error, Result};
pub use involution::Involution;
