//! Fox colorings of knot and link diagrams modulo a prime.
//!
//! A diagram is stored as a planar 4-valent graph in PD (planar diagram)
//! notation.  From it we derive the Fox coloring matrix, its Smith normal
//! form and determinant, and the space of colorings mod p.  On top of that
//! sit Reidemeister rewrites that transport colorings across moves, and a
//! search engine that eliminates colors one at a time until a nontrivial
//! 13-coloring uses only five distinct colors.

pub mod algebra;
pub mod corpus;
pub mod diagram;
pub mod elimination;
pub mod palette;
pub mod rewrite;
pub mod tables;

pub use diagram::{Diagram, DiagramError};
