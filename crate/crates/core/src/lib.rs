//! Graph transversals in graph collections.
//!
//! A collection 𝒢 = (G_1, ..., G_h) of graphs on one vertex set contains a
//! transversal copy of H (with e(H) = h) when H embeds into the union so
//! that its edges can be assigned distinct colors, each edge lying in the
//! layer of its color. This crate provides an exact transversal solver and
//! the combinatorial building blocks around it: fraction graphs,
//! bandwidth partitions, clique-walks and clique factors, pair regularity
//! diagnostics and color absorbers.

pub mod absorber;
pub mod bandwidth;
pub mod error;
pub mod fraction;
pub mod graph;
pub mod io;
pub mod matching;
pub mod ratio;
pub mod reduced;
pub mod regularity;
pub mod solver;

pub use error::{Error, Result};
pub use fraction::ColorSet;
pub use graph::{Graph, GraphCollection, VertexSet};
pub use ratio::{Rational, Root};
