//! Edge local complementation (ELC) and local complementation (LC) on simple
//! graphs, their orbits up to isomorphism, and the correspondence between
//! ELC orbits of bipartite graphs and equivalence classes of binary linear
//! codes.
//!
//! Vertices are 0-based throughout the library; the text formats in [`io`]
//! and the command-line tool use 1-based labels.

pub mod canon;
pub mod census;
pub mod code;
pub mod graph;
pub mod io;
pub mod orbit;

pub use canon::{canonical_form, canonical_key, is_isomorphic, CanonicalForm, Canonizer};
pub use code::{GenMatrix, StandardForm};
pub use graph::{Coloring, Graph, GraphError, Side};
pub use orbit::{Operation, Orbit, OrbitError, OrbitOptions, OrbitReport};
