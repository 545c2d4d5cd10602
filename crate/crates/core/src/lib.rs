//! Combinatorial tools for fixed points of group actions on CAT(0) cube
//! complexes, worked through their 1-skeleta (median graphs), together with
//! exact arithmetic in automorphism groups of free groups.
//!
//! - [`word`], [`automorphism`], [`catalog`]: reduced words, automorphisms of
//!   `F_n` under the right-action convention, and the named generating sets.
//! - [`complex`], [`shapes`]: median graphs, intervals, convex hulls, cubes
//!   and the Helly median recursion.
//! - [`action`], [`triviality`]: finite simplicial actions, strong
//!   simpliciality, fixed sets, and the link/propagation cascade.

pub mod action;
pub mod automorphism;
pub mod catalog;
pub mod complex;
pub mod perm;
pub mod shapes;
pub mod triviality;
pub mod word;

pub use automorphism::{closure_enumerate, ClosureCaps, ClosureResult, FreeAutomorphism, IntegerMatrix};
pub use complex::{helly_common_point, HellyOptions, MedianComplex, Vertex, VertexSet};
pub use word::Word;
