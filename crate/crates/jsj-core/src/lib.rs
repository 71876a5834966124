//! Combinatorial JSJ decompositions of tubular graphs of graphs.
//!
//! The pipeline classifies immersed vertical cycles of a Brady-Meier
//! tubular graph of graphs through their regular spheres, cuts the complex
//! open along the splitting cycles, removes redundant tubes, detects
//! surface pieces and assembles the JSJ decomposition of the fundamental
//! group. Auxiliary constructions extend this to free groups relative to a
//! family of cyclic words and to general graphs of free groups with cyclic
//! edge groups.

pub mod complex;
pub mod cover;
pub mod cycle;
pub mod fixtures;
pub mod io;
pub mod opening;
pub mod relative;
pub mod separation;
pub mod sphere;
pub mod util;
