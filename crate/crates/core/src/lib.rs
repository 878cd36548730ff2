//! Flag-graph toolkit: premaniplexes, voltage covers, and symmetry analysis.
//!
//! A premaniplex is an edge-colored graph with one involution per color;
//! maniplexes are the simple, semi-edge-free case and generalize flag graphs
//! of polytopes. This crate builds such objects from group presentations,
//! covers them via voltage assignments, and analyzes their symmetry.

pub mod acceptance;
pub mod analysis;
pub mod cli;
pub mod constructions;
pub mod group;
pub mod io;
pub mod operators;
pub mod premaniplex;
pub mod voltage;

mod unionfind;

pub use premaniplex::{Maniplex, Premaniplex, Validated};
