//! Executable homomorphism-duality toolkit for small graphs and relational
//! structures: H-coloring decisions, cores, subdivisions, shallow
//! topological minors, tree-depth and low tree-depth colorings,
//! `t`-approximations, and restricted-duality construction with exhaustive
//! verification over explicit finite samples.

pub mod approx;
pub mod canon;
pub mod duality;
pub mod error;
pub mod graph;
pub mod generators;
pub mod hom;
pub mod io;
pub mod named;
pub mod ops;
pub mod sparsity;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{Digraph, Graph};
pub use structure::{Block, Homomorphism, Signature, Structure, Symbol, ToStructure};
