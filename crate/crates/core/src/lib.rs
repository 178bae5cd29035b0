//! Symbolic computation for one-relator relative presentations over torsion-free groups.

pub mod analysis;
pub mod centre;
pub mod decomposition;
pub mod diagrams;
pub mod products;
pub mod rewriting;
pub mod selftest;
pub mod truth;
pub mod words;
