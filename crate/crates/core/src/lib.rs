//! Recognition of closed oriented 6-manifolds that split as a product of a
//! closed simply connected 4-manifold and a closed oriented surface, from a
//! finite description of the integral cohomology ring.

pub mod cli;
pub mod cohomology;
pub mod corpus;
pub mod format;
pub mod forms;
pub mod linalg;
pub mod recognizer;
