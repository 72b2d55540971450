//! Executable categorical constructions around reflection functors.
//!
//! The crate materializes finite categories, computes pushouts of categories
//! with normal forms, builds gluing and cone shapes, represents diagrams of
//! vector spaces over exact fields and realizes the reflection functors on
//! bounded chain complexes.

pub mod amalgam;
pub mod catcore;
pub mod cli;
pub mod error;
pub mod field;
pub mod glue;
pub mod homotopy;
pub mod linalg;
pub mod linrep;
pub mod random;
pub mod suites;
