//! Random uniform and pure random simplicial complexes.
//!
//! This crate provides the combinatorial data model (facet antichains over
//! bitset faces), the two random models (`generators`), closed-form theory
//! curves (`predictions`), simplicial homology over prime fields
//! (`homology`), shellability and Cohen–Macaulay checks (`shellability`),
//! and the monotone-Boolean-function / evasiveness side (`boolean`).

pub mod combinat;
pub mod complex;
pub mod error;
pub mod vertex_set;

pub mod boolean;
pub mod generators;
pub mod homology;
pub mod predictions;
pub mod shellability;

pub use complex::{all_subsets, down_closure, FVector, SimplicialComplex};
pub use error::{Error, Result};
pub use vertex_set::VertexSet;
