//! Clusters, least common ancestors and lca-relevance of leaf-labeled DAGs.
//!
//! The crate is `no_std` and needs only `alloc`. Vertices are identified by
//! [`VertexId`]; leaves carry unique string labels and every other vertex is
//! unlabeled. Leaf label sets are [`BitSet`]s indexing into the sorted
//! label list returned by [`Dag::ground`].

#![no_std]

extern crate alloc;

pub mod bitset;
pub mod dag;
pub mod fixtures;
pub mod hasse;
pub mod lca;
pub mod setsys;
pub mod shape;
pub mod sizes;
pub mod transform;

pub use bitset::BitSet;
pub use dag::{validate, Dag, DagError, RawDag, VertexId, Witness};
pub use hasse::{build_hasse, dotted_hasse, Demand, HasseDag, HasseError};
pub use lca::{LcaClassification, LcaError, LcaWitness};
pub use setsys::{SetSystem, SetSystemError, StructureReport, SystemFlags};
pub use shape::{recognize_shape, Property, PropertyReport};
pub use sizes::{SizeError, SizeIndex, DEFAULT_SUBSET_CAP};
pub use transform::{
    ominus, simplify, verify_preservation, Preservation, PreservationFailure,
    SimplificationResult, TransformError,
};
