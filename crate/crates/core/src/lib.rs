//! Root-system combinatorics for real semisimple Lie algebras.
//!
//! The crate has two halves. The exact half ([`rootsys`], [`weyl`], [`autos`],
//! [`weighted`], [`symspace`]) works over arbitrary-precision rationals:
//! root systems in standard coordinates, Weyl groups as permutation groups,
//! Dynkin diagrams with their automorphisms, multiplicity-weighted systems,
//! and the de Rham factor combinatorics of symmetric spaces of noncompact
//! type. The numerical half ([`lieverify`]) realizes small real semisimple
//! Lie algebras as matrix algebras, computes their restricted root space
//! decompositions in double precision, and certifies that weighted diagram
//! automorphisms lift to honest Lie algebra automorphisms.

pub mod autos;
pub mod lieverify;
pub mod linalg;
pub mod rootsys;
pub mod symspace;
pub mod weighted;
pub mod weyl;

pub use autos::{DiagramIsomorphism, DynkinDiagram, RootIsomorphism};
pub use lieverify::{MatrixAlgebra, RestrictedRootData, Tolerances};
pub use linalg::{LinearMap, Rat, RatMatrix, Vector};
pub use rootsys::{ComponentDecomposition, ComponentType, IrreducibleType, RootSystem};
pub use symspace::{FactorSpec, SpaceSpec};
pub use weighted::{
    AlgebraDescriptor, AlgebraId, Catalogue, CatalogueEntry, WeightedDynkinDiagram,
    WeightedRootSystem,
};
pub use weyl::{SimpleSystem, WeylElement, DEFAULT_WEYL_CAP};
