//! Toric geometry toolkit: exact polyhedral and lattice checks, the canonical
//! Kähler structure of a toric manifold built by symplectic cutting, point
//! models of the cut space, and contact toric cones.

pub mod contact;
pub mod cutmodel;
pub mod fixtures;
pub mod kahler;
pub mod polylattice;
