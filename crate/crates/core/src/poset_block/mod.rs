//! Posets, block shapes and the blocked matrix algebra over Z.
//!
//! A blocked matrix in `M_{P,m,n}(Z)` has block `(i, j)` of size
//! `m_i x n_j`, and that block may be nonzero only when `i <= j` in `P`.
//! Posets are always normalised so that the order refines the integer
//! order, which makes every square blocked matrix block upper triangular.

mod blocked;
mod generators;
mod poset;
mod shape;

pub use blocked::{
    group_membership, invert_blocked, iota_embed, multiply_blocked, validate_membership, BlockedDoc, BlockedMatrix,
    GroupKind,
};
pub use generators::{elementary_generators, elementary_moves, ElementaryMove};
pub use poset::{Poset, PosetDoc};
pub use shape::{BlockShape, ShapeDoc};
