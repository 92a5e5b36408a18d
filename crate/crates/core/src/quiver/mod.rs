//! Z-representations of quivers, path-ring modules and K-webs.
//!
//! A representation assigns a presented abelian group `Z^g / im R` to each
//! vertex and an integer matrix on generators to each edge. Representations
//! correspond to modules over the path ring, with `A_v = P_v A`. Isomorphism
//! is decided exactly when all vertex groups are finite; with free summands
//! the search is bounded and may answer `Unknown`.
//!
//! A K-web collects `ker B{S}` and `cok B{S}` over the convex subsets `S` of
//! a blocked matrix's poset together with the six-term exact sequences of
//! every splitting of `S`. Isomorphic webs are necessary for blocked
//! equivalence.

mod canon;
mod iso;
mod kweb;
mod module;
mod rep;

pub use canon::FINITE_ORDER_CAP;
pub use iso::{decide_rep_isomorphism, finite_group_isomorphisms, TORSION_POOL_CAP};
pub use kweb::{build_kweb, decide_kweb_isomorphism, ArrowKind, KWeb, KWebArrow, KWebDocument, KWebNode, NodeKind};
pub use module::{module_to_zrep, zrep_to_module, PathModule};
pub use rep::{is_group_isomorphism, is_isomorphism, is_morphism, Edge, Quiver, ZRep};
