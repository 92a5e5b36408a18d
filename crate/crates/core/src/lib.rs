//! Exact arithmetic for poset-blocked integer matrices.
//!
//! The crate is organised around five layers:
//!
//! * [`intmat`]: arbitrary-precision integer matrices, Smith normal form,
//!   cokernels, integer solvability and rational image annihilators.
//! * [`poset_block`]: finite posets, block shapes and the blocked matrix
//!   algebra `M_{P,m,n}(Z)` together with its unit groups.
//! * [`equiv`]: a three-valued engine deciding blocked equivalence, the
//!   unit-vector variant, and the stabilizer gadget construction.
//! * [`sft`]: flow-equivalence invariants and reductions for shifts of
//!   finite type.
//! * [`quiver`]: Z-representations of quivers, the path-ring module
//!   correspondence and K-web diagrams.
//!
//! Every semi-decision returns a [`Verdict`]: a verified witness, a
//! certificate, or a budget report.

pub mod equiv;
pub mod error;
pub mod intmat;
pub mod par;
pub mod poset_block;
pub mod quiver;
pub mod sft;

pub use equiv::{Certificate, SearchBudget, Verdict, VerdictStatus, Witness};
pub use error::{Error, Result};
pub use intmat::{FgAbelianGroup, IntMatrix};
pub use par::ExecMode;
pub use poset_block::{BlockShape, BlockedMatrix, GroupKind, Poset};
