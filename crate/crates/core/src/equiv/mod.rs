//! Three-valued decisions for blocked equivalence.
//!
//! General algorithms for these problems exist but are far from practical,
//! so every entry point is a semi-decision: `yes` carries a witness that has
//! been re-verified in exact arithmetic, `no` carries a named invariant
//! difference or a complete finite enumeration, and anything else is
//! `unknown` together with what the budget allowed.

mod decide;
mod finite;
mod gadget;
mod profile;
mod search;
mod unit;
mod verdict;

pub use decide::{decide_blocked_equivalence, verify_pair, EquivalenceGroup, Side};
pub use finite::GroupSampler;
pub use gadget::{
    gadget_pack, is_image_endomorphism, preserves_integer_image, stabilizer_transport_check, unit_condition_gadget,
    Gadget,
};
pub use profile::{invariant_profile, BlockInvariant, ConvexCokernel, InvariantProfile};
pub use unit::decide_with_unit;
pub use verdict::{BudgetReport, Certificate, SearchBudget, Verdict, VerdictStatus, Witness};
