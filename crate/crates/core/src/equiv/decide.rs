use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::finite::{finite_elements, GroupSampler, FINITE_PAIR_CAP};
use super::profile::{invariant_profile_with, InvariantProfile};
use super::search::{bidirectional, witness_cmp, MoveSet, Outcome};
use super::verdict::{Certificate, SearchBudget, Verdict, Witness};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::poset_block::{elementary_moves, group_membership, BlockShape, BlockedMatrix, GroupKind};

/// Acting group `G_m x G_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceGroup {
    Gl,
    Sl,
    /// GL on both sides, with `V{i} = 1` whenever `n_i = 1`.
    UnitRestricted,
}

impl EquivalenceGroup {
    pub fn kind(self) -> GroupKind {
        match self {
            EquivalenceGroup::Sl => GroupKind::Sl,
            _ => GroupKind::Gl,
        }
    }

    pub(crate) fn fixes_unit_blocks(self) -> bool {
        self == EquivalenceGroup::UnitRestricted
    }
}

/// Relation between the witness pair and the query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `U A V = B`.
    #[default]
    Uav,
    /// `U A V^-1 = B`.
    UavInverse,
}

pub(crate) fn check_same_shape(a: &BlockedMatrix, b: &BlockedMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch("both matrices must have the same block shape".into()));
    }
    Ok(())
}

/// Membership of `V` in the column-side group, including the unit
/// restriction.
pub(crate) fn in_right_group(v: &IntMatrix, shape: &BlockShape, group: EquivalenceGroup) -> Result<bool> {
    if !group_membership(v, shape, group.kind())? {
        return Ok(false);
    }
    if group.fixes_unit_blocks() {
        for i in 0..shape.num_blocks() {
            if shape.row_sizes()[i] == 1 {
                let k = shape.row_range(i).start;
                if *v.get(k, k) != 1.into() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub(crate) fn move_set(shape: &BlockShape, group: EquivalenceGroup) -> Result<MoveSet> {
    Ok(MoveSet {
        left: elementary_moves(&shape.left_shape(), group.kind(), false)?,
        right: elementary_moves(&shape.right_shape(), group.kind(), group.fixes_unit_blocks())?,
        m: shape.total_rows(),
        n: shape.total_cols(),
    })
}

/// Finite left and right groups, when both are finite and small.
pub(crate) fn finite_pairs(shape: &BlockShape, group: EquivalenceGroup) -> Option<(Vec<IntMatrix>, Vec<IntMatrix>)> {
    let left = finite_elements(&shape.left_shape(), group.kind(), false)?;
    let right = finite_elements(&shape.right_shape(), group.kind(), group.fixes_unit_blocks())?;
    (left.len().saturating_mul(right.len()) <= FINITE_PAIR_CAP).then_some((left, right))
}

/// Confirms that every profile entry is unchanged on 50 sampled orbit points
/// of `a`. A certificate is only reported when this holds.
pub(crate) fn profile_is_invariant(
    a: &BlockedMatrix,
    profile: &InvariantProfile,
    group: EquivalenceGroup,
    budget: &SearchBudget,
) -> Result<bool> {
    let shape = a.shape();
    let mut left = GroupSampler::new(&shape.left_shape(), group.kind(), false, budget.seed)?;
    let mut right =
        GroupSampler::new(&shape.right_shape(), group.kind(), group.fixes_unit_blocks(), budget.seed ^ 0x9e37)?;
    for _ in 0..50 {
        let moved = &(&left.sample() * a.matrix()) * &right.sample();
        let moved = BlockedMatrix::new(shape.clone(), moved)?;
        if invariant_profile_with(&moved, group.kind(), budget.exec) != *profile {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Refutes equivalence by a validated invariant difference.
pub(crate) fn refute_by_profile(
    a: &BlockedMatrix,
    b: &BlockedMatrix,
    group: EquivalenceGroup,
    budget: &SearchBudget,
) -> Result<Option<Certificate>> {
    let pa = invariant_profile_with(a, group.kind(), budget.exec);
    let pb = invariant_profile_with(b, group.kind(), budget.exec);
    match pa.compare(&pb) {
        Some(cert) if profile_is_invariant(a, &pa, group, budget)? => Ok(Some(cert)),
        _ => Ok(None),
    }
}

/// Decides whether `B` lies in the orbit of `A` under the blocked unit
/// group, returning `U, V` in the requested side convention.
///
/// `no` is returned for a validated invariant difference, for an orbit that
/// was enumerated completely, or when both groups are finite and were
/// enumerated completely. Otherwise the answer is `yes` with a verified
/// witness, or `unknown`.
pub fn decide_blocked_equivalence(
    a: &BlockedMatrix,
    b: &BlockedMatrix,
    group: EquivalenceGroup,
    side: Side,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    check_same_shape(a, b)?;
    let shape = a.shape();
    let (am, bm) = (a.matrix(), b.matrix());

    if am == bm {
        let w =
            Witness::Pair { u: IntMatrix::identity(shape.total_rows()), v: IntMatrix::identity(shape.total_cols()) };
        return Ok(Verdict::yes(w, budget.report(1, 0, false)));
    }
    if let Some(cert) = refute_by_profile(a, b, group, budget)? {
        return Ok(Verdict::no(cert, budget.report(0, 0, false)));
    }

    if let Some((lefts, rights)) = finite_pairs(shape, group) {
        let mut best: Option<(IntMatrix, IntMatrix)> = None;
        let mut checked = 0u64;
        for u in &lefts {
            let ua = u * am;
            for v in &rights {
                checked += 1;
                if &ua * v == *bm {
                    // Sign matrices are their own inverses.
                    if best.as_ref().is_none_or(|w| witness_cmp((u, v), (&w.0, &w.1)) == Ordering::Less) {
                        best = Some((u.clone(), v.clone()));
                    }
                }
            }
        }
        let report = budget.report(checked, 0, false);
        return Ok(match best {
            Some((u, v)) => Verdict::yes(Witness::Pair { u, v }, report),
            None => Verdict::no(Certificate::new("finite_group_exhausted", checked, 0), report),
        });
    }

    let moves = move_set(shape, group)?;
    let run = bidirectional(am, bm, &moves, budget);
    match run.outcome {
        Outcome::Found(u, v) => {
            let v = match side {
                Side::Uav => v,
                Side::UavInverse => v.inverse_unimodular()?,
            };
            verify_pair(a, b, &u, &v, group, side)?;
            Ok(Verdict::yes(Witness::Pair { u, v }, budget.report(run.nodes, run.depth, false)))
        }
        Outcome::Exhausted { orbit_size } => Ok(Verdict::no(
            Certificate::new("orbit_exhausted", orbit_size, serde_json::Value::Null),
            budget.report(run.nodes, run.depth, false),
        )),
        Outcome::Budget => Ok(Verdict::unknown(budget.report(run.nodes, run.depth, true))),
    }
}

/// Exact re-verification of a reported pair.
pub fn verify_pair(
    a: &BlockedMatrix,
    b: &BlockedMatrix,
    u: &IntMatrix,
    v: &IntMatrix,
    group: EquivalenceGroup,
    side: Side,
) -> Result<()> {
    let shape = a.shape();
    if !group_membership(u, &shape.left_shape(), group.kind())? || !in_right_group(v, &shape.right_shape(), group)? {
        return Err(Error::NotAUnit);
    }
    let holds = match side {
        Side::Uav => &(u * a.matrix()) * v == *b.matrix(),
        Side::UavInverse => u * a.matrix() == b.matrix() * v,
    };
    if holds {
        Ok(())
    } else {
        Err(Error::WitnessRejected("pair does not satisfy the relation".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset_block::Poset;
    use crate::VerdictStatus;

    fn one(x: i64) -> BlockedMatrix {
        BlockedMatrix::single_block(IntMatrix::from_rows(&[[x]])).unwrap()
    }

    #[test]
    fn reflexive() {
        let a = one(5);
        let v = decide_blocked_equivalence(&a, &a, EquivalenceGroup::Sl, Side::Uav, &SearchBudget::default()).unwrap();
        assert_eq!(v.status, VerdictStatus::Yes);
        let (u, w) = v.pair().unwrap();
        assert!(u.is_identity() && w.is_identity());
    }

    #[test]
    fn trivial_sl_group_refutes() {
        let v = decide_blocked_equivalence(&one(2), &one(3), EquivalenceGroup::Sl, Side::Uav, &SearchBudget::default())
            .unwrap();
        assert!(v.is_no());
    }

    #[test]
    fn gl_sign_prefers_positive_u() {
        let v =
            decide_blocked_equivalence(&one(1), &one(-1), EquivalenceGroup::Gl, Side::Uav, &SearchBudget::default())
                .unwrap();
        let (u, w) = v.pair().unwrap();
        assert_eq!(u, &IntMatrix::from_rows(&[[1]]));
        assert_eq!(w, &IntMatrix::from_rows(&[[-1]]));
    }

    #[test]
    fn side_conventions_agree() {
        let shape = BlockShape::square(Poset::chain(2), vec![1, 1]).unwrap();
        let a = BlockedMatrix::new(shape.clone(), IntMatrix::from_rows(&[[2, 1], [0, 3]])).unwrap();
        let b = BlockedMatrix::new(shape, IntMatrix::from_rows(&[[2, 3], [0, 3]])).unwrap();
        for side in [Side::Uav, Side::UavInverse] {
            let v = decide_blocked_equivalence(&a, &b, EquivalenceGroup::Sl, side, &SearchBudget::default()).unwrap();
            let (u, w) = v.pair().unwrap();
            verify_pair(&a, &b, u, w, EquivalenceGroup::Sl, side).unwrap();
        }
    }

    #[test]
    fn unit_restriction_is_enforced() {
        // [1] vs [-1] needs V = -1 or U = -1; U is free, so still equivalent.
        let v = decide_blocked_equivalence(
            &one(1),
            &one(-1),
            EquivalenceGroup::UnitRestricted,
            Side::Uav,
            &SearchBudget::default(),
        )
        .unwrap();
        let (_, w) = v.pair().unwrap();
        assert!(w.is_identity());
    }
}
