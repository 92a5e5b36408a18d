use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::decide::{
    check_same_shape, decide_blocked_equivalence, finite_pairs, move_set, refute_by_profile, verify_pair,
    EquivalenceGroup, Side,
};
use super::search::{stabilizer_pairs, witness_cmp};
use super::verdict::{Certificate, SearchBudget, Verdict, VerdictStatus, Witness};
use crate::error::{Error, Result};
use crate::intmat::{smith_normal_form, IntMatrix};
use crate::poset_block::BlockedMatrix;

/// Most stabilizer generators harvested from collisions.
const STABILIZER_GENERATORS: usize = 64;

/// Largest share of the node budget spent harvesting stabilizer generators;
/// the rest goes to the coset closure.
const STABILIZER_SEARCH_NODES: u64 = 20_000;

/// Condition `(V^-1)^T x - y` in `im_Z(B^T)`, tested through the Smith
/// form `P B^T Q = D`: `z` lies in the image iff `(P z)_i` is divisible by
/// `d_i` for every `i` (with `d_i = 0` past the rank).
struct UnitCondition {
    p: IntMatrix,
    d: Vec<BigInt>,
    x: IntMatrix,
    y: IntMatrix,
}

impl UnitCondition {
    fn new(b: &IntMatrix, x: &IntMatrix, y: &IntMatrix) -> Self {
        let snf = smith_normal_form(&b.transpose());
        let mut d = snf.diagonal();
        d.resize(b.cols(), BigInt::zero());
        UnitCondition { p: snf.u, d, x: x.clone(), y: y.clone() }
    }

    /// With `v_inv = V^-1`.
    fn holds_inverse(&self, v_inv: &IntMatrix) -> bool {
        let z = &(&(&v_inv.transpose() * &self.x) - &self.y);
        let pz = &self.p * z;
        self.d.iter().enumerate().all(|(i, d)| {
            let e = pz.get(i, 0);
            if d.is_zero() {
                e.is_zero()
            } else {
                e.is_multiple_of(d)
            }
        })
    }

    fn holds(&self, v: &IntMatrix) -> Result<bool> {
        Ok(self.holds_inverse(&v.inverse_unimodular()?))
    }
}

/// Decides whether some `(U, V)` in the group satisfies both
/// `U A V^-1 = B` and `(V^-1)^T x - y` in `im_Z(B^T)`.
///
/// A first solution of the matrix equation is searched for; the remaining
/// solutions form its coset under the stabilizer of `B`, which is explored
/// through products of stabilizer elements found by a search rooted at `B`.
pub fn decide_with_unit(
    a: &BlockedMatrix,
    b: &BlockedMatrix,
    x: &IntMatrix,
    y: &IntMatrix,
    group: EquivalenceGroup,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    check_same_shape(a, b)?;
    let shape = a.shape();
    let n = shape.total_cols();
    if x.shape() != (n, 1) || y.shape() != (n, 1) {
        return Err(Error::DimensionMismatch(format!("x and y must be columns of length {n}")));
    }
    let cond = UnitCondition::new(b.matrix(), x, y);
    let (am, bm) = (a.matrix(), b.matrix());

    if let Some((lefts, rights)) = finite_pairs(shape, group) {
        let mut best: Option<(IntMatrix, IntMatrix)> = None;
        let mut solutions = 0u64;
        let mut checked = 0u64;
        for u in &lefts {
            let ua = u * am;
            for v in &rights {
                checked += 1;
                if ua != bm * v {
                    continue;
                }
                solutions += 1;
                if cond.holds(v)? && best.as_ref().is_none_or(|w| witness_cmp((u, v), (&w.0, &w.1)) == Ordering::Less) {
                    best = Some((u.clone(), v.clone()));
                }
            }
        }
        let report = budget.report(checked, 0, false);
        return Ok(match best {
            Some((u, v)) => Verdict::yes(Witness::Pair { u, v }, report),
            None if solutions == 0 => Verdict::no(Certificate::new("finite_group_exhausted", checked, 0), report),
            None => Verdict::no(Certificate::new("unit_condition_exhausted", solutions, 0), report),
        });
    }

    if let Some(cert) = refute_by_profile(a, b, group, budget)? {
        return Ok(Verdict::no(cert, budget.report(0, 0, false)));
    }
    let first = decide_blocked_equivalence(a, b, group, Side::UavInverse, budget)?;
    if first.status != VerdictStatus::Yes {
        return Ok(first);
    }
    let mut report = first.budget.clone();
    let (u0, v0) = first.pair().map(|(u, v)| (u.clone(), v.clone())).expect("yes carries a pair");
    if cond.holds(&v0)? {
        return Ok(Verdict::yes(Witness::Pair { u: u0, v: v0 }, report));
    }

    // Every solution is (S U0, T V0) with S B T^-1 = B.
    let remaining = budget.max_nodes.saturating_sub(report.nodes_expanded).max(1);
    let sub = SearchBudget { max_nodes: remaining.min(STABILIZER_SEARCH_NODES), ..*budget };
    let moves = move_set(shape, group)?;
    let (pairs, used, depth) = stabilizer_pairs(bm, &moves, &sub, STABILIZER_GENERATORS);
    report.nodes_expanded += used;
    report.depth_reached = report.depth_reached.max(depth);

    // S B T' = B gives (S, T'^-1) in the V^-1 convention. Generators are
    // kept as (S, T, T^-1); the condition only sees V^-1 = V0^-1 T^-1, so
    // states are identified by T.
    let mut gens = Vec::with_capacity(2 * pairs.len());
    let mut gen_keys = HashSet::new();
    for (s, t) in &pairs {
        let (s_inv, t_inv) = (s.inverse_unimodular()?, t.inverse_unimodular()?);
        for g in [(s.clone(), t_inv.clone(), t.clone()), (s_inv, t.clone(), t_inv)] {
            if gen_keys.insert(pair_key(&g.0, &g.1)) {
                gens.push(g);
            }
        }
    }
    let v0_inv = v0.inverse_unimodular()?;
    let key = |t: &IntMatrix| {
        let mut k = Vec::new();
        t.encode_key(&mut k);
        k
    };
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue: VecDeque<(IntMatrix, IntMatrix, IntMatrix)> = VecDeque::new();
    seen.insert(key(&IntMatrix::identity(n)));
    queue.push_back((IntMatrix::identity(shape.total_rows()), IntMatrix::identity(n), IntMatrix::identity(n)));
    let cap = remaining.saturating_sub(used).max(1);
    // Every generated product counts against the cap, new or not.
    let mut visited = 1u64;
    while let Some((s, t, t_inv)) = queue.pop_front() {
        if cond.holds_inverse(&(&v0_inv * &t_inv)) {
            let (u, v) = (&s * &u0, &t * &v0);
            verify_pair(a, b, &u, &v, group, Side::UavInverse)?;
            report.nodes_expanded += visited;
            return Ok(Verdict::yes(Witness::Pair { u, v }, report));
        }
        for (gs, gt, gt_inv) in &gens {
            if visited >= cap {
                break;
            }
            visited += 1;
            let next_t = gt * &t;
            if seen.insert(key(&next_t)) {
                queue.push_back((gs * &s, next_t, &t_inv * gt_inv));
            }
        }
    }
    report.nodes_expanded += visited;
    report.exhausted = true;
    Ok(Verdict::unknown(report))
}

fn pair_key(s: &IntMatrix, t: &IntMatrix) -> Vec<u8> {
    let mut k = Vec::new();
    s.encode_key(&mut k);
    t.encode_key(&mut k);
    k
}
