use super::condense::{condense, flow_core, CondensedForm};
use super::{franks_difference, is_irreducible, is_single_cycle, FlowInvariant, SftMatrix};
use crate::equiv::{decide_blocked_equivalence, BudgetReport, Certificate, EquivalenceGroup, SearchBudget, Side};
use crate::error::{Error, Result};
use crate::poset_block::{iota_embed, BlockShape, BlockedMatrix};
use crate::{Verdict, VerdictStatus, Witness};

/// `n_i = 1` where `m_i = 1`, otherwise `n_i = 2 + max(m_i, m'_i)`.
/// Requires `m_i = 1` exactly when `m'_i = 1`.
pub fn stabilization_target(m: &[usize], m2: &[usize]) -> Result<Vec<usize>> {
    if m.len() != m2.len() {
        return Err(Error::DimensionMismatch(format!("size vectors of lengths {} and {}", m.len(), m2.len())));
    }
    m.iter()
        .zip(m2)
        .enumerate()
        .map(|(i, (&a, &b))| match (a == 1, b == 1) {
            (true, true) => Ok(1),
            (false, false) => Ok(2 + a.max(b)),
            _ => Err(Error::StabilizationGate(i + 1)),
        })
        .collect()
}

/// Per-component data used to align two condensations.
struct Component {
    cycle: bool,
    invariant: FlowInvariant,
}

fn components(core: &SftMatrix, form: &CondensedForm) -> Vec<Component> {
    (0..form.components.len())
        .map(|i| {
            let block = form.component_matrix(core, i);
            Component { cycle: is_single_cycle(&block), invariant: FlowInvariant::of(&block) }
        })
        .collect()
}

/// Blocked `I - A` with nontrivial components widened to size at least 2,
/// so that size 1 marks exactly the single-cycle components.
fn promoted(form: &CondensedForm, comps: &[Component]) -> Result<BlockedMatrix> {
    let sizes: Vec<usize> = form.sizes.iter().zip(comps).map(|(&s, c)| if c.cycle { 1 } else { s.max(2) }).collect();
    iota_embed(&form.blocked, &sizes)
}

/// Relabels the blocks of `b` so that new block `i` is old block `f[i]`.
fn realign(b: &BlockedMatrix, f: &[usize], target: &BlockShape) -> Result<BlockedMatrix> {
    let shape = b.shape();
    let idx: Vec<usize> = f.iter().flat_map(|&j| shape.row_range(j)).collect();
    let sizes: Vec<usize> = f.iter().map(|&j| shape.row_sizes()[j]).collect();
    let out = BlockShape::square(target.poset().clone(), sizes)?;
    BlockedMatrix::new(out, b.matrix().select(&idx, &idx))
}

fn describe(comps: &[Component], form: &CondensedForm) -> serde_json::Value {
    serde_json::json!({
        "poset": form.poset,
        "components": comps.iter().map(|c| serde_json::json!({
            "cycle": c.cycle,
            "flow_invariant": c.invariant,
        })).collect::<Vec<_>>(),
    })
}

/// Decides flow equivalence of two SFTs.
///
/// Irreducible pairs are settled by their invariants. Otherwise both
/// matrices are reduced to their cores and condensed; every order
/// isomorphism of the component posets that matches single cycles and
/// per-component invariants is tried, stabilising both blocked forms and
/// searching for an `SL` equivalence between them.
pub fn decide_flow_equivalence(a: &SftMatrix, b: &SftMatrix, budget: &SearchBudget) -> Result<Verdict> {
    budget.validate()?;
    if is_irreducible(a) && is_irreducible(b) {
        return franks_verdict(a, b, budget);
    }
    let (ca, cb) = (flow_core(a), flow_core(b));
    if ca.size() == 0 || cb.size() == 0 {
        let report = budget.report(0, 0, false);
        return Ok(if ca.size() == cb.size() {
            Verdict::yes(
                Witness::FlowInvariants { flow_invariants: [FlowInvariant::of(&ca), FlowInvariant::of(&cb)] },
                report,
            )
        } else {
            Verdict::no(Certificate::new("core_size", ca.size(), cb.size()), report)
        });
    }
    if is_irreducible(&ca) && is_irreducible(&cb) {
        return franks_verdict(&ca, &cb, budget);
    }

    let (fa, fb) = (condense(&ca), condense(&cb));
    let (pa, pb) = (components(&ca, &fa), components(&cb, &fb));
    let alignments = fa.poset.isomorphisms_to(&fb.poset, |i, j| {
        pa[i].cycle == pb[j].cycle && (pa[i].cycle || pa[i].invariant == pb[j].invariant)
    });
    if alignments.is_empty() {
        return Ok(Verdict::no(
            Certificate::new("component_alignment", describe(&pa, &fa), describe(&pb, &fb)),
            budget.report(0, 0, false),
        ));
    }

    let left = promoted(&fa, &pa)?;
    let right_all = promoted(&fb, &pb)?;
    let mut report = budget.report(0, 0, false);
    let mut first_no: Option<Certificate> = None;
    let mut any_unknown = false;
    for f in &alignments {
        let right = realign(&right_all, f, left.shape())?;
        let n = stabilization_target(left.shape().row_sizes(), right.shape().row_sizes())?;
        let l = iota_embed(&left, &n)?;
        let r = iota_embed(&right, &n)?;
        let v = decide_blocked_equivalence(&l, &r, EquivalenceGroup::Sl, Side::Uav, budget)?;
        report.absorb(&v.budget);
        match v.status {
            VerdictStatus::Yes => {
                let (u, w) = v.pair().expect("yes carries a pair");
                let witness = Witness::FlowReduction {
                    alignment: f.iter().map(|j| j + 1).collect(),
                    sizes: n,
                    left: l.matrix().clone(),
                    right: r.matrix().clone(),
                    u: u.clone(),
                    v: w.clone(),
                };
                return Ok(Verdict::yes(witness, report));
            }
            VerdictStatus::No => {
                first_no.get_or_insert_with(|| v.certificate.clone().expect("no carries a certificate"));
            }
            VerdictStatus::Unknown => any_unknown = true,
        }
    }
    Ok(match first_no {
        Some(cert) if !any_unknown => Verdict::no(cert, report),
        _ => {
            report.exhausted = true;
            Verdict::unknown(report)
        }
    })
}

fn franks_verdict(a: &SftMatrix, b: &SftMatrix, budget: &SearchBudget) -> Result<Verdict> {
    let report = BudgetReport {
        max_depth: budget.max_depth,
        max_nodes: budget.max_nodes,
        seed: budget.seed,
        ..Default::default()
    };
    Ok(match franks_difference(a, b)? {
        None => Verdict::yes(
            Witness::FlowInvariants { flow_invariants: [FlowInvariant::of(a), FlowInvariant::of(b)] },
            report,
        ),
        Some(cert) => Verdict::no(cert, report),
    })
}
