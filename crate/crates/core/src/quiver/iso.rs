use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::canon::{columns, finite_isomorphisms, free_block_unimodular, torsion_candidates, Canon};
use super::rep::{is_isomorphism, Quiver, ZRep};
use crate::equiv::{Certificate, SearchBudget, Verdict, Witness};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::par;

/// Largest torsion subgroup whose elements the search will enumerate.
pub const TORSION_POOL_CAP: u64 = 4096;

/// Largest number of candidate images tried for a single free generator.
const FREE_CANDIDATE_CAP: u64 = 1 << 16;

/// All isomorphisms `Z^g1 / im r1 -> Z^g2 / im r2` of finite groups, as
/// generator-level matrices. Groups above order 64 are refused.
pub fn finite_group_isomorphisms(r1: &IntMatrix, r2: &IntMatrix) -> Result<Vec<IntMatrix>> {
    let (c1, c2) = (Canon::new(r1), Canon::new(r2));
    Ok(finite_isomorphisms(&c1, &c2)?.iter().map(|m| c2.hom_to_generators(&c1, m)).collect())
}

/// Decides whether two representations of `q` are isomorphic.
///
/// Vertex groups and the kernel, image and cokernel of every edge map are
/// compared first. When every vertex group is finite, all families of
/// vertex isomorphisms are enumerated, so the answer is exact unless the
/// node budget runs out. With free summands, families whose free blocks
/// have entries up to `max_depth` in absolute value are searched, widening
/// the bound step by step; failure there is `Unknown`.
pub fn decide_rep_isomorphism(rep1: &ZRep, rep2: &ZRep, q: &Quiver, budget: &SearchBudget) -> Result<Verdict> {
    budget.validate()?;
    rep1.validate(q)?;
    rep2.validate(q)?;
    if let Some(cert) = invariant_difference(rep1, rep2, q)? {
        return Ok(Verdict::no(cert, budget.report(0, 0, false)));
    }
    let plan = Plan::new(rep1, rep2, q);
    if plan.pools.iter().any(|p| p.is_none()) {
        return Ok(Verdict::unknown(budget.report(0, 0, true)));
    }
    let finite = plan.c1.iter().all(|c| c.free_rank() == 0);
    let (mut nodes, mut depth) = (0u64, 0usize);
    let bounds: Vec<u64> = if finite { vec![0] } else { (1..=budget.max_depth.max(1) as u64).collect() };
    for bound in bounds {
        if !finite && plan.free_candidates(bound) > FREE_CANDIDATE_CAP {
            break;
        }
        let (step, used, reached) = plan.run(bound, budget.max_nodes - nodes, budget.exec);
        nodes += used;
        depth = depth.max(reached);
        match step {
            Step::Found(ms) => {
                let maps = plan.to_generators(&ms);
                if !is_isomorphism(&maps, rep1, rep2, q)? {
                    return Err(Error::WitnessRejected("representation isomorphism failed verification".into()));
                }
                return Ok(Verdict::yes(Witness::Family { maps }, budget.report(nodes, depth, false)));
            }
            Step::Budget => return Ok(Verdict::unknown(budget.report(nodes, depth, true))),
            Step::Exhausted if finite => {
                let groups = |r: &ZRep| (0..q.vertices()).map(|v| r.vertex_group(v).to_string()).collect::<Vec<_>>();
                return Ok(Verdict::no(
                    Certificate::new("isomorphism_enumeration_exhausted", groups(rep1), groups(rep2)),
                    budget.report(nodes, depth, false),
                ));
            }
            Step::Exhausted => {}
        }
        if nodes >= budget.max_nodes {
            break;
        }
    }
    Ok(Verdict::unknown(budget.report(nodes, depth, true)))
}

fn invariant_difference(rep1: &ZRep, rep2: &ZRep, q: &Quiver) -> Result<Option<Certificate>> {
    for v in 0..q.vertices() {
        let (a, b) = (rep1.vertex_group(v), rep2.vertex_group(v));
        if a != b {
            return Ok(Some(Certificate::new(format!("vertex_group[{}]", v + 1), a.to_string(), b.to_string())));
        }
    }
    for (k, e) in q.edges().iter().enumerate() {
        let (x, y) = (rep1.edge_invariants(q, k)?, rep2.edge_invariants(q, k)?);
        for ((name, a), b) in ["edge_kernel", "edge_image", "edge_cokernel"].iter().zip(&x).zip(&y) {
            if a != b {
                return Ok(Some(Certificate::new(format!("{name}[{}]", e.id), a.to_string(), b.to_string())));
            }
        }
    }
    Ok(None)
}

enum Step {
    Found(Vec<IntMatrix>),
    Exhausted,
    Budget,
}

struct Counter {
    nodes: u64,
    limit: u64,
    depth: usize,
}

/// Search over families of vertex isomorphisms in Smith coordinates, one
/// image column at a time. Torsion columns come first at each vertex.
struct Plan {
    c1: Vec<Canon>,
    c2: Vec<Canon>,
    /// Torsion elements of each target group; `None` above the cap.
    pools: Vec<Option<Vec<Vec<BigInt>>>>,
    slots: Vec<(usize, usize)>,
    /// Edges checked once vertex `v` is complete.
    checks: Vec<Vec<usize>>,
    ends: Vec<(usize, usize)>,
    phi1: Vec<IntMatrix>,
    phi2: Vec<IntMatrix>,
}

impl Plan {
    fn new(rep1: &ZRep, rep2: &ZRep, q: &Quiver) -> Self {
        let c1: Vec<Canon> = rep1.groups.iter().map(Canon::new).collect();
        let c2: Vec<Canon> = rep2.groups.iter().map(Canon::new).collect();
        let pools = c2
            .iter()
            .map(|c| {
                let t: BigInt = c.moduli[..c.torsion_dim()].iter().product();
                (t <= BigInt::from(TORSION_POOL_CAP)).then(|| c.torsion_elements())
            })
            .collect();
        let slots = (0..c1.len()).flat_map(|v| (0..c1[v].dim()).map(move |j| (v, j))).collect();
        let mut checks = vec![Vec::new(); c1.len()];
        let ends: Vec<(usize, usize)> = q.edges().iter().map(|e| (e.src, e.dst)).collect();
        for (k, &(s, t)) in ends.iter().enumerate() {
            if c1[s].dim() > 0 && c1[t].dim() > 0 {
                checks[s.max(t)].push(k);
            }
        }
        let hat = |c: &[Canon], maps: &[IntMatrix]| -> Vec<IntMatrix> {
            ends.iter().zip(maps).map(|(&(s, t), m)| c[t].hom_from(&c[s], m)).collect()
        };
        let phi1 = hat(&c1, &rep1.maps);
        let phi2 = hat(&c2, &rep2.maps);
        Plan { c1, c2, pools, slots, checks, ends, phi1, phi2 }
    }

    fn pool(&self, v: usize) -> &[Vec<BigInt>] {
        self.pools[v].as_deref().expect("pools checked before searching")
    }

    /// Upper bound on candidates for one free column at the given bound.
    fn free_candidates(&self, bound: u64) -> u64 {
        (0..self.c1.len())
            .filter(|&v| self.c1[v].free_rank() > 0)
            .map(|v| {
                let side = (2 * bound + 1).saturating_pow(self.c1[v].free_rank() as u32);
                side.saturating_mul(self.pool(v).len() as u64)
            })
            .max()
            .unwrap_or(0)
    }

    fn candidates(&self, v: usize, col: usize, chosen: &[Vec<BigInt>], bound: u64) -> Vec<Vec<BigInt>> {
        let (a, b) = (&self.c1[v], &self.c2[v]);
        if col < a.torsion_dim() {
            return torsion_candidates(a, b, self.pool(v), chosen);
        }
        let t = b.torsion_dim();
        let mut out = Vec::new();
        for free in primitive_vectors(b.free_rank(), bound) {
            for p in self.pool(v) {
                let mut x = p.clone();
                x[t..].clone_from_slice(&free);
                out.push(x);
            }
        }
        out
    }

    fn complete_ok(&self, v: usize, cols: &[Vec<Vec<BigInt>>]) -> bool {
        let m = |u: usize| columns(self.c2[u].dim(), &cols[u]);
        if self.c1[v].free_rank() > 0 && !free_block_unimodular(&self.c1[v], &self.c2[v], &m(v)) {
            return false;
        }
        self.checks[v].iter().all(|&k| {
            let (s, t) = self.ends[k];
            let lhs = &m(t) * &self.phi1[k];
            let rhs = &self.phi2[k] * &m(s);
            self.c2[t].is_zero(&(&lhs - &rhs))
        })
    }

    /// Assigns slot `k` to `cand`; false when a completed vertex fails.
    fn place(&self, k: usize, cand: Vec<BigInt>, cols: &mut [Vec<Vec<BigInt>>]) -> bool {
        let (v, col) = self.slots[k];
        cols[v].push(cand);
        col + 1 < self.c1[v].dim() || self.complete_ok(v, cols)
    }

    fn dfs(&self, k: usize, cols: &mut Vec<Vec<Vec<BigInt>>>, bound: u64, ctr: &mut Counter) -> Step {
        if k == self.slots.len() {
            return Step::Found(self.matrices(cols));
        }
        let (v, col) = self.slots[k];
        for cand in self.candidates(v, col, &cols[v], bound) {
            if ctr.nodes >= ctr.limit {
                return Step::Budget;
            }
            ctr.nodes += 1;
            ctr.depth = ctr.depth.max(k + 1);
            if self.place(k, cand, cols) {
                match self.dfs(k + 1, cols, bound, ctr) {
                    Step::Exhausted => {}
                    done => return done,
                }
            }
            cols[v].pop();
        }
        Step::Exhausted
    }

    /// Splits the first slot across workers and reports the first success
    /// in candidate order.
    fn run(&self, bound: u64, limit: u64, exec: crate::ExecMode) -> (Step, u64, usize) {
        let empty = vec![Vec::new(); self.c1.len()];
        if self.slots.is_empty() {
            return (Step::Found(self.matrices(&empty)), 0, 0);
        }
        let (v, col) = self.slots[0];
        let first = self.candidates(v, col, &[], bound);
        if first.is_empty() || limit == 0 {
            return (if first.is_empty() { Step::Exhausted } else { Step::Budget }, 0, 0);
        }
        let share = limit.div_ceil(first.len() as u64);
        let results = par::map(exec, &first, |cand| {
            let mut cols = empty.clone();
            let mut ctr = Counter { nodes: 1, limit: share, depth: 1 };
            let step = if self.place(0, cand.clone(), &mut cols) {
                self.dfs(1, &mut cols, bound, &mut ctr)
            } else {
                Step::Exhausted
            };
            (step, ctr.nodes, ctr.depth)
        });
        let nodes = results.iter().map(|r| r.1).sum();
        let depth = results.iter().map(|r| r.2).max().unwrap_or(0);
        let mut budget_hit = false;
        for (step, _, _) in results {
            match step {
                Step::Found(ms) => return (Step::Found(ms), nodes, depth),
                Step::Budget => budget_hit = true,
                Step::Exhausted => {}
            }
        }
        (if budget_hit { Step::Budget } else { Step::Exhausted }, nodes, depth)
    }

    fn matrices(&self, cols: &[Vec<Vec<BigInt>>]) -> Vec<IntMatrix> {
        cols.iter().enumerate().map(|(v, c)| columns(self.c2[v].dim(), c)).collect()
    }

    fn to_generators(&self, ms: &[IntMatrix]) -> Vec<IntMatrix> {
        ms.iter().enumerate().map(|(v, m)| self.c2[v].hom_to_generators(&self.c1[v], m)).collect()
    }
}

/// Integer vectors of length `r` with entries in `[-bound, bound]` and gcd 1,
/// ordered by the entry sequence `0, 1, -1, 2, -2, ...`.
fn primitive_vectors(r: usize, bound: u64) -> Vec<Vec<BigInt>> {
    let values: Vec<BigInt> = std::iter::once(BigInt::zero())
        .chain((1..=bound as i64).flat_map(|k| [BigInt::from(k), BigInt::from(-k)]))
        .collect();
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    out.retain(|x| x.iter().fold(BigInt::zero(), |g, e| g.gcd(e)).is_one());
    out
}
