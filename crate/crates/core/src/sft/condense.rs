use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use serde::Serialize;

use super::SftMatrix;
use crate::intmat::{identity_minus, IntMatrix};
use crate::poset_block::{BlockShape, BlockedMatrix, Poset};

/// Strongly connected components of an SFT graph in blocked form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondensedForm {
    pub poset: Poset,
    pub sizes: Vec<usize>,
    /// Original vertices of each component, ascending.
    pub components: Vec<Vec<usize>>,
    /// `permutation[k]` is the original vertex placed at position `k`.
    pub permutation: Vec<usize>,
    /// `P (I - A) P^T`, blocked over the component poset.
    pub blocked: BlockedMatrix,
    /// Component is a single vertex without a loop.
    pub trivial_flags: Vec<bool>,
}

impl CondensedForm {
    /// The component block of `A` itself (not of `I - A`).
    pub fn component_matrix(&self, a: &SftMatrix, i: usize) -> SftMatrix {
        let idx = &self.components[i];
        SftMatrix::new(a.matrix().select(idx, idx)).expect("principal submatrix")
    }
}

/// Condenses `A` into components ordered topologically along edges, ties
/// broken by least original vertex; component `i` precedes `j` in the poset
/// when `i` reaches `j`.
pub fn condense(a: &SftMatrix) -> CondensedForm {
    let n = a.size();
    let am = a.matrix();
    if n == 0 {
        return CondensedForm {
            poset: Poset::antichain(0),
            sizes: Vec::new(),
            components: Vec::new(),
            permutation: Vec::new(),
            blocked: BlockedMatrix::new(BlockShape::empty(), IntMatrix::zeros(0, 0)).expect("empty"),
            trivial_flags: Vec::new(),
        };
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&a.graph())
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort_by_key(|c| c[0]);
    let k = comps.len();
    let mut comp_of = vec![0; n];
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = ci;
        }
    }
    let mut succ = vec![Vec::new(); k];
    let mut indeg = vec![0usize; k];
    for u in 0..n {
        for v in 0..n {
            let (cu, cv) = (comp_of[u], comp_of[v]);
            if cu != cv && !am.get(u, v).is_zero() && !succ[cu].contains(&cv) {
                succ[cu].push(cv);
                indeg[cv] += 1;
            }
        }
    }
    // Kahn's algorithm; components are indexed by least vertex, so a
    // min-heap on the index gives the stable order.
    let mut heap: BinaryHeap<Reverse<usize>> = (0..k).filter(|&c| indeg[c] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse(c)) = heap.pop() {
        order.push(c);
        for &d in &succ[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(Reverse(d));
            }
        }
    }
    let mut rank = vec![0; k];
    for (pos, &c) in order.iter().enumerate() {
        rank[c] = pos;
    }
    let pairs: Vec<(usize, usize)> =
        (0..k).flat_map(|c| succ[c].iter().map(|&d| (rank[c], rank[d])).collect::<Vec<_>>()).collect();
    let poset = Poset::new(k, &pairs).expect("topological order normalises the reachability order");
    let components: Vec<Vec<usize>> = order.iter().map(|&c| comps[c].clone()).collect();
    let sizes: Vec<usize> = components.iter().map(Vec::len).collect();
    let permutation: Vec<usize> = components.iter().flatten().copied().collect();
    let b = identity_minus(am).expect("square").select(&permutation, &permutation);
    let shape = BlockShape::square(poset.clone(), sizes.clone()).expect("nonempty components");
    let blocked = BlockedMatrix::new(shape, b).expect("edges respect reachability");
    let trivial_flags = components.iter().map(|c| c.len() == 1 && am.get(c[0], c[0]).is_zero()).collect();
    CondensedForm { poset, sizes, components, permutation, blocked, trivial_flags }
}

/// Repeatedly removes the least vertex without a loop, replacing each path
/// `u -> v -> w` through it by an edge `u -> w`. Vertex elimination is a flow
/// equivalence, and in the result every vertex carries a loop, so each
/// component is either a single loop of weight one or nontrivial.
pub fn flow_core(a: &SftMatrix) -> SftMatrix {
    let mut m = a.matrix().clone();
    while let Some(v) = (0..m.rows()).find(|&v| m.get(v, v).is_zero()) {
        let keep: Vec<usize> = (0..m.rows()).filter(|&u| u != v).collect();
        let mut next = m.select(&keep, &keep);
        for (ui, &u) in keep.iter().enumerate() {
            let into_v = m.get(u, v);
            if into_v.is_zero() {
                continue;
            }
            for (wi, &w) in keep.iter().enumerate() {
                let out_v = m.get(v, w);
                if !out_v.is_zero() {
                    let add: BigInt = into_v * out_v;
                    *next.get_mut(ui, wi) += add;
                }
            }
        }
        m = next;
    }
    SftMatrix::new(m).expect("elimination keeps entries nonnegative")
}
