//! Meet-in-the-middle search over words in elementary moves.
//!
//! States are matrices `L X R` reached from a root `X` by left and right
//! moves. They are stored only as canonical byte keys; a node keeps its
//! parent and the move that produced it, so words are rebuilt on demand.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;

use super::verdict::SearchBudget;
use crate::intmat::IntMatrix;
use crate::par;
use crate::poset_block::ElementaryMove;

const ROOT: u32 = u32::MAX;

/// Left moves act on rows (size `m`), right moves on columns (size `n`).
pub(crate) struct MoveSet {
    pub left: Vec<ElementaryMove>,
    pub right: Vec<ElementaryMove>,
    pub m: usize,
    pub n: usize,
}

impl MoveSet {
    fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    fn apply(&self, index: usize, x: &mut IntMatrix) {
        if index < self.left.len() {
            self.left[index].apply_left(x)
        } else {
            self.right[index - self.left.len()].apply_right(x)
        }
    }

    /// `(L, R)` with `word(X) = L X R`.
    fn word(&self, path: &[u32]) -> (IntMatrix, IntMatrix) {
        let mut l = IntMatrix::identity(self.m);
        let mut r = IntMatrix::identity(self.n);
        for &mi in path {
            let mi = mi as usize;
            if mi < self.left.len() {
                self.left[mi].apply_left(&mut l)
            } else {
                self.right[mi - self.left.len()].apply_right(&mut r)
            }
        }
        (l, r)
    }

    /// `(L^-1, R^-1)` for the same word.
    fn word_inverse(&self, path: &[u32]) -> (IntMatrix, IntMatrix) {
        let mut l = IntMatrix::identity(self.m);
        let mut r = IntMatrix::identity(self.n);
        for &mi in path {
            let mi = mi as usize;
            if mi < self.left.len() {
                self.left[mi].inverse().apply_right(&mut l)
            } else {
                self.right[mi - self.left.len()].inverse().apply_left(&mut r)
            }
        }
        (l, r)
    }
}

struct Tree {
    map: HashMap<Arc<[u8]>, u32>,
    nodes: Vec<(u32, u32)>,
    frontier: Vec<(u32, Arc<[u8]>)>,
    depth: usize,
}

impl Tree {
    fn new(root: &IntMatrix) -> Self {
        let mut key = Vec::new();
        root.encode_key(&mut key);
        let key: Arc<[u8]> = key.into();
        let mut map = HashMap::new();
        map.insert(key.clone(), 0);
        Tree { map, nodes: vec![(ROOT, ROOT)], frontier: vec![(0, key)], depth: 0 }
    }

    fn path(&self, mut idx: u32) -> Vec<u32> {
        let mut out = Vec::new();
        while self.nodes[idx as usize].0 != ROOT {
            let (parent, mv) = self.nodes[idx as usize];
            out.push(mv);
            idx = parent;
        }
        out.reverse();
        out
    }

    /// All one-move successors of the frontier, in frontier-then-move order.
    fn successors(&self, moves: &MoveSet, budget: &SearchBudget, rows: usize, cols: usize) -> Vec<(u32, u32, Vec<u8>)> {
        par::flat_map(budget.exec, &self.frontier, |(idx, key)| {
            let x = IntMatrix::decode_key(rows, cols, key);
            (0..moves.len())
                .map(|mi| {
                    let mut y = x.clone();
                    moves.apply(mi, &mut y);
                    let mut k = Vec::with_capacity(key.len() + 4);
                    y.encode_key(&mut k);
                    (*idx, mi as u32, k)
                })
                .collect::<Vec<_>>()
        })
    }
}

pub(crate) enum Outcome {
    /// `U A V = B`.
    Found(IntMatrix, IntMatrix),
    /// One orbit was enumerated completely without reaching the other root.
    Exhausted {
        orbit_size: usize,
    },
    Budget,
}

pub(crate) struct Run {
    pub outcome: Outcome,
    pub nodes: u64,
    pub depth: usize,
}

/// Total order used to pick reproducible witnesses: entrywise over `U` then
/// `V`, comparing `|e|` first and placing `e` before `-e`.
pub(crate) fn witness_cmp(a: (&IntMatrix, &IntMatrix), b: (&IntMatrix, &IntMatrix)) -> Ordering {
    let key = |e: &BigInt| (e.abs(), e.is_negative());
    let ea = a.0.entries().iter().chain(a.1.entries());
    let eb = b.0.entries().iter().chain(b.1.entries());
    for (x, y) in ea.zip(eb) {
        match key(x).cmp(&key(y)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Searches for `(U, V)` in the groups generated by `moves` with
/// `U A V = B`.
pub(crate) fn bidirectional(a: &IntMatrix, b: &IntMatrix, moves: &MoveSet, budget: &SearchBudget) -> Run {
    let (rows, cols) = a.shape();
    if a == b {
        return Run {
            outcome: Outcome::Found(IntMatrix::identity(rows), IntMatrix::identity(cols)),
            nodes: 1,
            depth: 0,
        };
    }
    let mut fwd = Tree::new(a);
    let mut bwd = Tree::new(b);
    let mut nodes: u64 = 2;
    loop {
        if fwd.depth + bwd.depth >= budget.max_depth || nodes >= budget.max_nodes {
            return Run { outcome: Outcome::Budget, nodes, depth: fwd.depth + bwd.depth };
        }
        let forward = fwd.frontier.len() <= bwd.frontier.len();
        let (side, other) = if forward { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let children = side.successors(moves, budget, rows, cols);
        let mut frontier = Vec::new();
        let mut meetings = Vec::new();
        let mut stopped = false;
        for (parent, mi, key) in children {
            if side.map.contains_key(key.as_slice()) {
                continue;
            }
            let id = side.nodes.len() as u32;
            side.nodes.push((parent, mi));
            let key: Arc<[u8]> = key.into();
            side.map.insert(key.clone(), id);
            nodes += 1;
            if let Some(&o) = other.map.get(&key) {
                meetings.push((id, o));
            }
            frontier.push((id, key));
            if nodes >= budget.max_nodes {
                stopped = true;
                break;
            }
        }
        side.frontier = frontier;
        side.depth += 1;
        let depth = fwd.depth + bwd.depth;
        if !meetings.is_empty() {
            let mut best: Option<(IntMatrix, IntMatrix)> = None;
            for (id, o) in meetings {
                let (fi, bi) = if forward { (id, o) } else { (o, id) };
                let (lf, rf) = moves.word(&fwd.path(fi));
                let (lb_inv, rb_inv) = moves.word_inverse(&bwd.path(bi));
                let u = &lb_inv * &lf;
                let v = &rf * &rb_inv;
                debug_assert_eq!(&(&u * a) * &v, *b);
                if best.as_ref().is_none_or(|w| witness_cmp((&u, &v), (&w.0, &w.1)) == Ordering::Less) {
                    best = Some((u, v));
                }
            }
            let (u, v) = best.expect("nonempty meetings");
            return Run { outcome: Outcome::Found(u, v), nodes, depth };
        }
        if stopped {
            return Run { outcome: Outcome::Budget, nodes, depth };
        }
        let side = if forward { &fwd } else { &bwd };
        if side.frontier.is_empty() {
            return Run { outcome: Outcome::Exhausted { orbit_size: side.nodes.len() }, nodes, depth };
        }
    }
}

/// Nontrivial pairs `(S, T)` with `S B T = B`, read off from collisions in a
/// breadth-first search rooted at `B`. At most `limit` distinct pairs are
/// returned, in discovery order.
pub(crate) fn stabilizer_pairs(
    b: &IntMatrix,
    moves: &MoveSet,
    budget: &SearchBudget,
    limit: usize,
) -> (Vec<(IntMatrix, IntMatrix)>, u64, usize) {
    let (rows, cols) = b.shape();
    let mut tree = Tree::new(b);
    let mut nodes: u64 = 1;
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut pairs = Vec::new();
    while tree.depth < budget.max_depth && nodes < budget.max_nodes && !tree.frontier.is_empty() {
        let children = tree.successors(moves, budget, rows, cols);
        let mut frontier = Vec::new();
        for (parent, mi, key) in children {
            if let Some(&existing) = tree.map.get(key.as_slice()) {
                // Collisions cost two word evaluations; they count as work.
                nodes += 1;
                if nodes >= budget.max_nodes {
                    break;
                }
                let mut path2 = tree.path(parent);
                path2.push(mi);
                let (l1, r1) = moves.word(&tree.path(existing));
                let (l2_inv, r2_inv) = moves.word_inverse(&path2);
                let s = &l2_inv * &l1;
                let t = &r1 * &r2_inv;
                if s.is_identity() && t.is_identity() {
                    continue;
                }
                let mut k = Vec::new();
                s.encode_key(&mut k);
                t.encode_key(&mut k);
                if seen.insert(k) {
                    debug_assert_eq!(&(&s * b) * &t, *b);
                    pairs.push((s, t));
                    if pairs.len() >= limit {
                        return (pairs, nodes, tree.depth + 1);
                    }
                }
                continue;
            }
            let id = tree.nodes.len() as u32;
            tree.nodes.push((parent, mi));
            let key: Arc<[u8]> = key.into();
            tree.map.insert(key.clone(), id);
            frontier.push((id, key));
            nodes += 1;
            if nodes >= budget.max_nodes {
                break;
            }
        }
        tree.frontier = frontier;
        tree.depth += 1;
    }
    (pairs, nodes, tree.depth)
}
