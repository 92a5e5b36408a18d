use serde::{Deserialize, Serialize};

use super::iso::decide_rep_isomorphism;
use super::rep::{Edge, Quiver, ZRep};
use crate::equiv::{SearchBudget, Verdict};
use crate::error::{Error, Result};
use crate::intmat::{cokernel, kernel_basis, preimage_lattice, same_lattice, FgAbelianGroup, IntMatrix, IntegerSolver};
use crate::poset_block::{BlockShape, BlockedMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Ker,
    Cok,
}

/// `ker B{S}` (free, on a kernel basis) or `cok B{S}` (on the standard
/// generators of `Z^{n_S}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KWebNode {
    pub subset: Vec<usize>,
    pub kind: NodeKind,
    pub relations: IntMatrix,
    pub group: FgAbelianGroup,
}

impl KWebNode {
    /// Label such as `cok{1,2}`, with 1-based poset elements.
    pub fn label(&self) -> String {
        let kind = match self.kind {
            NodeKind::Ker => "ker",
            NodeKind::Cok => "cok",
        };
        format!("{kind}{}", set_label(&self.subset))
    }
}

fn set_label(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowKind {
    KerIn,
    KerOut,
    Delta,
    CokIn,
    CokOut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KWebArrow {
    pub kind: ArrowKind,
    pub src: usize,
    pub dst: usize,
    /// Down-set `S1` and the convex set `S` of the splitting.
    pub lower: Vec<usize>,
    pub whole: Vec<usize>,
    pub map: IntMatrix,
}

/// Kernels and cokernels of the convex restrictions of a blocked matrix,
/// linked by the six-term sequence of every splitting
/// `0 -> ker B{S1} -> ker B{S} -> ker B{S2} -> cok B{S1} -> cok B{S} -> cok B{S2} -> 0`
/// with `S1` a down-set of `S` and `S2` its complement.
#[derive(Clone, Debug)]
pub struct KWeb {
    shape: BlockShape,
    nodes: Vec<KWebNode>,
    arrows: Vec<KWebArrow>,
}

/// JSON form of a K-web: a representation over the web quiver, plus node
/// labels in vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KWebDocument {
    pub quiver: Quiver,
    pub rep: ZRep,
    pub labels: Vec<String>,
}

impl KWeb {
    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn nodes(&self) -> &[KWebNode] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[KWebArrow] {
        &self.arrows
    }

    pub fn node(&self, kind: NodeKind, subset: &[usize]) -> Option<&KWebNode> {
        self.nodes.iter().find(|n| n.kind == kind && n.subset == subset)
    }

    pub fn to_rep(&self) -> (Quiver, ZRep) {
        let edges = self
            .arrows
            .iter()
            .map(|a| Edge {
                id: format!(
                    "{}{}{}",
                    serde_json::to_value(a.kind).expect("unit variant").as_str().expect("string"),
                    set_label(&a.lower),
                    set_label(&a.whole)
                ),
                src: a.src,
                dst: a.dst,
            })
            .collect();
        let q = Quiver::new(self.nodes.len(), edges).expect("arrows join existing nodes");
        let rep = ZRep::new(
            self.nodes.iter().map(|n| n.relations.clone()).collect(),
            self.arrows.iter().map(|a| a.map.clone()).collect(),
        );
        (q, rep)
    }

    pub fn document(&self) -> KWebDocument {
        let (quiver, rep) = self.to_rep();
        KWebDocument { quiver, rep, labels: self.nodes.iter().map(KWebNode::label).collect() }
    }

    /// Checks exactness of every six-term sequence, including injectivity
    /// at the left end and surjectivity at the right end.
    pub fn check_exactness(&self) -> Result<bool> {
        for chunk in self.arrows.chunks(5) {
            let rel = |node: usize| &self.nodes[node].relations;
            let first = &chunk[0];
            if !same_lattice(&preimage_lattice(&first.map, rel(first.dst))?, rel(first.src))? {
                return Ok(false);
            }
            for pair in chunk.windows(2) {
                let (f, g) = (&pair[0], &pair[1]);
                let image = IntMatrix::hstack(&[&f.map, rel(f.dst)])?;
                let kernel = preimage_lattice(&g.map, rel(g.dst))?;
                if !same_lattice(&image, &kernel)? {
                    return Ok(false);
                }
            }
            let last = &chunk[4];
            if !cokernel(&IntMatrix::hstack(&[&last.map, rel(last.dst)])?).is_trivial() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds the full K-web of a square blocked matrix over all convex subsets
/// of its poset.
pub fn build_kweb(b: &BlockedMatrix) -> Result<KWeb> {
    let shape = b.shape().clone();
    if !shape.is_square() {
        return Err(Error::InvalidShape("K-webs need a square shape".into()));
    }
    let all: Vec<usize> = (0..shape.num_blocks()).collect();
    let subsets = shape.poset().convex_subsets(&all);
    let mut nodes = Vec::with_capacity(2 * subsets.len());
    let mut bases = Vec::with_capacity(subsets.len());
    for s in &subsets {
        let bs = b.restrict(s);
        let k = kernel_basis(&bs);
        nodes.push(KWebNode {
            subset: s.clone(),
            kind: NodeKind::Ker,
            relations: IntMatrix::zeros(k.cols(), 0),
            group: FgAbelianGroup::free(k.cols()),
        });
        nodes.push(KWebNode { subset: s.clone(), kind: NodeKind::Cok, group: cokernel(&bs), relations: bs });
        bases.push(k);
    }
    let index = |s: &[usize]| subsets.iter().position(|x| x == s).expect("down-sets and complements are convex");
    let mut arrows = Vec::new();
    for (si, s) in subsets.iter().enumerate() {
        let bs = &nodes[2 * si + 1].relations;
        for s1 in shape.poset().splittings(s) {
            let s2: Vec<usize> = s.iter().copied().filter(|i| !s1.contains(i)).collect();
            let (i1, i2) = (index(&s1), index(&s2));
            // Coordinates of S1 and S2 inside the coordinates of S.
            let pos = |part: &[usize]| -> Vec<usize> {
                let mut out = Vec::new();
                let mut at = 0;
                for &j in s {
                    let n = shape.row_sizes()[j];
                    if part.contains(&j) {
                        out.extend(at..at + n);
                    }
                    at += n;
                }
                out
            };
            let (p1, p2) = (pos(&s1), pos(&s2));
            let ns = bs.rows();
            let incl = selection(ns, &p1);
            let proj = selection(ns, &p2).transpose();
            let (k, k1, k2) = (&bases[si], &bases[i1], &bases[i2]);
            let ker_in = IntegerSolver::new(k).solve_matrix(&incl.checked_mul(k1)?)?.expect("kernel inclusion");
            let ker_out = IntegerSolver::new(k2).solve_matrix(&proj.checked_mul(k)?)?.expect("kernel projection");
            let x = bs.select(&p1, &p2);
            let delta = x.checked_mul(k2)?;
            let mut push = |kind, src: usize, dst: usize, map: IntMatrix| {
                arrows.push(KWebArrow { kind, src, dst, lower: s1.clone(), whole: s.clone(), map })
            };
            push(ArrowKind::KerIn, 2 * i1, 2 * si, ker_in);
            push(ArrowKind::KerOut, 2 * si, 2 * i2, ker_out);
            push(ArrowKind::Delta, 2 * i2, 2 * i1 + 1, delta);
            push(ArrowKind::CokIn, 2 * i1 + 1, 2 * si + 1, incl);
            push(ArrowKind::CokOut, 2 * si + 1, 2 * i2 + 1, proj);
        }
    }
    let web = KWeb { shape, nodes, arrows };
    debug_assert!(web.check_exactness()?);
    Ok(web)
}

/// `n x |pos|` matrix sending basis vector `a` to `e_{pos[a]}`.
fn selection(n: usize, pos: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, pos.len());
    for (a, &p) in pos.iter().enumerate() {
        m.set(p, a, 1);
    }
    m
}

/// Isomorphism of two K-webs over the same shape, node for node.
pub fn decide_kweb_isomorphism(w1: &KWeb, w2: &KWeb, budget: &SearchBudget) -> Result<Verdict> {
    if w1.shape != w2.shape {
        return Err(Error::InvalidShape("K-webs have different shapes".into()));
    }
    let (q, r1) = w1.to_rep();
    let (_, r2) = w2.to_rep();
    decide_rep_isomorphism(&r1, &r2, &q, budget)
}
