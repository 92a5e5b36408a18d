use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::verdict::Certificate;
use crate::intmat::{bigint_string, cokernel, FgAbelianGroup};
use crate::par::{self, ExecMode};
use crate::poset_block::{BlockedMatrix, GroupKind};

/// Invariants of a diagonal block `A{i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockInvariant {
    pub element: usize,
    pub cokernel: FgAbelianGroup,
    /// Exact under SL, absolute value under GL. Absent for non-square blocks.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_bigint")]
    pub determinant: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexCokernel {
    pub subset: Vec<usize>,
    pub cokernel: FgAbelianGroup,
}

/// Cokernel-type invariants of a blocked matrix under the action of a
/// blocked unit group. `U A{S} V = (UAV){S}` for convex `S`, so every
/// listed group depends only on the orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub group: GroupKind,
    pub cokernel: FgAbelianGroup,
    pub blocks: Vec<BlockInvariant>,
    pub convex: Vec<ConvexCokernel>,
}

mod opt_bigint {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(d) => bigint_string::serialize(d, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigInt>, D::Error> {
        bigint_string::deserialize(d).map(Some)
    }
}

fn label(subset: &[usize]) -> String {
    let inner: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn invariant_profile(a: &BlockedMatrix, group: GroupKind) -> InvariantProfile {
    invariant_profile_with(a, group, ExecMode::default())
}

pub(crate) fn invariant_profile_with(a: &BlockedMatrix, group: GroupKind, exec: ExecMode) -> InvariantProfile {
    let shape = a.shape();
    let poset = shape.poset();
    let elements: Vec<usize> =
        (0..shape.num_blocks()).filter(|&i| shape.row_sizes()[i] > 0 || shape.col_sizes()[i] > 0).collect();
    let blocks = elements
        .iter()
        .map(|&i| {
            let d = a.diagonal_block(i);
            let determinant = if d.is_square() && !d.is_empty() {
                let det = d.determinant().expect("square block");
                Some(if group == GroupKind::Sl { det } else { det.abs() })
            } else {
                None
            };
            BlockInvariant { element: i, cokernel: cokernel(&d), determinant }
        })
        .collect();
    let subsets: Vec<Vec<usize>> = poset.convex_subsets(&elements).into_iter().filter(|s| s.len() > 1).collect();
    let convex = par::map(exec, &subsets, |s| ConvexCokernel { subset: s.clone(), cokernel: cokernel(&a.restrict(s)) });
    InvariantProfile { group, cokernel: cokernel(a.matrix()), blocks, convex }
}

impl InvariantProfile {
    /// First differing invariant, in the order whole cokernel, diagonal
    /// blocks, convex sub-blocks.
    pub fn compare(&self, other: &InvariantProfile) -> Option<Certificate> {
        if self.cokernel != other.cokernel {
            return Some(Certificate::new("cokernel", self.cokernel.to_string(), other.cokernel.to_string()));
        }
        if self.blocks.len() != other.blocks.len() {
            let l: Vec<usize> = self.blocks.iter().map(|b| b.element + 1).collect();
            let r: Vec<usize> = other.blocks.iter().map(|b| b.element + 1).collect();
            return Some(Certificate::new("support", l, r));
        }
        for (l, r) in self.blocks.iter().zip(&other.blocks) {
            if l.element != r.element {
                return Some(Certificate::new("support", l.element + 1, r.element + 1));
            }
            let name = l.element + 1;
            if l.cokernel != r.cokernel {
                return Some(Certificate::new(
                    format!("block_cokernel[{name}]"),
                    l.cokernel.to_string(),
                    r.cokernel.to_string(),
                ));
            }
            if l.determinant != r.determinant {
                let show = |d: &Option<BigInt>| d.as_ref().map(|d| d.to_string());
                return Some(Certificate::new(
                    format!("block_det[{name}]"),
                    show(&l.determinant),
                    show(&r.determinant),
                ));
            }
        }
        for (l, r) in self.convex.iter().zip(&other.convex) {
            debug_assert_eq!(l.subset, r.subset);
            if l.cokernel != r.cokernel {
                return Some(Certificate::new(
                    format!("convex_cokernel{}", label(&l.subset)),
                    l.cokernel.to_string(),
                    r.cokernel.to_string(),
                ));
            }
        }
        None
    }
}
