//! Shifts of finite type and flow equivalence.
//!
//! The Bowen-Franks group is `cok(I - A)` and the Parry-Sullivan number is
//! `det(I - A)`. For irreducible matrices these decide flow equivalence
//! (Franks), except that a single cycle is only equivalent to another single
//! cycle. Reducible matrices go through the blocked reduction in
//! [`decide_flow_equivalence`].

mod condense;
mod flow;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{bigint_string, cokernel, identity_minus, FgAbelianGroup, IntMatrix};

pub use condense::{condense, flow_core, CondensedForm};
pub use flow::{decide_flow_equivalence, stabilization_target};

/// Square adjacency matrix with nonnegative entries (edge multiplicities).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SftMatrix(IntMatrix);

impl SftMatrix {
    pub fn new(a: IntMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidSft(format!("matrix is {}x{}, not square", a.rows(), a.cols())));
        }
        if a.entries().iter().any(Signed::is_negative) {
            return Err(Error::InvalidSft("entries must be nonnegative".into()));
        }
        Ok(SftMatrix(a))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub(crate) fn graph(&self) -> DiGraph<(), ()> {
        let n = self.size();
        let mut g = DiGraph::with_capacity(n, 0);
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for i in 0..n {
            for j in 0..n {
                if !self.0.get(i, j).is_zero() {
                    g.add_edge(nodes[i], nodes[j], ());
                }
            }
        }
        g
    }
}

impl<'de> Deserialize<'de> for SftMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        SftMatrix::new(IntMatrix::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// `(cok(I - A), det(I - A))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowInvariant {
    pub bowen_franks: FgAbelianGroup,
    #[serde(with = "bigint_string")]
    pub parry_sullivan: BigInt,
}

impl FlowInvariant {
    pub fn of(a: &SftMatrix) -> Self {
        FlowInvariant { bowen_franks: bowen_franks(a), parry_sullivan: parry_sullivan(a) }
    }
}

pub fn bowen_franks(a: &SftMatrix) -> FgAbelianGroup {
    cokernel(&identity_minus(&a.0).expect("square"))
}

pub fn parry_sullivan(a: &SftMatrix) -> BigInt {
    identity_minus(&a.0).expect("square").determinant().expect("square")
}

/// Strongly connected with at least one edge. The empty matrix is not
/// irreducible.
pub fn is_irreducible(a: &SftMatrix) -> bool {
    match a.size() {
        0 => false,
        1 => !a.0.get(0, 0).is_zero(),
        _ => tarjan_scc(&a.graph()).len() == 1,
    }
}

/// Irreducible with every row sum equal to one: the graph is one cycle and
/// the shift is a single finite orbit.
pub fn is_single_cycle(a: &SftMatrix) -> bool {
    is_irreducible(a) && (0..a.size()).all(|i| a.0.row(i).iter().sum::<BigInt>().is_one())
}

/// Franks' decision for irreducible SFTs, with single cycles carved out.
pub fn decide_flow_equivalence_irreducible(a: &SftMatrix, b: &SftMatrix) -> Result<bool> {
    Ok(franks_difference(a, b)?.is_none())
}

/// `None` when equivalent, otherwise the name and values of the first
/// differing invariant.
pub(crate) fn franks_difference(a: &SftMatrix, b: &SftMatrix) -> Result<Option<crate::Certificate>> {
    use crate::Certificate;
    if !is_irreducible(a) || !is_irreducible(b) {
        return Err(Error::Reducible);
    }
    let (ca, cb) = (is_single_cycle(a), is_single_cycle(b));
    if ca || cb {
        return Ok((ca != cb).then(|| Certificate::new("single_cycle", ca, cb)));
    }
    let (ia, ib) = (FlowInvariant::of(a), FlowInvariant::of(b));
    if ia.parry_sullivan != ib.parry_sullivan {
        return Ok(Some(Certificate::new(
            "parry_sullivan",
            ia.parry_sullivan.to_string(),
            ib.parry_sullivan.to_string(),
        )));
    }
    if ia.bowen_franks != ib.bowen_franks {
        return Ok(Some(Certificate::new("bowen_franks", ia.bowen_franks.to_string(), ib.bowen_franks.to_string())));
    }
    Ok(None)
}
