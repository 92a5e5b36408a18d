use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::par::ExecMode;
use crate::sft::FlowInvariant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Yes,
    No,
    Unknown,
}

/// Resource limits for a semi-decision.
///
/// Identical budgets and inputs give identical verdicts. `exec` only picks
/// how frontier work is scheduled and never changes the result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_nodes: u64,
    pub seed: u64,
    #[serde(default, skip_serializing)]
    pub exec: ExecMode,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_depth: 8, max_nodes: 1_000_000, seed: 0, exec: ExecMode::default() }
    }
}

impl SearchBudget {
    pub fn new(max_depth: usize, max_nodes: u64, seed: u64) -> Result<Self> {
        let b = SearchBudget { max_depth, max_nodes, seed, exec: ExecMode::default() };
        b.validate()?;
        Ok(b)
    }

    pub fn with_exec(mut self, exec: ExecMode) -> Self {
        self.exec = exec;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 {
            return Err(Error::InvalidBudget("max_depth must be positive".into()));
        }
        if self.max_nodes == 0 {
            return Err(Error::InvalidBudget("max_nodes must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn report(&self, nodes_expanded: u64, depth_reached: usize, exhausted: bool) -> BudgetReport {
        BudgetReport {
            nodes_expanded,
            depth_reached,
            max_depth: self.max_depth,
            max_nodes: self.max_nodes,
            seed: self.seed,
            exhausted,
        }
    }
}

/// What a decision spent. `exhausted` is set when a limit stopped the work.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub nodes_expanded: u64,
    pub depth_reached: usize,
    pub max_depth: usize,
    pub max_nodes: u64,
    pub seed: u64,
    pub exhausted: bool,
}

impl BudgetReport {
    /// Adds the work of a sub-decision.
    pub(crate) fn absorb(&mut self, other: &BudgetReport) {
        self.nodes_expanded += other.nodes_expanded;
        self.depth_reached = self.depth_reached.max(other.depth_reached);
        self.exhausted |= other.exhausted;
    }
}

/// A named invariant whose values differ between the two sides, or a named
/// complete-enumeration argument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub left: serde_json::Value,
    pub right: serde_json::Value,
}

impl Certificate {
    pub fn new(name: impl Into<String>, left: impl Serialize, right: impl Serialize) -> Self {
        Certificate {
            name: name.into(),
            left: serde_json::to_value(left).expect("certificate values serialize"),
            right: serde_json::to_value(right).expect("certificate values serialize"),
        }
    }
}

/// Evidence backing a `yes`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    /// `(U, V)` for the stabilized blocked forms of two SFTs after aligning
    /// their component posets: `U * left * V = right`.
    FlowReduction {
        alignment: Vec<usize>,
        sizes: Vec<usize>,
        left: IntMatrix,
        right: IntMatrix,
        #[serde(rename = "U")]
        u: IntMatrix,
        #[serde(rename = "V")]
        v: IntMatrix,
    },
    /// Matrix pair in the requested side convention.
    Pair {
        #[serde(rename = "U")]
        u: IntMatrix,
        #[serde(rename = "V")]
        v: IntMatrix,
    },
    /// One isomorphism per quiver vertex.
    Family { maps: Vec<IntMatrix> },
    /// Matching complete invariants (irreducible SFTs).
    FlowInvariants { flow_invariants: [FlowInvariant; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub budget: BudgetReport,
}

impl Verdict {
    pub fn yes(witness: Witness, budget: BudgetReport) -> Self {
        Verdict { status: VerdictStatus::Yes, witness: Some(witness), certificate: None, budget }
    }

    pub fn no(certificate: Certificate, budget: BudgetReport) -> Self {
        Verdict { status: VerdictStatus::No, witness: None, certificate: Some(certificate), budget }
    }

    pub fn unknown(budget: BudgetReport) -> Self {
        Verdict { status: VerdictStatus::Unknown, witness: None, certificate: None, budget }
    }

    pub fn is_yes(&self) -> bool {
        self.status == VerdictStatus::Yes
    }

    pub fn is_no(&self) -> bool {
        self.status == VerdictStatus::No
    }

    pub fn is_unknown(&self) -> bool {
        self.status == VerdictStatus::Unknown
    }

    /// `(U, V)` when the witness is a matrix pair.
    pub fn pair(&self) -> Option<(&IntMatrix, &IntMatrix)> {
        match self.witness.as_ref()? {
            Witness::Pair { u, v } | Witness::FlowReduction { u, v, .. } => Some((u, v)),
            _ => None,
        }
    }
}
