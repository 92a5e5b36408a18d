use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::bigint_vec_string;
use super::{smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^r + Z/d_1 + ... + Z/d_k` with
/// `2 <= d_1 | d_2 | ... | d_k`.
///
/// Equality compares isomorphism classes only; the optional presentation is
/// carried for reference and ignored by `==`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    #[serde(with = "bigint_vec_string")]
    pub torsion: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<IntMatrix>,
}

impl FgAbelianGroup {
    /// Validates the invariant-factor chain.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        let two = BigInt::from(2);
        if torsion.iter().any(|d| *d < two) {
            return Err(Error::Parse("invariant factors must be at least 2".into()));
        }
        if !torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])) {
            return Err(Error::Parse("invariant factors must form a divisibility chain".into()));
        }
        Ok(FgAbelianGroup { free_rank, torsion, presentation: None })
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { free_rank: 0, torsion: Vec::new(), presentation: None }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, torsion: Vec::new(), presentation: None }
    }

    /// `Z/d` for `d >= 1` (`Z/1` is trivial), `Z` for `d == 0`.
    pub fn cyclic(d: i64) -> Self {
        match d.unsigned_abs() {
            0 => Self::free(1),
            1 => Self::trivial(),
            n => FgAbelianGroup { free_rank: 0, torsion: vec![BigInt::from(n)], presentation: None },
        }
    }

    /// Group with the given finite cyclic factors (any order, any values),
    /// normalised to invariant factors.
    pub fn from_cyclic_factors(free_rank: usize, factors: &[i64]) -> Self {
        let diag = IntMatrix::diagonal(factors);
        let mut g = cokernel(&diag);
        g.free_rank += free_rank;
        g.presentation = None;
        g
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, or `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn is_isomorphic(&self, other: &FgAbelianGroup) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    /// Drops the presentation, keeping only the isomorphism class.
    pub fn class(&self) -> FgAbelianGroup {
        FgAbelianGroup { free_rank: self.free_rank, torsion: self.torsion.clone(), presentation: None }
    }

    /// Number of generators in the invariant-factor decomposition.
    pub fn min_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

impl PartialEq for FgAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.is_isomorphic(other)
    }
}

impl Eq for FgAbelianGroup {}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z^rows / im_Z(A)`, with `A` kept as the presentation.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion = diag.into_iter().filter(|d| !d.is_zero() && !d.abs().is_one()).collect();
    FgAbelianGroup { free_rank: a.rows() - rank, torsion, presentation: Some(a.clone()) }
}
