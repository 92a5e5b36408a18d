use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::poset::{Poset, PosetDoc};
use crate::error::{Error, Result};

/// Block structure `M_{P,m,n}`: poset `P` with row sizes `m` and column
/// sizes `n`. Sizes may be zero (empty block rows/columns), but at least one
/// row block and one column block must be nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockShape {
    poset: Poset,
    m: Vec<usize>,
    n: Vec<usize>,
    row_offsets: Vec<usize>,
    col_offsets: Vec<usize>,
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

impl BlockShape {
    pub fn new(poset: Poset, m: Vec<usize>, n: Vec<usize>) -> Result<Self> {
        let shape = Self::new_unchecked(poset, m, n)?;
        if shape.row_blocks().is_empty() || shape.col_blocks().is_empty() {
            return Err(Error::InvalidShape("some row block and some column block must be nonempty".into()));
        }
        Ok(shape)
    }

    /// Square shape `M_{P,n}`.
    pub fn square(poset: Poset, n: Vec<usize>) -> Result<Self> {
        Self::new(poset, n.clone(), n)
    }

    /// The shape with no blocks at all. Only the condensation of an empty
    /// graph produces it.
    pub fn empty() -> Self {
        Self::new_unchecked(Poset::antichain(0), Vec::new(), Vec::new()).expect("empty shape")
    }

    fn new_unchecked(poset: Poset, m: Vec<usize>, n: Vec<usize>) -> Result<Self> {
        if m.len() != poset.size() || n.len() != poset.size() {
            return Err(Error::InvalidShape(format!(
                "size vectors have lengths {} and {} for a poset of size {}",
                m.len(),
                n.len(),
                poset.size()
            )));
        }
        let row_offsets = offsets(&m);
        let col_offsets = offsets(&n);
        Ok(BlockShape { poset, m, n, row_offsets, col_offsets })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn row_sizes(&self) -> &[usize] {
        &self.m
    }

    pub fn col_sizes(&self) -> &[usize] {
        &self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.poset.size()
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    pub fn is_empty(&self) -> bool {
        self.total_rows() == 0 && self.total_cols() == 0
    }

    pub fn total_rows(&self) -> usize {
        *self.row_offsets.last().unwrap()
    }

    pub fn total_cols(&self) -> usize {
        *self.col_offsets.last().unwrap()
    }

    pub fn row_range(&self, i: usize) -> Range<usize> {
        self.row_offsets[i]..self.row_offsets[i + 1]
    }

    pub fn col_range(&self, j: usize) -> Range<usize> {
        self.col_offsets[j]..self.col_offsets[j + 1]
    }

    /// `I = {i : m_i > 0}`.
    pub fn row_blocks(&self) -> Vec<usize> {
        (0..self.m.len()).filter(|&i| self.m[i] > 0).collect()
    }

    /// `J = {j : n_j > 0}`.
    pub fn col_blocks(&self) -> Vec<usize> {
        (0..self.n.len()).filter(|&j| self.n[j] > 0).collect()
    }

    /// Poset element owning global row `r`.
    pub fn block_of_row(&self, r: usize) -> usize {
        (0..self.m.len()).find(|&i| self.row_range(i).contains(&r)).expect("row in range")
    }

    pub fn block_of_col(&self, c: usize) -> usize {
        (0..self.n.len()).find(|&j| self.col_range(j).contains(&c)).expect("column in range")
    }

    /// Square shape `M_{P,m}` acting on the left.
    pub fn left_shape(&self) -> BlockShape {
        Self::new_unchecked(self.poset.clone(), self.m.clone(), self.m.clone()).expect("same poset")
    }

    /// Square shape `M_{P,n}` acting on the right.
    pub fn right_shape(&self) -> BlockShape {
        Self::new_unchecked(self.poset.clone(), self.n.clone(), self.n.clone()).expect("same poset")
    }

    /// Same poset with new sizes.
    pub fn with_sizes(&self, m: Vec<usize>, n: Vec<usize>) -> Result<BlockShape> {
        Self::new(self.poset.clone(), m, n)
    }

    /// Global row and column indices of the blocks in `s`, in block order.
    pub fn indices_of(&self, s: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let rows = s.iter().flat_map(|&i| self.row_range(i)).collect();
        let cols = s.iter().flat_map(|&j| self.col_range(j)).collect();
        (rows, cols)
    }
}

/// Shape JSON: `{"poset": ..., "m": [...], "n": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeDoc {
    pub poset: PosetDoc,
    pub m: Vec<usize>,
    pub n: Vec<usize>,
}

impl ShapeDoc {
    /// Resolves the poset (relabelling if needed) and permutes the size
    /// vectors to match. Returns the shape and `new_of_old` for the blocks.
    pub fn resolve(&self) -> Result<(BlockShape, Vec<usize>)> {
        let (poset, new_of_old) = self.poset.resolve()?;
        if self.m.len() != poset.size() || self.n.len() != poset.size() {
            return Err(Error::InvalidShape("size vectors must have one entry per poset element".into()));
        }
        let mut m = vec![0; poset.size()];
        let mut n = vec![0; poset.size()];
        for (old, &new) in new_of_old.iter().enumerate() {
            m[new] = self.m[old];
            n[new] = self.n[old];
        }
        Ok((BlockShape::new(poset, m, n)?, new_of_old))
    }
}

impl From<&BlockShape> for ShapeDoc {
    fn from(s: &BlockShape) -> Self {
        ShapeDoc { poset: PosetDoc::from(s.poset()), m: s.m.clone(), n: s.n.clone() }
    }
}

impl Serialize for BlockShape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ShapeDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockShape {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        ShapeDoc::deserialize(d)?.resolve().map(|(s, _)| s).map_err(D::Error::custom)
    }
}
