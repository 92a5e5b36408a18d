use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poset::Poset;
use super::shape::{BlockShape, ShapeDoc};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Which unit group of the blocked algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    /// Diagonal blocks have determinant ±1.
    Gl,
    /// Diagonal blocks have determinant 1.
    Sl,
}

/// A matrix together with a block shape whose pattern it respects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockedMatrix {
    shape: BlockShape,
    data: IntMatrix,
}

impl BlockedMatrix {
    /// Validates dimensions and the block pattern.
    pub fn new(shape: BlockShape, data: IntMatrix) -> Result<Self> {
        if let Some((i, j)) = first_violation(&data, &shape)? {
            return Err(Error::PatternViolation { row_block: i + 1, col_block: j + 1 });
        }
        Ok(BlockedMatrix { shape, data })
    }

    pub fn identity(shape: &BlockShape) -> Result<Self> {
        if !shape.is_square() {
            return Err(Error::InvalidShape("identity needs a square shape".into()));
        }
        Ok(BlockedMatrix { shape: shape.clone(), data: IntMatrix::identity(shape.total_rows()) })
    }

    pub fn zero(shape: &BlockShape) -> Self {
        BlockedMatrix { shape: shape.clone(), data: IntMatrix::zeros(shape.total_rows(), shape.total_cols()) }
    }

    /// Single-block shape over the one-element poset.
    pub fn single_block(m: IntMatrix) -> Result<Self> {
        let shape = BlockShape::new(Poset::chain(1), vec![m.rows()], vec![m.cols()])?;
        Ok(BlockedMatrix { shape, data: m })
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.data
    }

    /// Block `M{i,j}`; empty when `m_i` or `n_j` is zero.
    pub fn block(&self, i: usize, j: usize) -> IntMatrix {
        let r = self.shape.row_range(i);
        let c = self.shape.col_range(j);
        self.data.submatrix(r.start, r.end, c.start, c.end)
    }

    /// Diagonal block `M{i}`.
    pub fn diagonal_block(&self, i: usize) -> IntMatrix {
        self.block(i, i)
    }

    /// Submatrix on the blocks of `s` (rows and columns), in block order.
    pub fn restrict(&self, s: &[usize]) -> IntMatrix {
        let (rows, cols) = self.shape.indices_of(s);
        self.data.select(&rows, &cols)
    }

    /// Same matrix re-read under another shape; re-validates the pattern.
    pub fn reshape(&self, shape: BlockShape) -> Result<Self> {
        BlockedMatrix::new(shape, self.data.clone())
    }
}

fn first_violation(m: &IntMatrix, shape: &BlockShape) -> Result<Option<(usize, usize)>> {
    if m.rows() != shape.total_rows() || m.cols() != shape.total_cols() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but the shape is {}x{}",
            m.rows(),
            m.cols(),
            shape.total_rows(),
            shape.total_cols()
        )));
    }
    let poset = shape.poset();
    for i in 0..shape.num_blocks() {
        for j in 0..shape.num_blocks() {
            if poset.leq(i, j) {
                continue;
            }
            for r in shape.row_range(i) {
                for c in shape.col_range(j) {
                    if !m.get(r, c).is_zero() {
                        return Ok(Some((i, j)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// True iff every block `(i, j)` with `i` not below `j` vanishes.
pub fn validate_membership(m: &IntMatrix, shape: &BlockShape) -> Result<bool> {
    Ok(first_violation(m, shape)?.is_none())
}

/// Membership in `GL_{P,n}(Z)` or `SL_{P,n}(Z)`.
pub fn group_membership(m: &IntMatrix, shape: &BlockShape, group: GroupKind) -> Result<bool> {
    if !shape.is_square() {
        return Err(Error::InvalidShape("unit groups need a square shape".into()));
    }
    if !validate_membership(m, shape)? {
        return Ok(false);
    }
    for i in 0..shape.num_blocks() {
        let r = shape.row_range(i);
        let d = m.submatrix(r.start, r.end, r.start, r.end).determinant()?;
        let ok = match group {
            GroupKind::Gl => d.abs().is_one(),
            GroupKind::Sl => d.is_one(),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Product of compatible blocked matrices over the same poset.
pub fn multiply_blocked(a: &BlockedMatrix, b: &BlockedMatrix) -> Result<BlockedMatrix> {
    if a.shape.poset() != b.shape.poset() || a.shape.col_sizes() != b.shape.row_sizes() {
        return Err(Error::InvalidShape("blocked product: shapes do not compose".into()));
    }
    let shape = BlockShape::new(a.shape.poset().clone(), a.shape.row_sizes().to_vec(), b.shape.col_sizes().to_vec())?;
    let data = a.data.checked_mul(&b.data)?;
    debug_assert!(validate_membership(&data, &shape)?);
    Ok(BlockedMatrix { shape, data })
}

/// Inverse of a unit; the result lies in the same group.
pub fn invert_blocked(u: &BlockedMatrix, group: GroupKind) -> Result<BlockedMatrix> {
    if !group_membership(&u.data, &u.shape, group)? {
        return Err(Error::NotAUnit);
    }
    let inv = u.data.inverse_unimodular()?;
    debug_assert!(group_membership(&inv, &u.shape, group)?);
    Ok(BlockedMatrix { shape: u.shape.clone(), data: inv })
}

/// Embeds `M` in `M_{P,r}`: block `(i, j)` of `M` becomes the upper-left
/// corner of block `(i, j)` of the result; the rest of an off-diagonal block
/// is zero and the rest of a diagonal block is the identity.
pub fn iota_embed(m: &BlockedMatrix, target: &[usize]) -> Result<BlockedMatrix> {
    let shape = m.shape();
    if !shape.is_square() {
        return Err(Error::InvalidShape("the corner embedding needs a square shape".into()));
    }
    if target.len() != shape.num_blocks() {
        return Err(Error::InvalidShape("target sizes must have one entry per poset element".into()));
    }
    if let Some(i) = (0..target.len()).find(|&i| target[i] < shape.row_sizes()[i]) {
        return Err(Error::InvalidShape(format!(
            "target size {} is below the current size {} at element {}",
            target[i],
            shape.row_sizes()[i],
            i + 1
        )));
    }
    let out_shape = BlockShape::square(shape.poset().clone(), target.to_vec())?;
    let mut data = IntMatrix::zeros(out_shape.total_rows(), out_shape.total_cols());
    for (i, &t) in target.iter().enumerate() {
        let r0 = out_shape.row_range(i).start;
        for k in shape.row_sizes()[i]..t {
            data.set(r0 + k, r0 + k, 1);
        }
        for j in 0..shape.num_blocks() {
            if shape.poset().leq(i, j) {
                data.paste(r0, out_shape.col_range(j).start, &m.block(i, j));
            }
        }
    }
    BlockedMatrix::new(out_shape, data)
}

/// Blocked matrix JSON: `{"shape": ..., "matrix": ...}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockedDoc {
    pub shape: ShapeDoc,
    pub matrix: IntMatrix,
}

impl BlockedDoc {
    /// Resolves the shape and permutes the matrix to the normalised
    /// labelling.
    pub fn resolve(&self) -> Result<BlockedMatrix> {
        let raw_m = &self.shape.m;
        let raw_n = &self.shape.n;
        let (shape, new_of_old) = self.shape.resolve()?;
        if self.matrix.rows() != raw_m.iter().sum::<usize>() || self.matrix.cols() != raw_n.iter().sum::<usize>() {
            return Err(Error::DimensionMismatch("matrix does not match the shape".into()));
        }
        let mut old_of_new = vec![0; new_of_old.len()];
        for (old, &new) in new_of_old.iter().enumerate() {
            old_of_new[new] = old;
        }
        let spans = |sizes: &[usize]| {
            let mut starts = vec![0];
            for s in sizes {
                starts.push(starts.last().unwrap() + s);
            }
            starts
        };
        let row_start = spans(raw_m);
        let col_start = spans(raw_n);
        let rows: Vec<usize> = old_of_new.iter().flat_map(|&o| row_start[o]..row_start[o + 1]).collect();
        let cols: Vec<usize> = old_of_new.iter().flat_map(|&o| col_start[o]..col_start[o + 1]).collect();
        BlockedMatrix::new(shape, self.matrix.select(&rows, &cols))
    }
}

impl From<&BlockedMatrix> for BlockedDoc {
    fn from(b: &BlockedMatrix) -> Self {
        BlockedDoc { shape: ShapeDoc::from(b.shape()), matrix: b.matrix().clone() }
    }
}

impl Serialize for BlockedMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BlockedDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockedMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        BlockedDoc::deserialize(d)?.resolve().map_err(D::Error::custom)
    }
}
