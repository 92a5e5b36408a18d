use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::blocked::{BlockedMatrix, GroupKind};
use super::shape::BlockShape;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// An elementary unit of a blocked algebra, stored symbolically so that it
/// can be applied as a row or column operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ElementaryMove {
    /// `I + sign * E_{row,col}`, `row != col`.
    Transvection { row: usize, col: usize, negative: bool },
    /// `diag(1, ..., -1, ..., 1)` with the `-1` at `index`.
    SignFlip { index: usize },
}

impl ElementaryMove {
    pub fn to_matrix(&self, n: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        match *self {
            ElementaryMove::Transvection { row, col, negative } => m.set(row, col, if negative { -1 } else { 1 }),
            ElementaryMove::SignFlip { index } => m.set(index, index, -1),
        }
        m
    }

    pub fn inverse(&self) -> ElementaryMove {
        match *self {
            ElementaryMove::Transvection { row, col, negative } => {
                ElementaryMove::Transvection { row, col, negative: !negative }
            }
            flip => flip,
        }
    }

    /// `X <- G X`.
    pub fn apply_left(&self, x: &mut IntMatrix) {
        match *self {
            ElementaryMove::Transvection { row, col, negative } => {
                x.add_row_multiple(row, col, &BigInt::from(if negative { -1 } else { 1 }))
            }
            ElementaryMove::SignFlip { index } => x.negate_row(index),
        }
    }

    /// `X <- X G`.
    pub fn apply_right(&self, x: &mut IntMatrix) {
        match *self {
            ElementaryMove::Transvection { row, col, negative } => {
                x.add_col_multiple(col, row, &BigInt::from(if negative { -1 } else { 1 }))
            }
            ElementaryMove::SignFlip { index } => x.negate_col(index),
        }
    }
}

/// Elementary moves of `GL_{P,n}` or `SL_{P,n}`, sorted by (block row,
/// block column, sign), transvections first, then sign flips. With
/// `fix_unit_blocks`, blocks of size 1 admit no sign flip, which gives the
/// generators of the unit-restricted group on the column side.
pub fn elementary_moves(shape: &BlockShape, group: GroupKind, fix_unit_blocks: bool) -> Result<Vec<ElementaryMove>> {
    if !shape.is_square() {
        return Err(Error::InvalidShape("generators need a square shape".into()));
    }
    let poset = shape.poset();
    let mut moves = Vec::new();
    for i in 0..shape.num_blocks() {
        for j in 0..shape.num_blocks() {
            if !poset.leq(i, j) {
                continue;
            }
            for negative in [false, true] {
                for row in shape.row_range(i) {
                    for col in shape.col_range(j) {
                        if row != col {
                            moves.push(ElementaryMove::Transvection { row, col, negative });
                        }
                    }
                }
            }
        }
    }
    if group == GroupKind::Gl {
        for i in 0..shape.num_blocks() {
            let size = shape.row_sizes()[i];
            if fix_unit_blocks && size == 1 {
                continue;
            }
            moves.extend(shape.row_range(i).map(|index| ElementaryMove::SignFlip { index }));
        }
    }
    Ok(moves)
}

/// The standard transvection alphabet (plus sign flips for GL) as blocked
/// matrices.
pub fn elementary_generators(shape: &BlockShape, group: GroupKind) -> Result<Vec<BlockedMatrix>> {
    elementary_moves(shape, group, false)?
        .into_iter()
        .map(|mv| BlockedMatrix::new(shape.clone(), mv.to_matrix(shape.total_rows())))
        .collect()
}
