use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::intmat::IntMatrix;
use crate::poset_block::{elementary_moves, BlockShape, ElementaryMove, GroupKind};

/// Largest number of `(U, V)` pairs enumerated exhaustively.
pub(crate) const FINITE_PAIR_CAP: usize = 1 << 14;

/// All elements of the blocked unit group on a square shape when it is
/// finite, in a fixed order (identity first). The group is finite exactly
/// when every block has size at most one and no two nonempty blocks are
/// comparable; its elements are then the diagonal sign matrices allowed by
/// `group`.
pub(crate) fn finite_elements(shape: &BlockShape, group: GroupKind, fix_unit_blocks: bool) -> Option<Vec<IntMatrix>> {
    let sizes = shape.row_sizes();
    if sizes.iter().any(|&s| s > 1) {
        return None;
    }
    let poset = shape.poset();
    if poset.strict_pairs().iter().any(|&(i, j)| sizes[i] > 0 && sizes[j] > 0) {
        return None;
    }
    let n = shape.total_rows();
    let free = group == GroupKind::Gl && !fix_unit_blocks;
    let count = if free { 1usize.checked_shl(n as u32)? } else { 1 };
    if count > FINITE_PAIR_CAP {
        return None;
    }
    Some(
        (0..count)
            .map(|mask| {
                let signs: Vec<i64> = (0..n).map(|k| if mask >> (n - 1 - k) & 1 == 1 { -1 } else { 1 }).collect();
                IntMatrix::diagonal(&signs)
            })
            .collect(),
    )
}

/// Random words in the elementary moves, used to probe invariance.
pub struct GroupSampler {
    moves: Vec<ElementaryMove>,
    size: usize,
    rng: ChaCha8Rng,
    max_len: usize,
}

impl GroupSampler {
    pub fn new(shape: &BlockShape, group: GroupKind, fix_unit_blocks: bool, seed: u64) -> crate::Result<Self> {
        Ok(GroupSampler {
            moves: elementary_moves(shape, group, fix_unit_blocks)?,
            size: shape.total_rows(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_len: 8,
        })
    }

    pub fn sample(&mut self) -> IntMatrix {
        let mut g = IntMatrix::identity(self.size);
        if self.moves.is_empty() {
            return g;
        }
        let len = self.rng.random_range(0..=self.max_len);
        for _ in 0..len {
            let mv = self.moves[self.rng.random_range(0..self.moves.len())];
            mv.apply_left(&mut g);
        }
        g
    }
}
