use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal,
/// `s_1 | s_2 | ... | s_k`, every `s_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithDecomposition {
    #[serde(rename = "U")]
    pub u: IntMatrix,
    #[serde(rename = "S")]
    pub s: IntMatrix,
    #[serde(rename = "V")]
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal of `S` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }

    /// Checks every defining property against the source matrix.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let (m, n) = a.shape();
        if self.u.shape() != (m, m) || self.v.shape() != (n, n) || self.s.shape() != (m, n) {
            return false;
        }
        if &(&self.u * a) * &self.v != self.s {
            return false;
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        for r in 0..m {
            for c in 0..n {
                if r != c && !self.s.get(r, c).is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return false;
        }
        diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) })
    }
}

/// Location of a nonzero entry of least absolute value in `a[t.., t..]`.
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let e = a.get(r, c);
            if e.is_zero() {
                continue;
            }
            let abs = e.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                let unit = abs.is_one();
                best = Some((r, c, abs));
                if unit {
                    break;
                }
            }
        }
        if best.as_ref().is_some_and(|(_, _, b)| b.is_one()) {
            break;
        }
    }
    best.map(|(r, c, _)| (r, c))
}

/// Smith normal form with transforms.
///
/// Pivots on a nonzero entry of minimal absolute value, which keeps
/// coefficient growth modest at the sizes this crate targets. The output is
/// a deterministic function of the input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = a.shape();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pr, pc)) = min_pivot(&s, t) else {
            break;
        };
        s.swap_rows(t, pr);
        u.swap_rows(t, pr);
        s.swap_cols(t, pc);
        v.swap_cols(t, pc);

        loop {
            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for r in t + 1..m {
                if s.get(r, t).is_zero() {
                    continue;
                }
                let q = -(s.get(r, t) / &pivot);
                s.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                if !s.get(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..n {
                if s.get(t, c).is_zero() {
                    continue;
                }
                let q = -(s.get(t, c) / &pivot);
                s.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                if !s.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let (pr, pc) = min_pivot(&s, t).expect("nonzero remainder present");
                s.swap_rows(t, pr);
                u.swap_rows(t, pr);
                s.swap_cols(t, pc);
                v.swap_cols(t, pc);
                continue;
            }
            // Row t and column t are clear; enforce divisibility of the rest.
            let offender = (t + 1..m).find(|&r| (t + 1..n).any(|c| !s.get(r, c).is_multiple_of(&pivot)));
            match offender {
                Some(r) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, s, v }
}
