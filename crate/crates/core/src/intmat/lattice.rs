//! Integer solvability and lattice computations built on the Smith form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{smith_normal_form, IntMatrix, SmithDecomposition};
use crate::error::{Error, Result};

/// Outcome of solving `A z = b` over Z, with the reason when unsolvable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solvability {
    Solved(IntMatrix),
    /// `(U b)_i` is not divisible by the invariant factor `s_i`.
    NotDivisible {
        coordinate: usize,
        value: BigInt,
        divisor: BigInt,
    },
    /// `(U b)_i` is nonzero past the rank, so `b` is not even in the
    /// rational image.
    Inconsistent {
        coordinate: usize,
        value: BigInt,
    },
}

/// Reusable solver for many right-hand sides against one matrix.
pub struct IntegerSolver {
    a: IntMatrix,
    snf: SmithDecomposition,
    diag: Vec<BigInt>,
}

impl IntegerSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        let diag = snf.diagonal();
        IntegerSolver { a: a.clone(), snf, diag }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn solve(&self, b: &IntMatrix) -> Result<Solvability> {
        if b.rows() != self.a.rows() || b.cols() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side is {}x{}, expected {}x1",
                b.rows(),
                b.cols(),
                self.a.rows()
            )));
        }
        let c = &self.snf.u * b;
        let n = self.a.cols();
        let mut w = vec![BigInt::zero(); n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..c.rows() {
            let ci = c.get(i, 0);
            let si = self.diag.get(i).cloned().unwrap_or_default();
            if si.is_zero() {
                if !ci.is_zero() {
                    return Ok(Solvability::Inconsistent { coordinate: i, value: ci.clone() });
                }
                continue;
            }
            let (q, r) = ci.div_rem(&si);
            if !r.is_zero() {
                return Ok(Solvability::NotDivisible { coordinate: i, value: ci.clone(), divisor: si });
            }
            w[i] = q;
        }
        let z = &self.snf.v * &IntMatrix::column_from(w);
        debug_assert_eq!(&self.a * &z, *b);
        Ok(Solvability::Solved(z))
    }

    /// Returns `z` with `A z = b`, or `None` when no integer solution exists.
    pub fn solve_column(&self, b: &IntMatrix) -> Result<Option<IntMatrix>> {
        Ok(match self.solve(b)? {
            Solvability::Solved(z) => Some(z),
            _ => None,
        })
    }

    /// Solves `A Z = B` column by column.
    pub fn solve_matrix(&self, b: &IntMatrix) -> Result<Option<IntMatrix>> {
        if b.rows() != self.a.rows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, expected {}",
                b.rows(),
                self.a.rows()
            )));
        }
        let mut out = IntMatrix::zeros(self.a.cols(), b.cols());
        for j in 0..b.cols() {
            match self.solve_column(&b.col(j))? {
                Some(z) => out.paste(0, j, &z),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// True when every column of `b` lies in `im_Z(A)`.
    pub fn contains_columns(&self, b: &IntMatrix) -> Result<bool> {
        Ok(self.solve_matrix(b)?.is_some())
    }
}

/// Integer solution of `A z = b`, verified by exact multiplication.
pub fn solve_integer(a: &IntMatrix, b: &IntMatrix) -> Result<Option<IntMatrix>> {
    IntegerSolver::new(a).solve_column(b)
}

/// Columns form a basis of the integer kernel lattice `{z : A z = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let cols: Vec<usize> = (rank..a.cols()).collect();
    let rows: Vec<usize> = (0..a.cols()).collect();
    snf.v.select(&rows, &cols)
}

/// Columns form a basis of the lattice `im_Z(G)`.
pub fn lattice_basis(g: &IntMatrix) -> IntMatrix {
    // G = U^{-1} S V^{-1}, so im G = im(U^{-1} S) = span of s_i * (U^{-1})_{:,i}.
    let snf = smith_normal_form(g);
    let rank = snf.rank();
    let u_inv = snf.u.inverse_unimodular().expect("Smith transform is unimodular");
    let mut basis = IntMatrix::zeros(g.rows(), rank);
    for i in 0..rank {
        let s = snf.s.get(i, i);
        for r in 0..g.rows() {
            basis.set(r, i, u_inv.get(r, i) * s);
        }
    }
    basis
}

/// Basis of `{a in Z^n : F a in im_Z(R)}` where `F` is `m x n` and `R` is
/// `m x k`.
pub fn preimage_lattice(f: &IntMatrix, r: &IntMatrix) -> Result<IntMatrix> {
    if f.rows() != r.rows() {
        return Err(Error::DimensionMismatch("preimage lattice: row counts differ".into()));
    }
    let stacked = IntMatrix::hstack(&[f, &-r])?;
    let kernel = kernel_basis(&stacked);
    let head: Vec<usize> = (0..f.cols()).collect();
    let all: Vec<usize> = (0..kernel.cols()).collect();
    Ok(lattice_basis(&kernel.select(&head, &all)))
}

/// True when the column lattices of `a` and `b` coincide.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch("lattices in different ambient ranks".into()));
    }
    Ok(IntegerSolver::new(a).contains_columns(b)? && IntegerSolver::new(b).contains_columns(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_examples() {
        let z = solve_integer(&IntMatrix::identity(2), &IntMatrix::column(&[3, 5])).unwrap();
        assert_eq!(z, Some(IntMatrix::column(&[3, 5])));
        assert_eq!(solve_integer(&IntMatrix::from_rows(&[[2]]), &IntMatrix::column(&[3])).unwrap(), None);
        assert_eq!(
            solve_integer(&IntMatrix::from_rows(&[[2]]), &IntMatrix::column(&[4])).unwrap(),
            Some(IntMatrix::column(&[2]))
        );
        assert!(solve_integer(&IntMatrix::identity(2), &IntMatrix::column(&[1])).is_err());
    }

    #[test]
    fn unsolvable_reasons() {
        let solver = IntegerSolver::new(&IntMatrix::from_rows(&[[2, 0], [0, 0]]));
        assert!(matches!(solver.solve(&IntMatrix::column(&[1, 0])).unwrap(), Solvability::NotDivisible { .. }));
        assert!(matches!(solver.solve(&IntMatrix::column(&[0, 1])).unwrap(), Solvability::Inconsistent { .. }));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&IntMatrix::identity(2)).cols(), 0);
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.col(0);
        assert!(v == IntMatrix::column(&[1, -1]) || v == IntMatrix::column(&[-1, 1]));
        let k = kernel_basis(&IntMatrix::zeros(2, 2));
        assert_eq!(k.cols(), 2);
        assert!(k.is_unimodular());
    }

    #[test]
    fn lattices() {
        let g = IntMatrix::from_rows(&[[2, 4, 6], [0, 3, 3]]);
        let b = lattice_basis(&g);
        assert_eq!(b.cols(), 2);
        assert!(same_lattice(&g, &b).unwrap());
        // {a : 2a in 4Z} = 2Z
        let p = preimage_lattice(&IntMatrix::from_rows(&[[2]]), &IntMatrix::from_rows(&[[4]])).unwrap();
        assert!(same_lattice(&p, &IntMatrix::from_rows(&[[2]])).unwrap());
    }
}
