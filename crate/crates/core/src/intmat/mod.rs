//! Exact integer and rational linear algebra.
//!
//! All arithmetic is arbitrary precision. Empty matrices are ordinary
//! values throughout.

mod abelian;
mod lattice;
mod matrix;
mod rational;
mod snf;

pub use abelian::{cokernel, FgAbelianGroup};
pub use lattice::{
    kernel_basis, lattice_basis, preimage_lattice, same_lattice, solve_integer, IntegerSolver, Solvability,
};
pub use matrix::{bigint_string, bigint_vec_string, parse_integer, IntMatrix};
pub use rational::{
    clear_denominators, format_rational, image_annihilator, parse_rational, rational_rank, AnnihilatorMatrix,
    RationalMatrix,
};
pub use snf::{smith_normal_form, SmithDecomposition};

/// `(n x n)` matrix `I - A`.
pub fn identity_minus(a: &IntMatrix) -> crate::Result<IntMatrix> {
    if !a.is_square() {
        return Err(crate::Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    Ok(&IntMatrix::identity(a.rows()) - a)
}
