use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{image_annihilator, solve_integer, IntMatrix, IntegerSolver};

/// Block matrix `K = (K_ij)`, `0 <= i, j <= m`, with `n x n` blocks,
/// `K_ii = I` and `K_ij = 0` for `1 <= i != j`, and `K_i0 = 0` for `i >= 1`.
/// Only row `0` carries data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    n: usize,
    m: usize,
    #[serde(rename = "K")]
    matrix: IntMatrix,
}

impl Gadget {
    /// Assembles `K` from `K_00` and `K_01, ..., K_0m`.
    pub fn from_blocks(k00: &IntMatrix, k0j: &[IntMatrix]) -> Result<Self> {
        if !k00.is_square() {
            return Err(Error::NotSquare { rows: k00.rows(), cols: k00.cols() });
        }
        let n = k00.rows();
        if let Some(bad) = k0j.iter().find(|b| b.shape() != (n, n)) {
            return Err(Error::DimensionMismatch(format!("gadget block is {:?}, expected {n}x{n}", bad.shape())));
        }
        let m = k0j.len();
        let mut matrix = IntMatrix::identity(n * (m + 1));
        matrix.paste(0, 0, k00);
        for (j, b) in k0j.iter().enumerate() {
            matrix.paste(0, n * (j + 1), b);
        }
        Ok(Gadget { n, m, matrix })
    }

    /// Validates the block pattern of an explicit matrix.
    pub fn from_matrix(matrix: IntMatrix, n: usize) -> Result<Self> {
        if n == 0 || !matrix.is_square() || !matrix.rows().is_multiple_of(n) {
            return Err(Error::DimensionMismatch("gadget size must be a multiple of n".into()));
        }
        let m = matrix.rows() / n - 1;
        let lower = matrix.submatrix(n, matrix.rows(), 0, matrix.cols());
        let mut expected = IntMatrix::zeros(n * m, n * (m + 1));
        expected.paste(0, n, &IntMatrix::identity(n * m));
        if lower != expected {
            return Err(Error::InvalidShape("rows below the first block row must be (0 | I)".into()));
        }
        Ok(Gadget { n, m, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Block `K_ij`, `0 <= i, j <= m`.
    pub fn block(&self, i: usize, j: usize) -> IntMatrix {
        let n = self.n;
        self.matrix.submatrix(i * n, (i + 1) * n, j * n, (j + 1) * n)
    }

    pub fn k00(&self) -> IntMatrix {
        self.block(0, 0)
    }

    /// `K_0j` for `1 <= j <= m`.
    pub fn k0j(&self, j: usize) -> IntMatrix {
        assert!((1..=self.m).contains(&j), "K_0j needs 1 <= j <= m");
        self.block(0, j)
    }

    /// Reads back `(V, r)` from `K_00 = (V^-1)^T` and `K_0j = -r_j I`.
    pub fn extract(&self) -> Result<(IntMatrix, Vec<BigInt>)> {
        let v = self.k00().inverse_unimodular()?.transpose();
        let mut r = Vec::with_capacity(self.m);
        for j in 1..=self.m {
            let b = self.k0j(j);
            let c = -b.get(0, 0).clone();
            let scalar = IntMatrix::identity(self.n).scale(&-c.clone());
            if b != scalar {
                return Err(Error::InvalidShape(format!("K_0{j} is not a scalar matrix")));
            }
            r.push(c);
        }
        Ok((v, r))
    }

    /// Action on tuples `(w_0, ..., w_m)` of `n x 1` columns: `w_0` becomes
    /// `sum_j K_0j w_j`, the rest are fixed.
    pub fn kappa(&self, w: &[IntMatrix]) -> Result<Vec<IntMatrix>> {
        if w.len() != self.m + 1 || w.iter().any(|c| c.shape() != (self.n, 1)) {
            return Err(Error::DimensionMismatch(format!("kappa needs {} columns of length {}", self.m + 1, self.n)));
        }
        let stacked = IntMatrix::vstack(&w.iter().collect::<Vec<_>>())?;
        let image = &self.matrix * &stacked;
        Ok((0..=self.m).map(|j| image.submatrix(j * self.n, (j + 1) * self.n, 0, 1)).collect())
    }

    /// Product in the gadget group; `(KL)_0j = K_00 L_0j + K_0j`.
    pub fn compose(&self, other: &Gadget) -> Result<Gadget> {
        if (self.n, self.m) != (other.n, other.m) {
            return Err(Error::DimensionMismatch("gadgets of different sizes".into()));
        }
        Gadget::from_matrix(self.matrix.checked_mul(&other.matrix)?, self.n)
    }

    pub fn inverse(&self) -> Result<Gadget> {
        Gadget::from_matrix(self.matrix.inverse_unimodular()?, self.n)
    }
}

/// `K_00 = (V^-1)^T`, `K_0j = -r_j I`.
pub fn gadget_pack(v: &IntMatrix, r: &[BigInt]) -> Result<Gadget> {
    if !v.is_square() {
        return Err(Error::NotSquare { rows: v.rows(), cols: v.cols() });
    }
    let k00 = v.inverse_unimodular()?.transpose();
    let blocks: Vec<IntMatrix> = r.iter().map(|rj| IntMatrix::identity(v.rows()).scale(&-rj.clone())).collect();
    Gadget::from_blocks(&k00, &blocks)
}

/// Builds the gadget for a stabilizer pair of `A` and vectors `x, y` when
/// `(V^-1)^T x - y = sum_j r_j a_j^T` has an integer solution `r` (`a_j` the
/// rows of `A`). Then `kappa` maps `(x, a_1^T, ..., a_m^T)` to
/// `(y, a_1^T, ..., a_m^T)`.
pub fn unit_condition_gadget(a: &IntMatrix, v: &IntMatrix, x: &IntMatrix, y: &IntMatrix) -> Result<Option<Gadget>> {
    let lhs = &v.inverse_unimodular()?.transpose() * x;
    let target = lhs.checked_sub(y)?;
    let Some(r) = solve_integer(&a.transpose(), &target)? else {
        return Ok(None);
    };
    // kappa sums K_0j a_j^T = -r_j a_j^T, which removes the difference.
    gadget_pack(v, r.entries()).map(Some)
}

/// Whether `M D C = 0` for `M = image_annihilator(C)`, i.e. `D` maps the
/// rational column span of `C` into itself.
pub fn is_image_endomorphism(d: &IntMatrix, c: &IntMatrix) -> Result<bool> {
    if !d.is_square() {
        return Err(Error::NotSquare { rows: d.rows(), cols: d.cols() });
    }
    if d.cols() != c.rows() {
        return Err(Error::DimensionMismatch(format!("D is {:?} but C has {} rows", d.shape(), c.rows())));
    }
    image_annihilator(c).annihilates(&d.checked_mul(c)?)
}

/// Checks `U A V^-1 = A` and returns `is_image_endomorphism(V^T, A^T)`,
/// which `A^T U^T = V^T A^T` makes true for every stabilizer pair.
pub fn stabilizer_transport_check(a: &IntMatrix, u: &IntMatrix, v: &IntMatrix) -> Result<bool> {
    if u.shape() != (a.rows(), a.rows()) || v.shape() != (a.cols(), a.cols()) {
        return Err(Error::DimensionMismatch("U must be m x m and V n x n".into()));
    }
    if !v.is_unimodular() || u.checked_mul(a)? != a.checked_mul(v)? {
        return Err(Error::NotStabilizer);
    }
    is_image_endomorphism(&v.transpose(), &a.transpose())
}

/// `true` when every `K_0j` maps `im_Z(A^T)` into itself, the defining
/// property of the finite-index subgroup used alongside the gadgets.
pub fn preserves_integer_image(k: &Gadget, a: &IntMatrix) -> Result<bool> {
    let at = a.transpose();
    let lattice = IntegerSolver::new(&at);
    for j in 1..=k.m() {
        if !lattice.contains_columns(&k.k0j(j).checked_mul(&at)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
