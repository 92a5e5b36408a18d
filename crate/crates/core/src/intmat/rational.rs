//! Rational linear algebra: row reduction, ranks and image annihilators.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::parse_integer;
use super::IntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RationalMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().map(|e| BigRational::from_integer(e.clone())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut BigRational {
        &mut self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_int(&self, rhs: &IntMatrix) -> Result<RationalMatrix> {
        self.mul(&RationalMatrix::from_int(rhs))
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                *self.get_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for c in col..self.cols {
                    let delta = self.get(row, c) * &factor;
                    *self.get_mut(r, c) -= delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Rows form a basis of the right null space `{x : self * x = 0}`,
    /// returned as the rows of a `(cols - rank) x cols` matrix.
    pub fn null_space_rows(&self) -> RationalMatrix {
        let mut r = self.clone();
        let pivots = r.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = RationalMatrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            *out.get_mut(k, f) = BigRational::one();
            for (prow, &pc) in pivots.iter().enumerate() {
                *out.get_mut(k, pc) = -r.get(prow, f).clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix{}x{}[", self.rows, self.cols)?;
        for (i, e) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Parses `"p/q"` or `"p"` exactly; `q` must be nonzero.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_integer(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_integer(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_integer(s)?)),
    }
}

/// Canonical `"p/q"` text, `"p"` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalMatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalMatrixDoc { rows: self.rows, cols: self.cols, entries: self.data.iter().map(format_rational).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = RationalMatrixDoc::deserialize(d)?;
        if doc.entries.len() != doc.rows * doc.cols {
            return Err(D::Error::custom("entry count does not match dimensions"));
        }
        let data =
            doc.entries.iter().map(|e| parse_rational(e)).collect::<Result<Vec<_>>>().map_err(D::Error::custom)?;
        Ok(RationalMatrix { rows: doc.rows, cols: doc.cols, data })
    }
}

/// `M` with `M x = 0` exactly when `x` lies in the rational column span of
/// the source matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnihilatorMatrix {
    pub matrix: RationalMatrix,
    pub source_cols: usize,
}

impl AnnihilatorMatrix {
    /// True when `M x = 0`, i.e. `x` is in the rational image of the source.
    pub fn annihilates(&self, x: &IntMatrix) -> Result<bool> {
        Ok(self.matrix.mul_int(x)?.is_zero())
    }
}

/// Rows span the left null space of `C`, which cuts out `im_Q(C)`.
pub fn image_annihilator(c: &IntMatrix) -> AnnihilatorMatrix {
    let ct = RationalMatrix::from_int(&c.transpose());
    AnnihilatorMatrix { matrix: ct.null_space_rows(), source_cols: c.cols() }
}

/// Rank over Q.
pub fn rational_rank(m: &IntMatrix) -> usize {
    RationalMatrix::from_int(m).rank()
}

/// Scales a rational vector to a primitive integer vector (for display).
pub fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect()
}
