use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
///
/// Zero-row and zero-column matrices are valid values; they stand for the
/// empty block rows and columns of a blocked matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    /// Builds an `r x c` matrix from a row-major slice of small integers.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// Column vector from small integers.
    pub fn column(entries: &[i64]) -> Self {
        Self::from_i64(entries.len(), 1, entries)
    }

    pub fn column_from(entries: Vec<BigInt>) -> Self {
        IntMatrix { rows: entries.len(), cols: 1, data: entries }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: impl Into<BigInt>) {
        *self.get_mut(r, c) = value.into();
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> IntMatrix {
        IntMatrix::column_from((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let e = self.get(r, c);
                    if r == c {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, rhs: &IntMatrix, op: &str) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot {op} {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_same_shape(rhs, "add")?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_same_shape(rhs, "subtract")?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    /// Copy of the rectangle `rows x cols` given by index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        IntMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Contiguous sub-block `[r0, r1) x [c0, c1)`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> IntMatrix {
        let rows: Vec<usize> = (r0..r1).collect();
        let cols: Vec<usize> = (c0..c1).collect();
        self.select(&rows, &cols)
    }

    /// Writes `block` with its upper-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c).clone();
            }
        }
    }

    pub fn hstack(parts: &[&IntMatrix]) -> Result<IntMatrix> {
        let Some(first) = parts.first() else {
            return Ok(IntMatrix::zeros(0, 0));
        };
        let rows = first.rows;
        if parts.iter().any(|p| p.rows != rows) {
            return Err(Error::DimensionMismatch("hstack of differing row counts".into()));
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            out.paste(0, c0, p);
            c0 += p.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&IntMatrix]) -> Result<IntMatrix> {
        let Some(first) = parts.first() else {
            return Ok(IntMatrix::zeros(0, 0));
        };
        let cols = first.cols;
        if parts.iter().any(|p| p.cols != cols) {
            return Err(Error::DimensionMismatch("vstack of differing column counts".into()));
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            out.paste(r0, 0, p);
            r0 += p.rows;
        }
        Ok(out)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(parts: &[&IntMatrix]) -> IntMatrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.paste(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    // Elementary operations, shared by the normal-form code and the search.

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[target] += k * row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        debug_assert_ne!(target, source);
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.data[source * self.cols + c];
            if !s.is_zero() {
                let delta = s * k;
                self.data[target * self.cols + c] += delta;
            }
        }
    }

    /// `col[target] += k * col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        debug_assert_ne!(target, source);
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + source];
            if !s.is_zero() {
                let delta = s * k;
                self.data[r * self.cols + target] += delta;
            }
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let e = &mut self.data[r * self.cols + c];
            *e = -std::mem::take(e);
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let e = &mut self.data[r * self.cols + c];
            *e = -std::mem::take(e);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                m.swap_rows(k, p);
                negate = !negate;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                let lead = m.get(i, k).clone();
                for j in k + 1..n {
                    let v = (m.get(i, j) * &pivot - &lead * m.get(k, j)) / &prev;
                    *m.get_mut(i, j) = v;
                }
                *m.get_mut(i, k) = BigInt::zero();
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if negate { -d } else { d })
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let snf = super::smith_normal_form(self);
        if !snf.s.is_identity() {
            return Err(Error::NotUnimodular);
        }
        // U A V = I  =>  A^{-1} = V U
        snf.v.checked_mul(&snf.u)
    }

    /// Largest absolute entry, zero for empty matrices.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(Signed::abs).max().unwrap_or_default()
    }

    /// Gcd of all entries (zero for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.data.iter().fold(BigInt::zero(), |g, e| g.gcd(e))
    }

    /// Entries as `i64` when every entry fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.data.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Compact canonical byte encoding, used as a hash key by the searches.
    pub fn encode_key(&self, out: &mut Vec<u8>) {
        for e in &self.data {
            match e.to_i64() {
                Some(v) if v.unsigned_abs() < (1 << 62) => {
                    let mut z = ((v << 1) ^ (v >> 63)) as u64;
                    loop {
                        let byte = (z & 0x7f) as u8;
                        z >>= 7;
                        if z == 0 {
                            out.push(byte);
                            break;
                        }
                        out.push(byte | 0x80);
                    }
                }
                _ => {
                    // Escape: 0x80 0x00 (a non-minimal zero, never emitted
                    // above), sign, length, magnitude bytes.
                    let (sign, mag) = e.to_bytes_le();
                    out.extend_from_slice(&[0x80, 0x00]);
                    out.push(if sign == Sign::Minus { 1 } else { 0 });
                    out.extend_from_slice(&(mag.len() as u32).to_le_bytes());
                    out.extend_from_slice(&mag);
                }
            }
        }
    }

    /// Inverse of [`IntMatrix::encode_key`].
    pub fn decode_key(rows: usize, cols: usize, bytes: &[u8]) -> IntMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        let mut i = 0;
        while data.len() < rows * cols {
            if bytes[i] == 0x80 && bytes[i + 1] == 0x00 {
                let sign = if bytes[i + 2] == 1 { Sign::Minus } else { Sign::Plus };
                let len = u32::from_le_bytes(bytes[i + 3..i + 7].try_into().unwrap()) as usize;
                data.push(BigInt::from_bytes_le(sign, &bytes[i + 7..i + 7 + len]));
                i += 7 + len;
                continue;
            }
            let mut z: u64 = 0;
            let mut shift = 0;
            loop {
                let b = bytes[i];
                i += 1;
                z |= u64::from(b & 0x7f) << shift;
                shift += 7;
                if b & 0x80 == 0 {
                    break;
                }
            }
            let v = ((z >> 1) as i64) ^ -((z & 1) as i64);
            data.push(BigInt::from(v));
        }
        IntMatrix { rows, cols, data }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix product dimensions")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_add(rhs).expect("matrix sum dimensions")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_sub(rhs).expect("matrix difference dimensions")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

/// Parses a decimal integer exactly. Accepts an optional sign; rejects
/// anything else, including empty strings and embedded whitespace.
pub fn parse_integer(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a decimal integer: {s:?}")));
    }
    BigInt::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum IntegerDoc {
    Text(String),
    Number(i64),
}

impl IntegerDoc {
    pub(crate) fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntegerDoc::Text(s) => parse_integer(s),
            IntegerDoc::Number(n) => Ok(BigInt::from(*n)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<IntegerDoc>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|e| IntegerDoc::Text(e.to_string())).collect(),
        }
        .serialize(serializer)
    }
}

/// Input form: the explicit document, or nested rows `[[1, 2], [3, 4]]`.
/// Nested rows cannot express zero columns, so output always uses the
/// document.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Doc(MatrixDoc),
    Rows(Vec<Vec<IntegerDoc>>),
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let (rows, cols, entries) = match MatrixInput::deserialize(deserializer)? {
            MatrixInput::Doc(d) => (d.rows, d.cols, d.entries),
            MatrixInput::Rows(r) => {
                let cols = r.first().map_or(0, Vec::len);
                if r.iter().any(|row| row.len() != cols) {
                    return Err(D::Error::custom("rows have different lengths"));
                }
                (r.len(), cols, r.into_iter().flatten().collect())
            }
        };
        let data = entries.iter().map(IntegerDoc::to_bigint).collect::<Result<Vec<_>>>().map_err(D::Error::custom)?;
        IntMatrix::new(rows, cols, data).map_err(D::Error::custom)
    }
}

/// Serde adapter for a single `BigInt` as a decimal string.
pub mod bigint_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        use serde::de::Error as _;
        IntegerDoc::deserialize(d)?.to_bigint().map_err(D::Error::custom)
    }
}

/// Serde adapter for a list of `BigInt`s as decimal strings.
pub mod bigint_vec_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        use serde::de::Error as _;
        Vec::<IntegerDoc>::deserialize(d)?
            .iter()
            .map(IntegerDoc::to_bigint)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)
    }
}
