//! Smith coordinates for presented groups.
//!
//! `Z^g / im R` is isomorphic to `Z/d_1 + ... + Z/d_t + Z^r` through
//! `x -> U x` restricted to the coordinates where the Smith diagonal is
//! not 1. Elements are then vectors reduced modulo `moduli` (0 for free
//! coordinates) and homomorphisms are integer matrices in these
//! coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::{smith_normal_form, FgAbelianGroup, IntMatrix};

#[derive(Clone, Debug)]
pub(crate) struct Canon {
    /// `c x g`, generator coordinates to Smith coordinates.
    pub proj: IntMatrix,
    /// `g x c`, Smith basis elements as generator vectors.
    pub lift: IntMatrix,
    /// Torsion moduli first (dividing chain), then zeros for free coordinates.
    pub moduli: Vec<BigInt>,
}

impl Canon {
    pub fn new(relations: &IntMatrix) -> Self {
        let g = relations.rows();
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        let u_inv = snf.u.inverse_unimodular().expect("Smith transforms are unimodular");
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for i in 0..g {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                free.push(i);
            } else if !d.is_one() {
                torsion.push((i, d));
            }
        }
        let keep: Vec<usize> = torsion.iter().map(|t| t.0).chain(free.iter().copied()).collect();
        let mut moduli: Vec<BigInt> = torsion.into_iter().map(|t| t.1).collect();
        moduli.extend(free.iter().map(|_| BigInt::zero()));
        let all: Vec<usize> = (0..g).collect();
        Canon { proj: snf.u.select(&keep, &all), lift: u_inv.select(&all, &keep), moduli }
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn torsion_dim(&self) -> usize {
        self.moduli.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn free_rank(&self) -> usize {
        self.dim() - self.torsion_dim()
    }

    pub fn group(&self) -> FgAbelianGroup {
        FgAbelianGroup::new(self.free_rank(), self.moduli[..self.torsion_dim()].to_vec()).expect("Smith chain")
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank() == 0).then(|| self.moduli.iter().product())
    }

    /// Reduces each row `i` of `m` modulo `moduli[i]` into `[0, d)`.
    pub fn reduce(&self, m: &mut IntMatrix) {
        for (i, d) in self.moduli.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for j in 0..m.cols() {
                let v = m.get(i, j).mod_floor(d);
                m.set(i, j, v);
            }
        }
    }

    /// `m` is zero in the group, column by column.
    pub fn is_zero(&self, m: &IntMatrix) -> bool {
        self.moduli
            .iter()
            .enumerate()
            .all(|(i, d)| m.row(i).iter().all(|x| if d.is_zero() { x.is_zero() } else { x.is_multiple_of(d) }))
    }

    /// Smith-coordinate matrix of a homomorphism given on generators.
    pub fn hom_from(&self, source: &Canon, f: &IntMatrix) -> IntMatrix {
        let mut m = &(&self.proj * f) * &source.lift;
        self.reduce(&mut m);
        m
    }

    /// Generator-level matrix of a homomorphism given in Smith coordinates.
    pub fn hom_to_generators(&self, source: &Canon, m: &IntMatrix) -> IntMatrix {
        &(&self.lift * m) * &source.proj
    }

    /// Order of an element given in Smith coordinates; `None` if infinite.
    pub fn element_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let mut ord = BigInt::one();
        for (v, d) in x.iter().zip(&self.moduli) {
            if d.is_zero() {
                if !v.is_zero() {
                    return None;
                }
                continue;
            }
            let o = d / v.gcd(d);
            ord = ord.lcm(&o);
        }
        Some(ord)
    }

    /// All elements of the torsion part, in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<BigInt>> {
        let t = self.torsion_dim();
        let mut out = vec![vec![BigInt::zero(); self.dim()]];
        for i in 0..t {
            let d = self.moduli[i].to_u64().expect("small torsion");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for x in &out {
                for k in 0..d {
                    let mut y = x.clone();
                    y[i] = BigInt::from(k);
                    next.push(y);
                }
            }
            out = next;
        }
        out
    }
}

/// Largest group order accepted by [`finite_isomorphisms`].
pub const FINITE_ORDER_CAP: u64 = 64;

/// All isomorphisms between two finite groups in Smith coordinates, as
/// `dim x dim` matrices, in lexicographic order of generator images.
pub(crate) fn finite_isomorphisms(a: &Canon, b: &Canon) -> Result<Vec<IntMatrix>> {
    let order = a.order().ok_or_else(|| Error::InvalidRepresentation("group is infinite".into()))?;
    if order > BigInt::from(FINITE_ORDER_CAP) {
        return Err(Error::GroupTooLarge(order));
    }
    if a.group() != b.group() {
        return Ok(Vec::new());
    }
    let pool = b.torsion_elements();
    let mut out = Vec::new();
    let mut images: Vec<Vec<BigInt>> = Vec::new();
    extend_torsion(a, b, &pool, &mut images, &mut |imgs| out.push(columns(b.dim(), imgs)));
    Ok(out)
}

pub(crate) fn columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    m
}

/// Subgroup of `b` generated by `gens` (torsion only), as reduced vectors.
pub(crate) fn span(b: &Canon, gens: &[Vec<BigInt>]) -> std::collections::HashSet<Vec<BigInt>> {
    let mut set = std::collections::HashSet::new();
    set.insert(vec![BigInt::zero(); b.dim()]);
    for g in gens {
        let current: Vec<Vec<BigInt>> = set.iter().cloned().collect();
        let mut multiple = g.clone();
        loop {
            let mut grew = false;
            for h in &current {
                let s = add(b, h, &multiple);
                grew |= set.insert(s);
            }
            multiple = add(b, &multiple, g);
            if !grew || multiple.iter().all(Zero::is_zero) {
                break;
            }
        }
    }
    set
}

pub(crate) fn add(b: &Canon, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).zip(&b.moduli).map(|((p, q), d)| if d.is_zero() { p + q } else { (p + q).mod_floor(d) }).collect()
}

/// Candidate images in `b` for torsion generator `i` of `a`, given the
/// images already chosen: exact order `a_i` and trivial intersection of the
/// generated cyclic group with the span of earlier images.
pub(crate) fn torsion_candidates(
    a: &Canon,
    b: &Canon,
    pool: &[Vec<BigInt>],
    chosen: &[Vec<BigInt>],
) -> Vec<Vec<BigInt>> {
    let i = chosen.len();
    let ai = &a.moduli[i];
    let h = span(b, chosen);
    pool.iter()
        .filter(|y| b.element_order(y).as_ref() == Some(ai))
        .filter(|y| {
            let mut m = (*y).clone();
            let k = ai.to_u64().expect("small order");
            for _ in 1..k {
                if h.contains(&m) {
                    return false;
                }
                m = add(b, &m, y);
            }
            true
        })
        .cloned()
        .collect()
}

fn extend_torsion(
    a: &Canon,
    b: &Canon,
    pool: &[Vec<BigInt>],
    images: &mut Vec<Vec<BigInt>>,
    emit: &mut impl FnMut(&[Vec<BigInt>]),
) {
    if images.len() == a.torsion_dim() {
        emit(images);
        return;
    }
    for y in torsion_candidates(a, b, pool, images) {
        images.push(y);
        extend_torsion(a, b, pool, images, emit);
        images.pop();
    }
}

/// `|det| = 1` for the free-to-free block of a Smith-coordinate matrix.
pub(crate) fn free_block_unimodular(a: &Canon, b: &Canon, m: &IntMatrix) -> bool {
    let (ta, tb) = (a.torsion_dim(), b.torsion_dim());
    let block = m.submatrix(tb, m.rows(), ta, m.cols());
    block.is_square() && block.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
}
