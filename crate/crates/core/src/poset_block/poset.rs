use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite poset on `0..n` whose order refines the integer order:
/// `i <= j` in the poset implies `i <= j` as integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    leq: Vec<bool>,
}

impl Poset {
    /// Builds a poset from (0-based) generating pairs, closing reflexively
    /// and transitively. The closure must already be normalised; use
    /// [`Poset::from_relation`] to relabel arbitrary input.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let leq = close(n, pairs)?;
        let poset = Poset { n, leq };
        for i in 0..n {
            for j in 0..i {
                if poset.leq(i, j) {
                    return Err(Error::InvalidPoset(format!(
                        "{} precedes {} but has a larger label; relabel first",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(poset)
    }

    /// Closes the relation and relabels by a stable topological sort so
    /// that the result is normalised. Returns the poset and `new_of_old`.
    pub fn from_relation(n: usize, pairs: &[(usize, usize)]) -> Result<(Self, Vec<usize>)> {
        let leq = close(n, pairs)?;
        // Kahn's algorithm, always emitting the smallest available label.
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n)
                .find(|&j| !placed[j] && (0..n).all(|i| i == j || placed[i] || !leq[i * n + j]))
                .expect("antisymmetric closure is acyclic");
            placed[next] = true;
            order.push(next);
        }
        let mut new_of_old = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut relabelled = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                relabelled[new_of_old[i] * n + new_of_old[j]] = leq[i * n + j];
            }
        }
        Ok((Poset { n, leq: relabelled }, new_of_old))
    }

    pub fn chain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                leq[i * n + j] = true;
            }
        }
        Poset { n, leq }
    }

    pub fn antichain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        Poset { n, leq }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    /// Strict comparabilities `(i, j)`, `i < j`, in lexicographic order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.leq(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True when `s` (sorted or not) is convex: `i, k in s`, `i <= j <= k`
    /// imply `j in s`.
    pub fn is_convex(&self, s: &[usize]) -> bool {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        (0..self.n).all(|j| {
            set.contains(&j)
                || !s.iter().any(|&i| self.leq(i, j)) // nothing below j
                || !s.iter().any(|&k| self.leq(j, k)) // nothing above j
        })
    }

    /// True when `s1` is closed downward inside `s`.
    pub fn is_down_set_within(&self, s1: &[usize], s: &[usize]) -> bool {
        s1.iter().all(|&k| s.contains(&k)) && s.iter().all(|&j| s1.contains(&j) || !s1.iter().any(|&k| self.leq(j, k)))
    }

    /// All nonempty convex subsets of the subposet on `elements`, each
    /// sorted, listed by increasing size then lexicographically.
    pub fn convex_subsets(&self, elements: &[usize]) -> Vec<Vec<usize>> {
        let k = elements.len();
        assert!(k < 20, "convex subset enumeration is exponential");
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << k) {
            let s: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| elements[b]).collect();
            // Convexity relative to the subposet: intermediate points outside
            // `elements` do not count.
            let convex = elements
                .iter()
                .all(|&j| s.contains(&j) || !s.iter().any(|&i| self.leq(i, j)) || !s.iter().any(|&l| self.leq(j, l)));
            if convex {
                out.push(s);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Proper nonempty down-sets of `s` (within `s`), each sorted.
    pub fn splittings(&self, s: &[usize]) -> Vec<Vec<usize>> {
        let k = s.len();
        let mut out = Vec::new();
        for mask in 1u32..((1u32 << k) - 1) {
            let s1: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
            if self.is_down_set_within(&s1, s) {
                out.push(s1);
            }
        }
        out
    }

    /// Induced subposet on `elements` (kept in the given order, which must
    /// be increasing).
    pub fn restrict(&self, elements: &[usize]) -> Poset {
        let k = elements.len();
        let mut leq = vec![false; k * k];
        for (a, &i) in elements.iter().enumerate() {
            for (b, &j) in elements.iter().enumerate() {
                leq[a * k + b] = self.leq(i, j);
            }
        }
        Poset { n: k, leq }
    }

    /// All order isomorphisms `f: self -> other` (as `f[i]`) such that
    /// `compatible(i, f[i])` holds, in lexicographic order.
    pub fn isomorphisms_to(&self, other: &Poset, compatible: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.n != other.n {
            return out;
        }
        let mut image = Vec::with_capacity(self.n);
        let mut used = vec![false; self.n];
        self.extend_iso(other, &compatible, &mut image, &mut used, &mut out);
        out
    }

    fn extend_iso(
        &self,
        other: &Poset,
        compatible: &impl Fn(usize, usize) -> bool,
        image: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = image.len();
        if i == self.n {
            out.push(image.clone());
            return;
        }
        for j in 0..other.n {
            if used[j] || !compatible(i, j) {
                continue;
            }
            let consistent = image
                .iter()
                .enumerate()
                .all(|(a, &fa)| self.leq(a, i) == other.leq(fa, j) && self.leq(i, a) == other.leq(j, fa));
            if !consistent {
                continue;
            }
            used[j] = true;
            image.push(j);
            self.extend_iso(other, compatible, image, used, out);
            image.pop();
            used[j] = false;
        }
    }
}

fn close(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<bool>> {
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for &(i, j) in pairs {
        if i >= n || j >= n {
            return Err(Error::InvalidPoset(format!("pair ({}, {}) out of range 1..={n}", i + 1, j + 1)));
        }
        leq[i * n + j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if !leq[i * n + k] {
                continue;
            }
            for j in 0..n {
                if leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if leq[i * n + j] && leq[j * n + i] {
                return Err(Error::InvalidPoset(format!("{} and {} precede each other", i + 1, j + 1)));
            }
        }
    }
    Ok(leq)
}

/// Poset JSON: `{"n": N, "leq": [[i, j], ...]}` with 1-based labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub n: usize,
    #[serde(default)]
    pub leq: Vec<[usize; 2]>,
}

impl PosetDoc {
    /// Closes and normalises; returns the poset and `new_of_old`.
    pub fn resolve(&self) -> Result<(Poset, Vec<usize>)> {
        let pairs = self
            .leq
            .iter()
            .map(|&[i, j]| {
                if i == 0 || j == 0 {
                    Err(Error::InvalidPoset("poset labels are 1-based".into()))
                } else {
                    Ok((i - 1, j - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Poset::from_relation(self.n, &pairs)
    }
}

impl From<&Poset> for PosetDoc {
    fn from(p: &Poset) -> Self {
        PosetDoc { n: p.size(), leq: p.strict_pairs().into_iter().map(|(i, j)| [i + 1, j + 1]).collect() }
    }
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    /// Relabels when needed; callers that carry per-element data should go
    /// through [`PosetDoc::resolve`] to obtain the relabelling.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = PosetDoc::deserialize(d)?;
        doc.resolve().map(|(p, _)| p).map_err(D::Error::custom)
    }
}
