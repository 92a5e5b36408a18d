use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{cokernel, preimage_lattice, FgAbelianGroup, IntMatrix, IntegerSolver};

/// Edge identifier; JSON accepts a string or an integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
enum EdgeId {
    Text(String),
    Number(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EdgeDoc", into = "EdgeDoc")]
pub struct Edge {
    pub id: String,
    /// 0-based source vertex (1-based in JSON).
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: EdgeId,
    src: usize,
    dst: usize,
}

impl TryFrom<EdgeDoc> for Edge {
    type Error = Error;

    fn try_from(d: EdgeDoc) -> Result<Self> {
        if d.src == 0 || d.dst == 0 {
            return Err(Error::InvalidRepresentation("vertex labels are 1-based".into()));
        }
        let id = match d.id {
            EdgeId::Text(s) => s,
            EdgeId::Number(n) => n.to_string(),
        };
        Ok(Edge { id, src: d.src - 1, dst: d.dst - 1 })
    }
}

impl From<Edge> for EdgeDoc {
    fn from(e: Edge) -> Self {
        EdgeDoc { id: EdgeId::Text(e.id), src: e.src + 1, dst: e.dst + 1 }
    }
}

/// Finite directed multigraph; loops and parallel edges allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuiverDoc", into = "QuiverDoc")]
pub struct Quiver {
    vertices: usize,
    edges: Vec<Edge>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverDoc {
    vertices: usize,
    edges: Vec<Edge>,
}

impl TryFrom<QuiverDoc> for Quiver {
    type Error = Error;

    fn try_from(d: QuiverDoc) -> Result<Self> {
        Quiver::new(d.vertices, d.edges)
    }
}

impl From<Quiver> for QuiverDoc {
    fn from(q: Quiver) -> Self {
        QuiverDoc { vertices: q.vertices, edges: q.edges }
    }
}

impl Quiver {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if let Some(e) = edges.iter().find(|e| e.src >= vertices || e.dst >= vertices) {
            return Err(Error::InvalidRepresentation(format!("edge {} leaves the vertex range", e.id)));
        }
        Ok(Quiver { vertices, edges })
    }

    /// Edges given as 0-based `(src, dst)` pairs, named by position.
    pub fn from_pairs(vertices: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges =
            pairs.iter().enumerate().map(|(k, &(src, dst))| Edge { id: (k + 1).to_string(), src, dst }).collect();
        Quiver::new(vertices, edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Representation of a quiver by presented abelian groups.
///
/// Vertex `v` carries `Z^{g_v} / im R_v` (`R_v` is `g_v x k_v`, relations as
/// columns). Edge `e` carries a `g_{dst} x g_{src}` matrix sending generator
/// columns of the source to words in the target generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZRep {
    pub groups: Vec<IntMatrix>,
    pub maps: Vec<IntMatrix>,
}

impl ZRep {
    pub fn new(groups: Vec<IntMatrix>, maps: Vec<IntMatrix>) -> Self {
        ZRep { groups, maps }
    }

    pub fn generators(&self, v: usize) -> usize {
        self.groups[v].rows()
    }

    pub fn vertex_group(&self, v: usize) -> FgAbelianGroup {
        cokernel(&self.groups[v])
    }

    /// Checks sizes and that every edge matrix maps relations into relations.
    pub fn validate(&self, q: &Quiver) -> Result<()> {
        if self.groups.len() != q.vertices() || self.maps.len() != q.edges().len() {
            return Err(Error::InvalidRepresentation(format!(
                "{} groups and {} maps for a quiver with {} vertices and {} edges",
                self.groups.len(),
                self.maps.len(),
                q.vertices(),
                q.edges().len()
            )));
        }
        for (e, phi) in q.edges().iter().zip(&self.maps) {
            let (gs, gt) = (self.generators(e.src), self.generators(e.dst));
            if phi.shape() != (gt, gs) {
                return Err(Error::InvalidRepresentation(format!(
                    "edge {} map is {}x{}, expected {gt}x{gs}",
                    e.id,
                    phi.rows(),
                    phi.cols()
                )));
            }
            let image = phi.checked_mul(&self.groups[e.src])?;
            if !IntegerSolver::new(&self.groups[e.dst]).contains_columns(&image)? {
                return Err(Error::InvalidRepresentation(format!("edge {} does not preserve relations", e.id)));
            }
        }
        Ok(())
    }

    /// `(ker, im, cok)` of the edge map, as isomorphism classes.
    pub fn edge_invariants(&self, q: &Quiver, e: usize) -> Result<[FgAbelianGroup; 3]> {
        let edge = &q.edges()[e];
        let (rs, rt) = (&self.groups[edge.src], &self.groups[edge.dst]);
        let phi = &self.maps[e];
        let k = preimage_lattice(phi, rt)?;
        let ker_rel = preimage_lattice(&k, rs)?;
        let cok = cokernel(&IntMatrix::hstack(&[phi, rt])?);
        Ok([cokernel(&ker_rel), cokernel(&k), cok])
    }
}

fn well_defined(f: &IntMatrix, r1: &IntMatrix, r2: &IntMatrix) -> Result<bool> {
    IntegerSolver::new(r2).contains_columns(&f.checked_mul(r1)?)
}

/// Whether `f` (one `g2_v x g1_v` matrix per vertex) is a morphism
/// `rep1 -> rep2`: each `f_v` respects relations and every edge square
/// commutes modulo the target relations.
pub fn is_morphism(f: &[IntMatrix], rep1: &ZRep, rep2: &ZRep, q: &Quiver) -> Result<bool> {
    if f.len() != q.vertices() {
        return Err(Error::DimensionMismatch(format!("{} maps for {} vertices", f.len(), q.vertices())));
    }
    for (v, fv) in f.iter().enumerate() {
        if fv.shape() != (rep2.generators(v), rep1.generators(v)) {
            return Err(Error::DimensionMismatch(format!(
                "map at vertex {} is {}x{}, expected {}x{}",
                v + 1,
                fv.rows(),
                fv.cols(),
                rep2.generators(v),
                rep1.generators(v)
            )));
        }
        if !well_defined(fv, &rep1.groups[v], &rep2.groups[v])? {
            return Ok(false);
        }
    }
    for (k, e) in q.edges().iter().enumerate() {
        let lhs = f[e.dst].checked_mul(&rep1.maps[k])?;
        let rhs = rep2.maps[k].checked_mul(&f[e.src])?;
        if !IntegerSolver::new(&rep2.groups[e.dst]).contains_columns(&lhs.checked_sub(&rhs)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the induced map `Z^g1 / im R1 -> Z^g2 / im R2` is bijective.
pub fn is_group_isomorphism(f: &IntMatrix, r1: &IntMatrix, r2: &IntMatrix) -> Result<bool> {
    if !well_defined(f, r1, r2)? {
        return Ok(false);
    }
    let surjective = cokernel(&IntMatrix::hstack(&[f, r2])?).is_trivial();
    let kernel = preimage_lattice(f, r2)?;
    Ok(surjective && crate::intmat::same_lattice(&kernel, r1)?)
}

/// Morphism whose every component is an isomorphism.
pub fn is_isomorphism(f: &[IntMatrix], rep1: &ZRep, rep2: &ZRep, q: &Quiver) -> Result<bool> {
    if !is_morphism(f, rep1, rep2, q)? {
        return Ok(false);
    }
    for (v, fv) in f.iter().enumerate() {
        if !is_group_isomorphism(fv, &rep1.groups[v], &rep2.groups[v])? {
            return Ok(false);
        }
    }
    Ok(true)
}
