use serde::{Deserialize, Serialize};

use super::rep::{Quiver, ZRep};
use crate::error::{Error, Result};
use crate::intmat::{preimage_lattice, IntMatrix, IntegerSolver};

/// A module over the path ring of a quiver: one presented group
/// `Z^G / im R` with the action of each vertex idempotent and each edge
/// given as `G x G` matrices on generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathModule {
    pub relations: IntMatrix,
    pub idempotents: Vec<IntMatrix>,
    pub edges: Vec<IntMatrix>,
}

impl PathModule {
    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    /// Checks the idempotent decomposition and that edge `e` equals
    /// `P_{dst} e P_{src}`, all modulo relations.
    pub fn validate(&self, q: &Quiver) -> Result<()> {
        let g = self.generators();
        if self.idempotents.len() != q.vertices() || self.edges.len() != q.edges().len() {
            return Err(Error::InvalidModule("action count does not match the quiver".into()));
        }
        if self.idempotents.iter().chain(&self.edges).any(|m| m.shape() != (g, g)) {
            return Err(Error::InvalidModule(format!("actions must be {g}x{g}")));
        }
        let rel = IntegerSolver::new(&self.relations);
        let zero_mod = |m: &IntMatrix| rel.contains_columns(m);
        for (k, m) in self.idempotents.iter().chain(&self.edges).enumerate() {
            if !zero_mod(&m.checked_mul(&self.relations)?)? {
                return Err(Error::InvalidModule(format!("action {} does not preserve relations", k + 1)));
            }
        }
        let mut sum = IntMatrix::zeros(g, g);
        for (u, pu) in self.idempotents.iter().enumerate() {
            sum = sum.checked_add(pu)?;
            for (v, pv) in self.idempotents.iter().enumerate() {
                let prod = pu.checked_mul(pv)?;
                let expect = if u == v { pu.clone() } else { IntMatrix::zeros(g, g) };
                if !zero_mod(&prod.checked_sub(&expect)?)? {
                    let what = if u == v { "not idempotent" } else { "not orthogonal" };
                    return Err(Error::InvalidModule(format!("idempotents {} and {} {what}", u + 1, v + 1)));
                }
            }
        }
        if !zero_mod(&sum.checked_sub(&IntMatrix::identity(g))?)? {
            return Err(Error::InvalidModule("idempotents do not sum to the identity".into()));
        }
        for (e, a) in q.edges().iter().zip(&self.edges) {
            let sandwiched = self.idempotents[e.dst].checked_mul(a)?.checked_mul(&self.idempotents[e.src])?;
            if !zero_mod(&sandwiched.checked_sub(a)?)? {
                return Err(Error::InvalidModule(format!("edge {} acts outside its endpoints", e.id)));
            }
        }
        Ok(())
    }
}

/// `A = sum_v A_v` with `P_v` the projection on summand `v` and edge `e`
/// acting by `phi_e` from the source summand into the target summand.
pub fn zrep_to_module(rep: &ZRep, q: &Quiver) -> Result<PathModule> {
    rep.validate(q)?;
    let gens: Vec<usize> = (0..q.vertices()).map(|v| rep.generators(v)).collect();
    let mut offset = vec![0; gens.len() + 1];
    for (v, g) in gens.iter().enumerate() {
        offset[v + 1] = offset[v] + g;
    }
    let g = offset[gens.len()];
    let relations = IntMatrix::direct_sum(&rep.groups.iter().collect::<Vec<_>>());
    let idempotents = (0..q.vertices())
        .map(|v| {
            let mut p = IntMatrix::zeros(g, g);
            p.paste(offset[v], offset[v], &IntMatrix::identity(gens[v]));
            p
        })
        .collect();
    let edges = q
        .edges()
        .iter()
        .zip(&rep.maps)
        .map(|(e, phi)| {
            let mut a = IntMatrix::zeros(g, g);
            a.paste(offset[e.dst], offset[e.src], phi);
            a
        })
        .collect();
    Ok(PathModule { relations, idempotents, edges })
}

/// `A_v = P_v A`, presented as `Z^G / {x : P_v x in im R}` on all `G`
/// generators of `A`; edge `e` becomes `x -> e P_{src} x`.
pub fn module_to_zrep(module: &PathModule, q: &Quiver) -> Result<ZRep> {
    module.validate(q)?;
    let groups =
        module.idempotents.iter().map(|p| preimage_lattice(p, &module.relations)).collect::<Result<Vec<_>>>()?;
    let maps = q
        .edges()
        .iter()
        .zip(&module.edges)
        .map(|(e, a)| a.checked_mul(&module.idempotents[e.src]))
        .collect::<Result<Vec<_>>>()?;
    let rep = ZRep::new(groups, maps);
    rep.validate(q)?;
    Ok(rep)
}
