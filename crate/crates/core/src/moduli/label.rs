use serde_json::{json, Value};

use super::heart::{heart_of, HeartLattice};
use super::rz::stratum_of;
use super::Model;
use crate::error::{Error, Result};
use crate::lattice::{colength_if_contained, inv, InvVector, Lattice};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flavor {
    Interior,
    Heart(HeartLattice),
}

/// Stratum, flavor and the pair of invariants that certify them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumLabel {
    pub k: usize,
    pub flavor: Flavor,
    pub cochar: (InvVector, InvVector),
}

impl StratumLabel {
    pub fn to_json(&self, model: &Model) -> Value {
        let flavor = match &self.flavor {
            Flavor::Interior => json!("interior"),
            Flavor::Heart(h) => json!({ "heart": model.lattice_json(&h.lattice) }),
        };
        json!({ "k": self.k, "flavor": flavor, "cochar": [self.cochar.0 .0, self.cochar.1 .0] })
    }
}

/// Labels an RZ point by its component type.
///
/// Below the middle the label is `(k, interior)` with invariants
/// `inv(L₀, Λ₀) = λ_k` and `inv(L₀*, Λ₀) = (1^k, 0, .., (-1)^{k-1})`. At
/// `k = n/2` the point is attached to its heart `Λ'` and the colengths of
/// `L₀` and `L₀*` between `Λ'` and `p^{-1}Λ'` are checked; the interior
/// invariants must hold there as well.
pub fn xmu_label(model: &Model, l0: &Lattice) -> Result<StratumLabel> {
    let r = model.ring();
    let n = model.n();
    let k = stratum_of(model, l0)?;
    let d = model.dual(l0)?;
    let inv0 = inv(r, l0, model.lambda0())?;
    let inv1 = inv(r, &d, model.lambda0())?;
    let fail = |what: &str| Error::consistency(what.to_string(), json!({ "L0": model.lattice_json(l0), "k": k }));
    if inv1 != InvVector::block(n, k, k - 1) || inv1 != inv0.swapped() {
        return Err(fail("dual invariant disagrees with the stratum"));
    }
    if 2 * k < n {
        return Ok(StratumLabel { k, flavor: Flavor::Interior, cochar: (inv0, inv1) });
    }
    let h = heart_of(model, l0)?;
    let top = h.lattice.scale(-1);
    let ku = k as u32;
    let ok = colength_if_contained(r, &h.lattice, l0)? == Some(ku + 1)
        && colength_if_contained(r, l0, &top)? == Some(ku - 1)
        && colength_if_contained(r, &h.lattice, &d)? == Some(ku - 1)
        && colength_if_contained(r, &d, &top)? == Some(ku + 1);
    if !ok {
        return Err(fail("heart colength conditions fail"));
    }
    let cochar = (inv(r, l0, &top)?, inv(r, &d, &top)?);
    Ok(StratumLabel { k, flavor: Flavor::Heart(h), cochar })
}

/// Window membership together with `inv(L, L*) = -(0, .., 0, 1, 1)`, the
/// invariant `μ` read in the opposite orientation.
pub fn xmu_membership(model: &Model, l: &Lattice) -> Result<bool> {
    let r = model.ring();
    let n = model.n();
    let w = inv(r, l, model.lambda0())?;
    if w.0.iter().any(|&a| !(-1..=1).contains(&a)) {
        return Ok(false);
    }
    let mu = InvVector::block(n, 2, 0);
    Ok(inv(r, l, &model.dual(l)?)? == mu.swapped())
}
