use serde_json::{json, Value};

use super::rz::stratum_of;
use super::{canonical_sort, Kind, Model, Quotient};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::hermitian::ResiduePairing;
use crate::lattice::{colength_if_contained, sum, Lattice};
use crate::subspace::{for_each_rref, Subspace};

/// A scalar-self-dual `pΛ₀ ⊂ Λ' ⊂ Λ₀` with `Λ'* = p^{-1}Λ'`, and its image
/// `U = Λ'/pΛ₀`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeartLattice {
    pub lattice: Lattice,
    pub u: Subspace,
}

impl HeartLattice {
    pub fn to_json(&self, model: &Model) -> Value {
        json!({ "Lambda_prime": model.lattice_json(&self.lattice), "U": model.subspace_json(&self.u) })
    }
}

/// `J ⊂ J^⊥` in `Λ'/pΛ'` for the pairing [`heart_pairing`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeartFlag {
    pub f: Subspace,
    pub fperp: Subspace,
}

impl HeartFlag {
    pub fn to_json(&self, model: &Model) -> Value {
        json!({ "F": model.subspace_json(&self.f), "Fperp": model.subspace_json(&self.fperp) })
    }
}

fn isotropic_row(b: &ResiduePairing, prefix: &[Vec<Fe>], row: &[Fe]) -> bool {
    b.eval(row, row) == 0 && prefix.iter().all(|u| b.eval(u, row) == 0 && b.eval(row, u) == 0)
}

fn heart_from_subspace(model: &Model, u: Subspace) -> Result<HeartLattice> {
    let lattice = model.lift(&u)?;
    if model.dual(&lattice)? != lattice.scale(-1) || model.space().phi2(&lattice, 1)? != lattice {
        return Err(Error::consistency(
            "lift of a maximal isotropic subspace is not scalar-self-dual",
            json!({ "U": model.subspace_json(&u) }),
        ));
    }
    Ok(HeartLattice { lattice, u })
}

/// All hearts: lifts of the `n/2`-dimensional `b̄`-isotropic subspaces
/// defined over `F_{p²}`.
pub fn hearts(model: &Model) -> Result<Vec<HeartLattice>> {
    model.require_even()?;
    model.check_ceiling(model.estimate(Kind::Hearts, 0, false))?;
    let n = model.n();
    let alphabet = model.field().subfield(2);
    let b = model.pairing();
    let mut found = Vec::new();
    for_each_rref(n, n / 2, &alphabet, &mut |pre, row| isotropic_row(b, pre, row), &mut |rows| {
        found.push(Subspace::from_rref_unchecked(n, rows.to_vec()))
    });
    let out = found.into_iter().map(|u| heart_from_subspace(model, u)).collect::<Result<Vec<_>>>()?;
    canonical_sort(out, |h| model.lattice_json(&h.lattice))
}

/// Reference scan over every `n/2`-dimensional subspace over `F_{p²}`.
pub fn hearts_naive(model: &Model) -> Result<Vec<HeartLattice>> {
    model.require_even()?;
    model.check_ceiling(model.estimate(Kind::Hearts, 0, true))?;
    let n = model.n();
    let alphabet = model.field().subfield(2);
    let b = model.pairing();
    let mut found = Vec::new();
    for_each_rref(n, n / 2, &alphabet, &mut |_, _| true, &mut |rows| {
        let s = Subspace::from_rref_unchecked(n, rows.to_vec());
        if b.is_isotropic(&s) {
            found.push(s);
        }
    });
    let out = found.into_iter().map(|u| heart_from_subspace(model, u)).collect::<Result<Vec<_>>>()?;
    canonical_sort(out, |h| model.lattice_json(&h.lattice))
}

/// `p^{-1} b` reduced on `Λ'/pΛ'` in the canonical basis of `Λ'`.
pub fn heart_pairing(model: &Model, h: &HeartLattice) -> Result<ResiduePairing> {
    model.space().reduce_pairing(1, Some(&h.lattice))
}

/// The heart `pN₀` through a point of stratum `n/2`, `N₀ = L₀ + Λ₀`.
pub fn heart_of(model: &Model, l0: &Lattice) -> Result<HeartLattice> {
    model.require_even()?;
    let k = stratum_of(model, l0)?;
    if 2 * k != model.n() {
        return Err(Error::InvalidParams(format!("point lies in stratum {k}, not {}", model.n() / 2)));
    }
    let ce = || json!({ "L0": model.lattice_json(l0) });
    let n0 = sum(model.ring(), l0, model.lambda0())?;
    if model.space().phi2(&n0, -1)? != n0 {
        return Err(Error::consistency("L0 + Λ0 is not Φ²-stable", ce()));
    }
    if model.dual(&n0)? != n0.scale(1) {
        return Err(Error::consistency("(L0 + Λ0)* differs from p(L0 + Λ0)", ce()));
    }
    let lattice = n0.scale(1);
    let h = HeartLattice { u: model.reduce(&lattice)?, lattice };
    if !is_heart_point(model, l0, &h)? {
        return Err(Error::consistency("point fails the chain of its own heart", ce()));
    }
    Ok(h)
}

/// `Λ' ⊂ L₀* ⊂ L₀ ⊂ p^{-1}Λ'` with colengths `(n/2-1, 2, n/2-1)`.
pub fn is_heart_point(model: &Model, l0: &Lattice, h: &HeartLattice) -> Result<bool> {
    let r = model.ring();
    let half = (model.n() / 2) as u32;
    let d = model.dual(l0)?;
    Ok(colength_if_contained(r, &h.lattice, &d)? == Some(half - 1)
        && colength_if_contained(r, &d, l0)? == Some(2)
        && colength_if_contained(r, l0, &h.lattice.scale(-1))? == Some(half - 1))
}

/// `(pL₀*/pΛ', pL₀/pΛ')` in the coordinates of `Λ'`.
pub fn dl_heart_flag(model: &Model, l0: &Lattice, h: &HeartLattice) -> Result<HeartFlag> {
    let half = model.n() / 2;
    let q = Quotient::new(model, &h.lattice, &h.lattice.scale(1))?;
    let f = q.image(model, &model.dual(l0)?.scale(1))?;
    let fperp = q.image(model, &l0.scale(1))?;
    let b = heart_pairing(model, h)?;
    if f.dim() + 1 != half || fperp.dim() != half + 1 || b.perp(&f) != fperp {
        return Err(Error::consistency(
            "heart flag violates its coranks or perp relation",
            json!({ "L0": model.lattice_json(l0), "heart": h.to_json(model) }),
        ));
    }
    Ok(HeartFlag { f, fperp })
}

/// All `(n/2-1)`-dimensional isotropic subspaces for the heart pairing.
pub fn enumerate_dl_heart(model: &Model, h: &HeartLattice) -> Result<Vec<HeartFlag>> {
    model.require_even()?;
    model.check_ceiling(model.estimate(Kind::DlHeart, 0, false))?;
    let n = model.n();
    let b = heart_pairing(model, h)?;
    let alphabet: Vec<Fe> = model.field().elements().collect();
    let mut out = Vec::new();
    for_each_rref(n, n / 2 - 1, &alphabet, &mut |pre, row| isotropic_row(&b, pre, row), &mut |rows| {
        let f = Subspace::from_rref_unchecked(n, rows.to_vec());
        out.push(HeartFlag { fperp: b.perp(&f), f });
    });
    canonical_sort(out, |f| f.to_json(model))
}

/// Reference scan over the whole Grassmannian.
pub fn enumerate_dl_heart_naive(model: &Model, h: &HeartLattice) -> Result<Vec<HeartFlag>> {
    model.require_even()?;
    model.check_ceiling(model.estimate(Kind::DlHeart, 0, true))?;
    let n = model.n();
    let b = heart_pairing(model, h)?;
    let out = crate::subspace::grassmannian(model.field(), n, n / 2 - 1)
        .into_iter()
        .filter(|f| b.is_isotropic(f))
        .map(|f| HeartFlag { fperp: b.perp(&f), f })
        .collect();
    canonical_sort(out, |f| f.to_json(model))
}
