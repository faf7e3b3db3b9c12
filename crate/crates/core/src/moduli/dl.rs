use rayon::prelude::*;
use serde_json::{json, Value};

use super::{canonical_sort, Kind, Model};
use crate::error::Result;
use crate::subspace::{grassmannian, subspaces_within, Subspace};

/// A flag `J ⊂ K^⊥ ⊂ K ⊂ J^⊥` in `Λ₀/pΛ₀`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DlFlag {
    pub j: Subspace,
    pub kperp: Subspace,
    pub kspace: Subspace,
    pub jperp: Subspace,
}

impl DlFlag {
    pub fn to_json(&self, model: &Model) -> Value {
        json!({
            "J": model.subspace_json(&self.j),
            "Kperp": model.subspace_json(&self.kperp),
            "K": model.subspace_json(&self.kspace),
            "Jperp": model.subspace_json(&self.jperp),
        })
    }
}

/// Dimensions `(k-1, k, n-k, n-k+1)`, the inclusions and both perp relations.
pub fn is_dl_point(model: &Model, k: usize, f: &DlFlag) -> bool {
    let n = model.n();
    let fq = model.field();
    let b = model.pairing();
    if k == 0 || 2 * k > n {
        return false;
    }
    f.j.dim() == k - 1
        && f.kperp.dim() == k
        && f.kspace.dim() == n - k
        && f.jperp.dim() == n - k + 1
        && f.j.is_subspace_of(fq, &f.kperp)
        && f.kperp.is_subspace_of(fq, &f.kspace)
        && f.kspace.is_subspace_of(fq, &f.jperp)
        && b.perp(&f.kspace) == f.kperp
        && b.perp(&f.j) == f.jperp
}

/// All flags of level `k`: `K` with `K^⊥ ⊆ K`, then `J` inside
/// `K^⊥ ∩ {y : b̄(K, y) = 0}`.
pub fn enumerate_dl(model: &Model, k: usize) -> Result<Vec<DlFlag>> {
    model.require_k(k)?;
    model.check_ceiling(model.estimate(Kind::Dl, k, false))?;
    let fq = model.field();
    let b = model.pairing();
    let n = model.n();
    let parts: Vec<Vec<DlFlag>> = grassmannian(fq, n, n - k)
        .into_par_iter()
        .map(|kspace| {
            let kperp = b.perp(&kspace);
            if !kperp.is_subspace_of(fq, &kspace) {
                return Vec::new();
            }
            let room = kperp.intersect(fq, &b.right_perp(&kspace));
            subspaces_within(fq, &room, k - 1)
                .into_iter()
                .map(|j| DlFlag { jperp: b.perp(&j), j, kperp: kperp.clone(), kspace: kspace.clone() })
                .collect()
        })
        .collect();
    canonical_sort(parts.into_iter().flatten().collect(), |f| f.to_json(model))
}

/// Reference scan over all pairs `(J, K)`.
pub fn enumerate_dl_naive(model: &Model, k: usize) -> Result<Vec<DlFlag>> {
    model.require_k(k)?;
    model.check_ceiling(model.estimate(Kind::Dl, k, true))?;
    let fq = model.field();
    let b = model.pairing();
    let n = model.n();
    let js = grassmannian(fq, n, k - 1);
    let parts: Vec<Vec<DlFlag>> = grassmannian(fq, n, n - k)
        .into_par_iter()
        .map(|kspace| {
            let kperp = b.perp(&kspace);
            js.iter()
                .map(|j| DlFlag { j: j.clone(), kperp: kperp.clone(), kspace: kspace.clone(), jperp: b.perp(j) })
                .filter(|f| is_dl_point(model, k, f))
                .collect()
        })
        .collect();
    canonical_sort(parts.into_iter().flatten().collect(), |f| f.to_json(model))
}
