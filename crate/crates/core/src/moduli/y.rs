use rayon::prelude::*;
use serde_json::{json, Value};

use super::dl::DlFlag;
use super::rz::{advance, stratum_of};
use super::{canonical_sort, Kind, Model, Quotient};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::hermitian::ResiduePairing;
use crate::lattice::{colength_if_contained, intersect, normalize, sum, Lattice};
use crate::subspace::{grassmannian, nullspace, Subspace};

/// A pair `(M₀, N₀)` on the chain
/// `pΛ₀ ⊂ pM₀* ⊂ pN₀ ⊂ N₀* ⊂ M₀ ⊂ Λ₀` with colengths `(k-1, 1, n-2k, 1, k-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct YPoint {
    pub k: usize,
    pub m0: Lattice,
    pub n0: Lattice,
}

impl YPoint {
    pub fn to_json(&self, model: &Model) -> Value {
        json!({ "k": self.k, "M0": model.lattice_json(&self.m0), "N0": model.lattice_json(&self.n0) })
    }
}

/// An RZ point together with its pair `(M₀, N₀)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePoint {
    pub l0: Lattice,
    pub y: YPoint,
}

impl TriplePoint {
    pub fn from_rz(model: &Model, l0: &Lattice) -> Result<Self> {
        let y = mn_from_l(model, l0)?;
        let r = model.ring();
        let ok = colength_if_contained(r, &y.m0, l0)? == Some(y.k as u32)
            && colength_if_contained(r, l0, &y.n0)? == Some(y.k as u32 - 1)
            && colength_if_contained(r, &model.dual(l0)?, l0)? == Some(2);
        if !ok {
            return Err(Error::consistency("triple colengths fail", json!({ "L0": model.lattice_json(l0) })));
        }
        Ok(TriplePoint { l0: l0.clone(), y })
    }
}

/// Whether `(M₀, N₀)` satisfies the defining chain for `k`.
pub fn check_y_chain(model: &Model, m0: &Lattice, n0: &Lattice, k: usize) -> Result<bool> {
    let r = model.ring();
    let n = model.n();
    if 2 * k > n || k == 0 {
        return Ok(false);
    }
    let (m0s, n0s) = (model.dual(m0)?, model.dual(n0)?);
    let chain = [model.lambda0().scale(1), m0s.scale(1), n0.scale(1), n0s, m0.clone(), model.lambda0().clone()];
    let want = [k - 1, 1, n - 2 * k, 1, k - 1];
    for (w, pair) in want.iter().zip(chain.windows(2)) {
        if colength_if_contained(r, &pair[0], &pair[1])? != Some(*w as u32) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(L₀ ∩ Λ₀, L₀ + Λ₀)`.
pub fn mn_from_l(model: &Model, l0: &Lattice) -> Result<YPoint> {
    let k = stratum_of(model, l0)?;
    let r = model.ring();
    let m0 = intersect(r, l0, model.lambda0())?;
    let n0 = sum(r, l0, model.lambda0())?;
    if !check_y_chain(model, &m0, &n0, k)? {
        return Err(Error::consistency(
            "intersection and sum violate the chain colengths",
            json!({ "L0": model.lattice_json(l0), "k": k }),
        ));
    }
    Ok(YPoint { k, m0, n0 })
}

/// The flag `pM₀*/pΛ₀ ⊂ pN₀/pΛ₀ ⊂ N₀*/pΛ₀ ⊂ M₀/pΛ₀`.
pub fn dl_flag_from_y(model: &Model, y: &YPoint) -> Result<DlFlag> {
    let flag = DlFlag {
        j: model.reduce(&model.dual(&y.m0)?.scale(1))?,
        kperp: model.reduce(&y.n0.scale(1))?,
        kspace: model.reduce(&model.dual(&y.n0)?)?,
        jperp: model.reduce(&y.m0)?,
    };
    if !super::dl::is_dl_point(model, y.k, &flag) {
        return Err(Error::consistency(
            "reduced flag violates the perp conditions",
            json!({ "y": y.to_json(model), "flag": flag.to_json(model) }),
        ));
    }
    Ok(flag)
}

/// `V = M₀*/N₀*` with its filtration `V¹ = M₀/N₀* ⊆ Vᵏ = Λ₀/N₀*` and the
/// pairing `β` on echelon representatives.
#[derive(Debug, Clone)]
pub struct FiberData {
    pub k: usize,
    pub quotient: Quotient,
    pub v1: Subspace,
    pub vk: Subspace,
    pub beta: ResiduePairing,
}

impl FiberData {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn to_json(&self, model: &Model) -> Value {
        let fq = model.field();
        let gram: Vec<Vec<Vec<u32>>> =
            self.beta.gram().iter().map(|row| row.iter().map(|&e| fq.coords(e)).collect()).collect();
        json!({
            "k": self.k,
            "V1": model.subspace_json(&self.v1),
            "Vk": model.subspace_json(&self.vk),
            "beta": gram,
        })
    }
}

pub fn fiber_data(model: &Model, y: &YPoint) -> Result<FiberData> {
    fiber_data_scaled(model, y, 1)
}

/// Fiber data with `β` the reduction of `p^scale · b`.
pub fn fiber_data_scaled(model: &Model, y: &YPoint, scale: i32) -> Result<FiberData> {
    let r = model.ring();
    let (m0s, n0s) = (model.dual(&y.m0)?, model.dual(&y.n0)?);
    let quotient = Quotient::new(model, &m0s, &n0s)?;
    let reps = quotient.representatives();
    let e = m0s.shift();
    let d = reps.len();
    let mut gram = vec![vec![0 as Fe; d]; d];
    for a in 0..d {
        for c in 0..d {
            let v = model.space().pair_b(&reps[a], &reps[c]);
            let t = scale - 2 * e;
            let red = if t >= 0 {
                r.mul_pow_p(v, t as u32)
            } else {
                let k = (-t) as u32;
                if r.valuation(v).is_some_and(|val| val < k) {
                    return Err(Error::consistency(
                        "scaled pairing is not integral on M0*",
                        json!({ "y": y.to_json(model), "scale": scale }),
                    ));
                }
                r.div_pow_p(v, k)
            };
            gram[a][c] = r.residue(red);
        }
    }
    let v1 = quotient.image(model, &y.m0)?;
    let vk = quotient.image(model, model.lambda0())?;
    Ok(FiberData { k: y.k, quotient, v1, vk, beta: ResiduePairing::from_gram(r.clone(), gram) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaProperties {
    pub dims_ok: bool,
    pub vk_isotropic: bool,
    pub v1_radical: bool,
    pub induced_nondegenerate: bool,
}

impl BetaProperties {
    pub fn all(&self) -> bool {
        self.dims_ok && self.vk_isotropic && self.v1_radical && self.induced_nondegenerate
    }
}

pub fn beta_properties(model: &Model, f: &FiberData) -> BetaProperties {
    let fq = model.field();
    let k = f.k;
    let d = f.dim();
    let dims_ok = d == 2 * k - 1 && f.v1.dim() == 1 && f.vk.dim() == k && f.v1.is_subspace_of(fq, &f.vk);
    let vk_isotropic = f.beta.is_isotropic(&f.vk);
    let v1_radical = f.v1.rows().iter().all(|u| {
        (0..d).all(|c| {
            let mut e = vec![0 as Fe; d];
            e[c] = 1;
            f.beta.eval(u, &e) == 0
        })
    });
    let induced_nondegenerate = if !dims_ok {
        false
    } else {
        let mut span = f.v1.clone();
        let mut lifts = Vec::new();
        for row in f.vk.rows() {
            if !span.contains_vec(fq, row) {
                lifts.push(row.clone());
                span = span.sum(fq, &Subspace::from_vectors(fq, d, &[row.clone()]));
            }
        }
        let others = f.vk.free_positions();
        let m: Vec<Vec<Fe>> = lifts
            .iter()
            .map(|a| {
                others
                    .iter()
                    .map(|&c| {
                        let mut e = vec![0 as Fe; d];
                        e[c] = 1;
                        f.beta.eval(a, &e)
                    })
                    .collect()
            })
            .collect();
        lifts.len() == others.len() && (m.is_empty() || nullspace(fq, others.len(), &m).is_empty())
    };
    BetaProperties { dims_ok, vk_isotropic, v1_radical, induced_nondegenerate }
}

/// All `β`-isotropic complements of `Vᵏ` in `V`.
///
/// Candidates are graphs of linear maps from the coordinate complement of
/// `Vᵏ` into `Vᵏ`, which meet every complement exactly once.
pub fn isotropic_complements(model: &Model, f: &FiberData) -> Result<Vec<Subspace>> {
    model.check_ceiling(model.estimate(Kind::Complements, f.k, false))?;
    let fq = model.field();
    let d = f.dim();
    let free = f.vk.free_positions();
    let basis = f.vk.rows();
    let slots = free.len() * basis.len();
    let q = fq.size() as usize;
    let mut idx = vec![0usize; slots];
    let mut out = Vec::new();
    loop {
        let rows: Vec<Vec<Fe>> = free
            .iter()
            .enumerate()
            .map(|(i, &pos)| {
                let mut v = vec![0 as Fe; d];
                v[pos] = 1;
                for (l, b) in basis.iter().enumerate() {
                    let c = idx[i * basis.len() + l] as Fe;
                    if c != 0 {
                        for t in 0..d {
                            v[t] = fq.add(v[t], fq.mul(c, b[t]));
                        }
                    }
                }
                v
            })
            .collect();
        let cand = Subspace::from_vectors(fq, d, &rows);
        if f.beta.is_isotropic(&cand) {
            out.push(cand);
        }
        if !advance(&mut idx, q) {
            break;
        }
    }
    canonical_sort(out, |s| model.subspace_json(s))
}

/// Reference scan over every `(k-1)`-dimensional subspace of `V`.
pub fn isotropic_complements_naive(model: &Model, f: &FiberData) -> Result<Vec<Subspace>> {
    model.check_ceiling(model.estimate(Kind::Complements, f.k, true))?;
    let fq = model.field();
    let d = f.dim();
    let out = grassmannian(fq, d, f.k - 1)
        .into_iter()
        .filter(|s| s.sum(fq, &f.vk).dim() == d && f.beta.is_isotropic(s))
        .collect();
    canonical_sort(out, |s| model.subspace_json(s))
}

/// `L₀*/N₀*` inside `V`.
pub fn complement_from_triple(model: &Model, t: &TriplePoint, f: &FiberData) -> Result<Subspace> {
    let fq = model.field();
    let fs = f.quotient.image(model, &model.dual(&t.l0)?)?;
    if fs.dim() + 1 != f.k || fs.sum(fq, &f.vk).dim() != f.dim() || !f.beta.is_isotropic(&fs) {
        return Err(Error::consistency(
            "L0*/N0* is not an isotropic complement",
            json!({ "L0": model.lattice_json(&t.l0), "F": model.subspace_json(&fs) }),
        ));
    }
    Ok(fs)
}

/// The point `L₀` with `L₀* = N₀* + lift(F)`.
pub fn lattice_from_complement(model: &Model, y: &YPoint, f: &FiberData, fs: &Subspace) -> Result<Lattice> {
    let r = model.ring();
    let n = model.n();
    let big = f.quotient.big();
    let at = big.shift();
    let mut gens = model.dual(&y.n0)?.generators_at(r, at);
    for row in fs.rows() {
        let v = f.quotient.lift_vec(model, row);
        for i in 0..n {
            gens[i].push(v[i]);
        }
    }
    let l0s = normalize(r, at, &gens)?;
    model.space().phi2(&model.dual(&l0s)?, 1)
}

/// All `Y` points of level `k`.
///
/// `M₀` runs over lifts of `(n-k+1)`-dimensional subspaces; `pN₀/pΛ₀` is then
/// a line over `pM₀*/pΛ₀`.
pub fn enumerate_y(model: &Model, k: usize) -> Result<Vec<YPoint>> {
    model.require_k(k)?;
    model.check_ceiling(model.estimate(Kind::Y, k, false))?;
    let fq = model.field();
    let n = model.n();
    let tops = grassmannian(fq, n, n + 1 - k);
    let parts: Vec<Vec<YPoint>> = tops
        .par_iter()
        .map(|a| -> Result<Vec<YPoint>> {
            let m0 = model.lift(a)?;
            let j = model.reduce(&model.dual(&m0)?.scale(1))?;
            let free = j.free_positions();
            let mut out = Vec::new();
            for line in grassmannian(fq, free.len(), 1) {
                let mut v = vec![0 as Fe; n];
                for (i, &pos) in free.iter().enumerate() {
                    v[pos] = line.rows()[0][i];
                }
                let b = j.sum(fq, &Subspace::from_vectors(fq, n, &[v]));
                let n0 = model.lift(&b)?.scale(-1);
                if check_y_chain(model, &m0, &n0, k)? {
                    out.push(YPoint { k, m0: m0.clone(), n0 });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    canonical_sort(parts.into_iter().flatten().collect(), |y| y.to_json(model))
}

/// Reference scan over all pairs of subspaces `(M₀/pΛ₀, pN₀/pΛ₀)`.
pub fn enumerate_y_naive(model: &Model, k: usize) -> Result<Vec<YPoint>> {
    model.require_k(k)?;
    model.check_ceiling(model.estimate(Kind::Y, k, true))?;
    let fq = model.field();
    let n = model.n();
    let bottoms = grassmannian(fq, n, k);
    let parts: Vec<Vec<YPoint>> = grassmannian(fq, n, n + 1 - k)
        .par_iter()
        .map(|a| -> Result<Vec<YPoint>> {
            let m0 = model.lift(a)?;
            let mut out = Vec::new();
            for b in &bottoms {
                let n0 = model.lift(b)?.scale(-1);
                if check_y_chain(model, &m0, &n0, k)? {
                    out.push(YPoint { k, m0: m0.clone(), n0 });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    canonical_sort(parts.into_iter().flatten().collect(), |y| y.to_json(model))
}
