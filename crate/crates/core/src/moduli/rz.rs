use std::collections::HashSet;

use rayon::prelude::*;
use serde_json::json;

use super::{canonical_sort, Kind, Model};
use crate::coeff::RingElem;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::lattice::{inv, normalize, InvVector, Lattice, Mat};
use crate::subspace::{grassmannian, subspaces_within, Subspace};

/// Window containment `pΛ₀ ⊆ L ⊆ p^{-1}Λ₀` and `inv(L*, L) = (1,1,0,..,0)`.
pub fn is_rz_point(model: &Model, l: &Lattice) -> Result<bool> {
    let w = inv(model.ring(), l, model.lambda0())?;
    if w.0.iter().any(|&a| !(-1..=1).contains(&a)) {
        return Ok(false);
    }
    let d = model.dual(l)?;
    Ok(inv(model.ring(), &d, l)? == InvVector::block(model.n(), 2, 0))
}

/// The `k` with `inv(L, Λ₀) = λ_k`.
pub fn stratum_of(model: &Model, l: &Lattice) -> Result<usize> {
    let n = model.n();
    let w = inv(model.ring(), l, model.lambda0())?;
    (1..=n / 2).find(|&k| w == InvVector::lambda(n, k)).ok_or_else(|| {
        Error::consistency(
            "relative position to the standard lattice matches no stratum",
            json!({ "L0": model.lattice_json(l), "inv": w.0 }),
        )
    })
}

/// All points of the RZ window over the model's coefficient ring.
///
/// `pL₀/p²Λ₀` runs over the submodules of `(R/p²)^n` of length `n+1`, each
/// described by its reduction `U`, its socle part `W ⊇ U` and a torsor
/// coordinate `t ∈ Hom(U, F^n/W)`. Partitions by `W` run in parallel.
pub fn enumerate_rz(model: &Model) -> Result<Vec<Lattice>> {
    model.check_ceiling(model.estimate(Kind::Rz, 0, false))?;
    let n = model.n();
    let fq = model.field();
    let tops: Vec<(usize, Subspace)> = (1..=n)
        .filter(|&b| 2 * b >= n + 1)
        .flat_map(|b| grassmannian(fq, n, b).into_iter().map(move |w| (n + 1 - b, w)))
        .collect();
    let parts: Vec<Vec<Lattice>> = tops
        .par_iter()
        .map(|(a, w)| points_over(model, *a, w))
        .collect::<Result<_>>()?;
    canonical_sort(parts.into_iter().flatten().collect(), |l| model.lattice_json(l))
}

fn points_over(model: &Model, a: usize, w: &Subspace) -> Result<Vec<Lattice>> {
    let r = model.ring();
    let fq = model.field();
    let n = model.n();
    let free = w.free_positions();
    let q = fq.size() as usize;
    let slots = a * free.len();
    let p = r.from_int(r.p() as i64);
    let p2 = r.mul(p, p);
    let mut out = Vec::new();
    for u in subspaces_within(fq, w, a) {
        let mut idx = vec![0usize; slots];
        loop {
            let mut gens: Mat = vec![Vec::with_capacity(a + w.dim() + n); n];
            for (ui, urow) in u.rows().iter().enumerate() {
                let mut col: Vec<RingElem> = urow.iter().map(|&e| r.lift(e)).collect();
                for (f, &pos) in free.iter().enumerate() {
                    let t = idx[ui * free.len() + f] as Fe;
                    col[pos] = r.add(col[pos], r.mul(p, r.lift(t)));
                }
                push_col(&mut gens, &col);
            }
            for wrow in w.rows() {
                let col: Vec<RingElem> = wrow.iter().map(|&e| r.mul(p, r.lift(e))).collect();
                push_col(&mut gens, &col);
            }
            for i in 0..n {
                let col: Vec<RingElem> = (0..n).map(|c| if c == i { p2 } else { r.zero() }).collect();
                push_col(&mut gens, &col);
            }
            let l = normalize(r, 1, &gens)?;
            if is_rz_point(model, &l)? {
                out.push(l);
            }
            if !advance(&mut idx, q) {
                break;
            }
        }
    }
    Ok(out)
}

fn push_col(gens: &mut Mat, col: &[RingElem]) {
    for (g, &e) in gens.iter_mut().zip(col) {
        g.push(e);
    }
}

/// Odometer step; false after the last index.
pub(crate) fn advance(idx: &mut [usize], base: usize) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Reference enumeration: every `n × n` matrix over `R/p²` spans a candidate
/// `pL₀ ⊇ p²Λ₀`, and the distinct spans passing [`is_rz_point`] are kept.
pub fn enumerate_rz_naive(model: &Model) -> Result<Vec<Lattice>> {
    model.check_ceiling(model.estimate(Kind::Rz, 0, true))?;
    let r = model.ring();
    let n = model.n();
    let deg = r.m();
    let pp = (r.p() * r.p()) as usize;
    let mut digits = vec![0usize; n * n * deg];
    let p2 = r.from_int((r.p() * r.p()) as i64);
    let mut seen = HashSet::new();
    loop {
        let mut gens: Mat = vec![Vec::with_capacity(2 * n); n];
        for i in 0..n {
            for c in 0..n {
                let base = (i * n + c) * deg;
                let coeffs: Vec<u64> = digits[base..base + deg].iter().map(|&d| d as u64).collect();
                gens[i].push(r.from_coeffs(&coeffs));
            }
            for c in 0..n {
                gens[i].push(if c == i { p2 } else { r.zero() });
            }
        }
        seen.insert(normalize(r, 1, &gens)?);
        if !advance(&mut digits, pp) {
            break;
        }
    }
    let mut out = Vec::new();
    for l in seen {
        if is_rz_point(model, &l)? {
            out.push(l);
        }
    }
    canonical_sort(out, |l| model.lattice_json(l))
}
