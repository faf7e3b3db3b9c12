//! Lattices in `R^n[1/p]` and their relative position.
//!
//! A [`Lattice`] is stored as `p^{-shift}` times the column span of an upper
//! triangular integral basis in canonical Hermite form: column `j` has the
//! pivot `p^{d_j}` in row `j`, zeros below, and every entry above a pivot is
//! reduced coordinatewise modulo `p^{d_i}`. The shift is the least one making
//! the basis integral, so set equality is representation equality.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::{RingData, RingElem};
use crate::error::{Error, Result};

/// Guard digits withheld from every normal form.
pub const GUARD: u32 = 2;

/// Row-major matrix over `R`.
pub type Mat = Vec<Vec<RingElem>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    shift: i32,
    basis: Mat,
}

/// Nonincreasing integer vector: a relative position or cocharacter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvVector(pub Vec<i32>);

impl InvVector {
    pub fn sorted(mut v: Vec<i32>) -> Self {
        v.sort_unstable_by(|a, b| b.cmp(a));
        InvVector(v)
    }

    pub fn total(&self) -> i32 {
        self.0.iter().sum()
    }

    /// `-reverse(self)`, the invariant with the arguments swapped.
    pub fn swapped(&self) -> Self {
        InvVector(self.0.iter().rev().map(|a| -a).collect())
    }

    /// `λ_k = (1^{k-1}, 0^{n-2k+1}, (-1)^k)`.
    pub fn lambda(n: usize, k: usize) -> Self {
        Self::block(n, k - 1, k)
    }

    /// `(1^a, 0, .., 0, (-1)^b)`.
    pub fn block(n: usize, a: usize, b: usize) -> Self {
        let mut v = vec![0; n];
        v[..a].fill(1);
        v[n - b..].fill(-1);
        InvVector(v)
    }
}

impl fmt::Display for InvVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Smith form `left · A · right = diag(p^{exps})` of a square matrix.
#[derive(Debug, Clone)]
pub struct Snf {
    pub exps: Vec<u32>,
    pub left: Mat,
    pub right: Mat,
}

fn identity(ring: &RingData, n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect()
}

pub fn mat_mul(ring: &RingData, a: &Mat, b: &Mat) -> Mat {
    let (rows, inner, cols) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = vec![vec![ring.zero(); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] = ring.add(out[i][j], ring.mul(aik, b[k][j]));
            }
        }
    }
    out
}

/// Smith form over `R` by least-valuation pivoting.
pub fn snf(ring: &RingData, a: &Mat) -> Result<Snf> {
    let n = a.len();
    let mut a = a.clone();
    let mut left = identity(ring, n);
    let mut right = identity(ring, n);
    let mut exps = Vec::with_capacity(n);
    for t in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &e) in row.iter().enumerate().skip(t) {
                if let Some(v) = ring.valuation(e) {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let (v, pi, pj) = best.ok_or_else(|| {
            Error::Precision("matrix is singular to the available precision".into())
        })?;
        a.swap(t, pi);
        left.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in right.iter_mut() {
            row.swap(t, pj);
        }
        let uinv = ring.invert(ring.div_pow_p(a[t][t], v))?;
        for j in 0..n {
            a[t][j] = ring.mul(a[t][j], uinv);
            left[t][j] = ring.mul(left[t][j], uinv);
        }
        for i in t + 1..n {
            if a[i][t].is_zero() {
                continue;
            }
            let f = ring.div_pow_p(a[i][t], v);
            for j in 0..n {
                a[i][j] = ring.sub(a[i][j], ring.mul(f, a[t][j]));
                left[i][j] = ring.sub(left[i][j], ring.mul(f, left[t][j]));
            }
        }
        for j in t + 1..n {
            if a[t][j].is_zero() {
                continue;
            }
            let f = ring.div_pow_p(a[t][j], v);
            a[t][j] = ring.zero();
            for row in right.iter_mut() {
                row[j] = ring.sub(row[j], ring.mul(f, row[t]));
            }
        }
        exps.push(v);
    }
    Ok(Snf { exps, left, right })
}

impl Lattice {
    /// The standard lattice `Λ₀ = R^n`.
    pub fn standard(ring: &RingData, n: usize) -> Self {
        Lattice { shift: 0, basis: identity(ring, n) }
    }

    /// `span{p^{a_i} y_i}`.
    pub fn diagonal(ring: &RingData, exps: &[i32]) -> Result<Self> {
        let lo = *exps.iter().min().unwrap_or(&0);
        let n = exps.len();
        let gens: Mat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { ring.from_int(ring.pow_p((exps[i] - lo) as u32) as i64) } else { ring.zero() })
                    .collect()
            })
            .collect();
        normalize(ring, -lo, &gens)
    }

    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// The canonical integral basis, row-major.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Basis columns as vectors.
    pub fn columns(&self) -> Vec<Vec<RingElem>> {
        let n = self.n();
        (0..n).map(|j| (0..n).map(|i| self.basis[i][j]).collect()).collect()
    }

    /// Pivot exponents `d_j` of the canonical basis.
    pub fn pivot_exps(&self, ring: &RingData) -> Vec<u32> {
        (0..self.n()).map(|j| ring.valuation(self.basis[j][j]).unwrap_or(ring.prec())).collect()
    }

    /// `p^k · L`.
    pub fn scale(&self, k: i32) -> Self {
        Lattice { shift: self.shift - k, basis: self.basis.clone() }
    }

    /// Basis multiplied out to shift `at`, i.e. `p^{at - shift} · basis`; needs `at ≥ shift`.
    pub fn generators_at(&self, ring: &RingData, at: i32) -> Mat {
        let k = (at - self.shift) as u32;
        self.basis.iter().map(|row| row.iter().map(|&e| ring.mul_pow_p(e, k)).collect()).collect()
    }

    /// Entrywise `σ^power` on the basis.
    pub fn frobenius(&self, ring: &RingData, power: i64) -> Result<Self> {
        let gens: Mat = self
            .basis
            .iter()
            .map(|row| row.iter().map(|&e| ring.frobenius(e, power)).collect())
            .collect();
        normalize(ring, self.shift, &gens)
    }

    /// Image under a matrix `U` acting on column vectors.
    pub fn transform(&self, ring: &RingData, u: &Mat) -> Result<Self> {
        normalize(ring, self.shift, &mat_mul(ring, u, &self.basis))
    }

    pub fn to_json(&self, ring: &RingData) -> Value {
        let rows: Vec<Value> = self
            .basis
            .iter()
            .map(|row| Value::Array(row.iter().map(|&e| ring.elem_json(e)).collect()))
            .collect();
        json!({ "shift": self.shift, "basis": rows })
    }

    pub fn from_json(ring: &RingData, v: &Value) -> Result<Self> {
        let bad = || Error::InvalidParams("malformed lattice record".into());
        let shift = v.get("shift").and_then(Value::as_i64).ok_or_else(bad)? as i32;
        let rows = v.get("basis").and_then(Value::as_array).ok_or_else(bad)?;
        let mut gens = Vec::with_capacity(rows.len());
        for row in rows {
            let entries = row.as_array().ok_or_else(bad)?;
            let mut r = Vec::with_capacity(entries.len());
            for e in entries {
                let c: Vec<u64> = e
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|x| x.as_u64().ok_or_else(bad))
                    .collect::<Result<_>>()?;
                r.push(ring.from_coeffs(&c));
            }
            gens.push(r);
        }
        normalize(ring, shift, &gens)
    }

    /// Smith form of the basis together with its largest exponent.
    fn smith(&self, ring: &RingData) -> Result<(Snf, u32)> {
        let s = snf(ring, &self.basis)?;
        let a = *s.exps.iter().max().unwrap_or(&0);
        Ok((s, a))
    }

    /// Coordinates of `p^{-vshift} x` in this lattice's basis.
    ///
    /// Exact up to `p^{N-a}` where `p^a` is the largest elementary divisor of
    /// the basis; fails with [`Error::NotContained`] when the vector is not in
    /// the lattice.
    pub fn coordinates(&self, ring: &RingData, vshift: i32, x: &[RingElem]) -> Result<Vec<RingElem>> {
        self.coordinate_map(ring)?.apply(ring, vshift, x)
    }

    /// Precomputed solver for [`Lattice::coordinates`].
    pub fn coordinate_map(&self, ring: &RingData) -> Result<CoordinateMap> {
        let (snf, _) = self.smith(ring)?;
        Ok(CoordinateMap { shift: self.shift, snf })
    }
}

/// Solves `p^{-shift} B c = p^{-vshift} x` through a cached Smith form.
#[derive(Debug, Clone)]
pub struct CoordinateMap {
    shift: i32,
    snf: Snf,
}

impl CoordinateMap {
    pub fn apply(&self, ring: &RingData, vshift: i32, x: &[RingElem]) -> Result<Vec<RingElem>> {
        let s = &self.snf;
        let n = x.len();
        let mut y = vec![ring.zero(); n];
        for i in 0..n {
            for k in 0..n {
                y[i] = ring.add(y[i], ring.mul(s.left[i][k], x[k]));
            }
        }
        for i in 0..n {
            let e = self.shift - vshift - s.exps[i] as i32;
            y[i] = if e >= 0 {
                ring.mul_pow_p(y[i], e as u32)
            } else {
                let k = (-e) as u32;
                match ring.valuation(y[i]) {
                    Some(v) if v < k => return Err(Error::NotContained),
                    _ => ring.div_pow_p(y[i], k),
                }
            };
        }
        let mut c = vec![ring.zero(); n];
        for i in 0..n {
            for k in 0..n {
                c[i] = ring.add(c[i], ring.mul(s.right[i][k], y[k]));
            }
        }
        Ok(c)
    }
}

/// Canonical form of `p^{-shift} · span(columns of gens)`.
///
/// Fails with a precision error when the span does not contain
/// `p^{N-GUARD-1} R^n`, i.e. when some elementary divisor would come within
/// the guard digits of `N`.
pub fn normalize(ring: &RingData, shift: i32, gens: &Mat) -> Result<Lattice> {
    let n = gens.len();
    let ncols = gens.first().map_or(0, |r| r.len());
    let prec = ring.prec();
    let mut cols: Vec<Vec<RingElem>> = (0..ncols)
        .map(|j| (0..n).map(|i| gens[i][j]).collect::<Vec<_>>())
        .filter(|c| c.iter().any(|e| !e.is_zero()))
        .collect();
    let mut basis_cols: Vec<Vec<RingElem>> = vec![Vec::new(); n];
    let mut d = vec![0u32; n];
    for i in (0..n).rev() {
        let mut best: Option<(u32, usize)> = None;
        for (idx, c) in cols.iter().enumerate() {
            if let Some(v) = ring.valuation(c[i]) {
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, idx));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let (v, idx) = best.ok_or_else(|| Error::Precision(format!("no pivot in row {i}")))?;
        if v + GUARD >= prec {
            return Err(Error::Precision(format!("pivot p^{v} in row {i} reaches the guard digits")));
        }
        let mut piv = cols.remove(idx);
        let uinv = ring.invert(ring.div_pow_p(piv[i], v))?;
        for e in piv.iter_mut().take(i + 1) {
            *e = ring.mul(*e, uinv);
        }
        for c in cols.iter_mut() {
            if c[i].is_zero() {
                continue;
            }
            let f = ring.div_pow_p(c[i], v);
            for r in 0..=i {
                c[r] = ring.sub(c[r], ring.mul(f, piv[r]));
            }
        }
        if v > 0 {
            let extra: Vec<RingElem> = piv.iter().map(|&e| ring.mul_pow_p(e, prec - v)).collect();
            if extra.iter().any(|e| !e.is_zero()) {
                cols.push(extra);
            }
        }
        cols.retain(|c| c.iter().any(|e| !e.is_zero()));
        d[i] = v;
        basis_cols[i] = piv;
    }
    for j in 0..n {
        for i in (0..j).rev() {
            let (q, _) = ring.divmod_pow_p(basis_cols[j][i], d[i]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = basis_cols.split_at_mut(j);
            let (ci, cj) = (&head[i], &mut tail[0]);
            for r in 0..=i {
                cj[r] = ring.sub(cj[r], ring.mul(q, ci[r]));
            }
        }
    }
    let mut basis: Mat = (0..n).map(|i| (0..n).map(|j| basis_cols[j][i]).collect()).collect();
    check_precision(ring, &basis, &d)?;
    let mut shift = shift;
    while d.iter().all(|&x| x > 0) && basis.iter().flatten().all(|&e| ring.valuation(e).map_or(true, |v| v > 0)) {
        for row in basis.iter_mut() {
            for e in row.iter_mut() {
                *e = ring.div_pow_p(*e, 1);
            }
        }
        for x in d.iter_mut() {
            *x -= 1;
        }
        shift -= 1;
    }
    Ok(Lattice { shift, basis })
}

/// Checks that the span of a canonical basis contains `p^{N-GUARD-1} R^n`.
fn check_precision(ring: &RingData, basis: &Mat, d: &[u32]) -> Result<()> {
    let n = basis.len();
    let t = ring.prec() - GUARD - 1;
    for i in 0..n {
        let mut x = vec![ring.zero(); n];
        x[i] = ring.from_int(ring.pow_p(t) as i64);
        for r in (0..n).rev() {
            if x[r].is_zero() {
                continue;
            }
            match ring.valuation(x[r]) {
                Some(v) if v >= d[r] => {
                    let f = ring.div_pow_p(x[r], d[r]);
                    for (k, xk) in x.iter_mut().enumerate().take(r + 1) {
                        *xk = ring.sub(*xk, ring.mul(f, basis[k][r]));
                    }
                }
                _ => {
                    return Err(Error::Precision(
                        "an elementary divisor reaches the guard digits".into(),
                    ))
                }
            }
        }
    }
    Ok(())
}

/// Standard dual `{x : x·L ⊆ R}` for the dot product.
pub fn std_dual(ring: &RingData, l: &Lattice) -> Result<Lattice> {
    let (gens, shift) = std_dual_generators(ring, l)?;
    normalize(ring, shift, &gens)
}

/// Generators and shift of the standard dual, before normalization.
pub(crate) fn std_dual_generators(ring: &RingData, l: &Lattice) -> Result<(Mat, i32)> {
    let (s, a) = l.smith(ring)?;
    let n = l.n();
    let gens: Mat = (0..n)
        .map(|r| (0..n).map(|c| ring.mul_pow_p(s.left[c][r], a - s.exps[c])).collect())
        .collect();
    Ok((gens, a as i32 - l.shift))
}

/// `L1 + L2`.
pub fn sum(ring: &RingData, l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    let at = l1.shift.max(l2.shift);
    let (g1, g2) = (l1.generators_at(ring, at), l2.generators_at(ring, at));
    let gens: Mat = g1.into_iter().zip(g2).map(|(mut a, b)| {
        a.extend(b);
        a
    }).collect();
    normalize(ring, at, &gens)
}

/// `L1 ∩ L2`, as the standard dual of the sum of standard duals.
pub fn intersect(ring: &RingData, l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    let d = sum(ring, &std_dual(ring, l1)?, &std_dual(ring, l2)?)?;
    std_dual(ring, &d)
}

/// Relative position `inv(L1, L2)`.
pub fn inv(ring: &RingData, l1: &Lattice, l2: &Lattice) -> Result<InvVector> {
    let (s2, a2) = l2.smith(ring)?;
    let n = l1.n();
    let pb = mat_mul(ring, &s2.left, &l1.basis);
    let x: Mat = pb
        .into_iter()
        .enumerate()
        .map(|(i, row)| row.into_iter().map(|e| ring.mul_pow_p(e, a2 - s2.exps[i])).collect())
        .collect();
    let sx = snf(ring, &x)?;
    let offset = l2.shift - l1.shift - a2 as i32;
    let v = (0..n).map(|i| sx.exps[i] as i32 + offset).collect();
    Ok(InvVector::sorted(v))
}

/// Length of `L2 / L1`; [`Error::NotContained`] unless `L1 ⊆ L2`.
pub fn colength(ring: &RingData, l1: &Lattice, l2: &Lattice) -> Result<u32> {
    let v = inv(ring, l1, l2)?;
    if v.0.iter().any(|&a| a < 0) {
        return Err(Error::NotContained);
    }
    Ok(v.total() as u32)
}

/// `L1 ⊆ L2`.
pub fn contains(ring: &RingData, l2: &Lattice, l1: &Lattice) -> Result<bool> {
    Ok(inv(ring, l1, l2)?.0.iter().all(|&a| a >= 0))
}

/// Colength if `L1 ⊆ L2`, `None` otherwise.
pub fn colength_if_contained(ring: &RingData, l1: &Lattice, l2: &Lattice) -> Result<Option<u32>> {
    match colength(ring, l1, l2) {
        Ok(c) => Ok(Some(c)),
        Err(Error::NotContained) => Ok(None),
        Err(e) => Err(e),
    }
}

/// A random lattice in the window `pΛ₀ ⊆ L ⊆ p^{-1}Λ₀`.
pub fn random_window_lattice<G: Rng + ?Sized>(ring: &RingData, n: usize, rng: &mut G) -> Result<Lattice> {
    let p2 = ring.pow_p(2.min(ring.prec())) as u64;
    let m = ring.m();
    let mut gens: Mat = vec![Vec::with_capacity(2 * n); n];
    let ncols = rng.gen_range(0..=n);
    for _ in 0..ncols {
        for row in gens.iter_mut() {
            let c: Vec<u64> = (0..m).map(|_| rng.gen_range(0..p2)).collect();
            row.push(ring.from_coeffs(&c));
        }
    }
    for (i, row) in gens.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j { ring.from_int(p2 as i64) } else { ring.zero() });
        }
    }
    normalize(ring, 1, &gens)
}

/// A random matrix in `GL_n(R)`, as a product of random unipotent triangular
/// factors and a random unit diagonal.
pub fn random_unimodular<G: Rng + ?Sized>(ring: &RingData, n: usize, rng: &mut G) -> Mat {
    let mut lower = identity(ring, n);
    let mut upper = identity(ring, n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                lower[i][j] = ring.random(rng);
            } else if i < j {
                upper[i][j] = ring.random(rng);
            } else {
                upper[i][i] = ring.random_unit(rng);
            }
        }
    }
    mat_mul(ring, &lower, &upper)
}
