//! The truncated unramified coefficient ring `R = W_N(F_{p^m})`.
//!
//! `R` is presented as `(Z/p^N)[x]/(F)`, where `F` is a monic lift of an
//! irreducible polynomial over `F_p`. The Frobenius lift `σ` is determined by
//! the root of `F` congruent to `x^p`, found by Newton iteration.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Fq};

/// Largest residue degree an element can carry.
pub const MAX_DEG: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingParams {
    pub p: u32,
    pub m: usize,
    #[serde(rename = "N")]
    pub prec: u32,
}

impl RingParams {
    pub fn new(p: u32, m: usize, prec: u32) -> Self {
        RingParams { p, m, prec }
    }
}

/// Coordinates of an element of `R` in the basis `1, x, .., x^{m-1}`.
///
/// Only the first `m` slots are meaningful; the rest stay zero, so derived
/// equality and ordering agree with equality in `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RingElem {
    c: [u32; MAX_DEG],
}

impl RingElem {
    pub fn coeffs(&self, m: usize) -> &[u32] {
        &self.c[..m]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

/// Precomputed images `σ^k(x^i)` for `0 ≤ k, i < m`.
#[derive(Debug, Clone)]
pub struct FrobeniusTable {
    pub sigma_of_x: RingElem,
    powers: Vec<Vec<RingElem>>,
}

#[derive(Debug)]
pub struct RingData {
    params: RingParams,
    modulus: u64,
    pow_p: Vec<u64>,
    f_low: Vec<u32>,
    frob: FrobeniusTable,
    field: Fq,
}

/// Shared handle to a ring context.
pub type CoeffRing = Arc<RingData>;

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| p % d != 0)
}

/// Remainder of `a` modulo monic `b` over `F_p` (both low degree first).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * bi % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(f_low: &[u32], p: u32) -> bool {
    let m = f_low.len();
    let mut f = f_low.to_vec();
    f.push(1);
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                g.push((t % p as u64) as u32);
                t /= p as u64;
            }
            g.push(1);
            if poly_rem(&f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible polynomials of degree `m` over `F_p`, as low-coefficient
/// vectors, in increasing order of `Σ f_i p^i`.
pub fn irreducibles(p: u32, m: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(m as u32);
    (0..count).filter_map(move |idx| {
        let mut t = idx;
        let f: Vec<u32> = (0..m)
            .map(|_| {
                let r = (t % p as u64) as u32;
                t /= p as u64;
                r
            })
            .collect();
        is_irreducible(&f, p).then_some(f)
    })
}

/// Builds a ring context.
///
/// `F` is the `seed`-th monic irreducible of degree `m` in increasing order
/// (wrapping), so seed 0 gives the least one.
pub fn make_ring(params: RingParams, seed: u64) -> Result<CoeffRing> {
    let RingParams { p, m, prec } = params;
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("p = {p} is not prime")));
    }
    if m == 0 || m > MAX_DEG {
        return Err(Error::InvalidParams(format!("m = {m} must lie in 1..={MAX_DEG}")));
    }
    if prec == 0 {
        return Err(Error::InvalidParams("N must be positive".into()));
    }
    let modulus = (p as u64)
        .checked_pow(prec)
        .filter(|&v| v < 1 << 32)
        .ok_or(Error::Overflow { p, prec })?;
    let all: Vec<Vec<u32>> = irreducibles(p, m).collect();
    let f_low = all[(seed % all.len() as u64) as usize].clone();
    let field = Fq::new(p, &f_low)?;
    let pow_p = (0..=prec).map(|i| (p as u64).pow(i)).collect();
    let mut data = RingData {
        params,
        modulus,
        pow_p,
        f_low,
        frob: FrobeniusTable { sigma_of_x: RingElem::default(), powers: Vec::new() },
        field,
    };
    data.frob = data.build_frobenius();
    Ok(Arc::new(data))
}

impl RingData {
    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn prec(&self) -> u32 {
        self.params.prec
    }

    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^i` as an integer, `0 ≤ i ≤ N`.
    pub fn pow_p(&self, i: u32) -> u64 {
        self.pow_p[i as usize]
    }

    /// Coefficients of the monic defining polynomial, low degree first,
    /// including the leading 1.
    pub fn f_coeffs(&self) -> Vec<u32> {
        let mut f = self.f_low.clone();
        f.push(1);
        f
    }

    pub fn frobenius_table(&self) -> &FrobeniusTable {
        &self.frob
    }

    /// The residue field `F_{p^m}`, presented by `F mod p`.
    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn zero(&self) -> RingElem {
        RingElem::default()
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> RingElem {
        let mut e = RingElem::default();
        e.c[0] = v.rem_euclid(self.modulus as i64) as u32;
        e
    }

    /// The generator `x` (for `m = 1`, the integer `-f_0`).
    pub fn gen(&self) -> RingElem {
        if self.m() == 1 {
            return self.from_int(-(self.f_low[0] as i64));
        }
        let mut e = RingElem::default();
        e.c[1] = 1;
        e
    }

    pub fn from_coeffs(&self, c: &[u64]) -> RingElem {
        let mut e = RingElem::default();
        for (i, &v) in c.iter().enumerate().take(self.m()) {
            e.c[i] = (v % self.modulus) as u32;
        }
        e
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        let mut e = RingElem::default();
        for i in 0..self.m() {
            let s = a.c[i] as u64 + b.c[i] as u64;
            e.c[i] = (if s >= self.modulus { s - self.modulus } else { s }) as u32;
        }
        e
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        let mut e = RingElem::default();
        for i in 0..self.m() {
            e.c[i] = if a.c[i] == 0 { 0 } else { (self.modulus - a.c[i] as u64) as u32 };
        }
        e
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        let m = self.m();
        let md = self.modulus;
        if m == 1 {
            return self.from_coeffs(&[a.c[0] as u64 * b.c[0] as u64 % md]);
        }
        let mut t = [0u64; 2 * MAX_DEG];
        for i in 0..m {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..m {
                t[i + j] = (t[i + j] + a.c[i] as u64 * b.c[j] as u64) % md;
            }
        }
        for deg in (m..2 * m - 1).rev() {
            let c = t[deg];
            if c == 0 {
                continue;
            }
            t[deg] = 0;
            let negc = md - c;
            for (i, &fi) in self.f_low.iter().enumerate() {
                let idx = deg - m + i;
                t[idx] = (t[idx] + negc * fi as u64) % md;
            }
        }
        let mut e = RingElem::default();
        for i in 0..m {
            e.c[i] = t[i] as u32;
        }
        e
    }

    /// Multiplication by a rational integer.
    pub fn scale(&self, a: RingElem, k: i64) -> RingElem {
        let k = k.rem_euclid(self.modulus as i64) as u64;
        let mut e = RingElem::default();
        for i in 0..self.m() {
            e.c[i] = (a.c[i] as u64 * k % self.modulus) as u32;
        }
        e
    }

    /// `p^k · a`.
    pub fn mul_pow_p(&self, a: RingElem, k: u32) -> RingElem {
        if k >= self.prec() {
            return RingElem::default();
        }
        self.scale(a, self.pow_p(k) as i64)
    }

    /// `a / p^k`, coordinatewise; the caller guarantees `p^k | a`.
    /// The result has its top `k` digits zero.
    pub fn div_pow_p(&self, a: RingElem, k: u32) -> RingElem {
        let d = self.pow_p(k.min(self.prec())) as u32;
        let mut e = RingElem::default();
        for i in 0..self.m() {
            debug_assert_eq!(a.c[i] % d, 0);
            e.c[i] = a.c[i] / d;
        }
        e
    }

    /// Splits `a = quo·p^k + rem` coordinatewise with `0 ≤ rem < p^k`.
    pub fn divmod_pow_p(&self, a: RingElem, k: u32) -> (RingElem, RingElem) {
        let d = self.pow_p(k.min(self.prec())) as u32;
        let (mut q, mut r) = (RingElem::default(), RingElem::default());
        for i in 0..self.m() {
            q.c[i] = a.c[i] / d;
            r.c[i] = a.c[i] % d;
        }
        (q, r)
    }

    /// Largest `v < N` with `a ∈ p^v R`, or `None` when `a = 0` in `R`
    /// (meaning "≥ N": zero to the available precision).
    pub fn valuation(&self, a: RingElem) -> Option<u32> {
        let mut v = self.prec();
        for &c in &a.c[..self.m()] {
            if c != 0 {
                v = v.min(c.trailing_zeros_base(self.p()));
            }
        }
        (v < self.prec()).then_some(v)
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        self.valuation(a) == Some(0)
    }

    /// Inverse of a unit, lifted from the residue field by Newton iteration.
    pub fn invert(&self, a: RingElem) -> Result<RingElem> {
        let r = self.residue(a);
        let r_inv = self.field.inv(r).ok_or(Error::NonUnit)?;
        let two = self.from_int(2);
        let mut x = self.lift(r_inv);
        for _ in 0..=self.prec() {
            let ax = self.mul(a, x);
            if ax == self.one() {
                return Ok(x);
            }
            x = self.mul(x, self.sub(two, ax));
        }
        debug_assert_eq!(self.mul(a, x), self.one());
        Ok(x)
    }

    /// Reduction modulo `p`.
    pub fn residue(&self, a: RingElem) -> Fe {
        let p = self.p();
        let digits: Vec<u32> = a.c[..self.m()].iter().map(|&c| c % p).collect();
        self.field.from_coords(&digits)
    }

    /// The digit lift of a residue: coordinates in `[0, p)`.
    pub fn lift(&self, e: Fe) -> RingElem {
        let mut out = RingElem::default();
        for (i, d) in self.field.coords(e).into_iter().enumerate() {
            out.c[i] = d;
        }
        out
    }

    fn eval_f(&self, s: RingElem) -> RingElem {
        let mut acc = self.one();
        for &fi in self.f_low.iter().rev() {
            acc = self.add(self.mul(acc, s), self.from_int(fi as i64));
        }
        acc
    }

    fn eval_f_prime(&self, s: RingElem) -> RingElem {
        let m = self.m();
        let mut acc = self.from_int(m as i64);
        for i in (1..m).rev() {
            acc = self.add(self.mul(acc, s), self.from_int(i as i64 * self.f_low[i] as i64));
        }
        acc
    }

    fn pow(&self, a: RingElem, mut e: u64) -> RingElem {
        let (mut base, mut acc) = (a, self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_frobenius(&self) -> FrobeniusTable {
        let m = self.m();
        let mut s = self.pow(self.gen(), self.p() as u64);
        if m > 1 {
            for _ in 0..=self.prec() + 1 {
                let fs = self.eval_f(s);
                if fs.is_zero() {
                    break;
                }
                let d = self.invert(self.eval_f_prime(s)).expect("separable polynomial");
                s = self.sub(s, self.mul(fs, d));
            }
        } else {
            s = self.gen();
        }
        let mut images = vec![self.gen()];
        for k in 1..m {
            let prev = images[k - 1];
            images.push(self.apply_sub(prev, s));
        }
        let powers = images
            .iter()
            .map(|&img| {
                let mut row = vec![self.one()];
                for i in 1..m {
                    row.push(self.mul(row[i - 1], img));
                }
                row
            })
            .collect();
        FrobeniusTable { sigma_of_x: s, powers }
    }

    /// Evaluates the coordinate polynomial of `a` at `s`.
    fn apply_sub(&self, a: RingElem, s: RingElem) -> RingElem {
        let mut acc = RingElem::default();
        for i in (0..self.m()).rev() {
            acc = self.add(self.mul(acc, s), self.from_coeffs(&[a.c[i] as u64]));
        }
        acc
    }

    /// `σ^power(a)`; negative powers are reduced modulo `m`.
    pub fn frobenius(&self, a: RingElem, power: i64) -> RingElem {
        let m = self.m();
        let k = power.rem_euclid(m as i64) as usize;
        if k == 0 {
            return a;
        }
        let row = &self.frob.powers[k];
        let md = self.modulus;
        let mut acc = [0u64; MAX_DEG];
        for i in 0..m {
            if a.c[i] == 0 {
                continue;
            }
            for (t, slot) in acc.iter_mut().enumerate().take(m) {
                *slot = (*slot + a.c[i] as u64 * row[i].c[t] as u64) % md;
            }
        }
        let mut e = RingElem::default();
        for t in 0..m {
            e.c[t] = acc[t] as u32;
        }
        e
    }

    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElem {
        let mut e = RingElem::default();
        for i in 0..self.m() {
            e.c[i] = rng.gen_range(0..self.modulus) as u32;
        }
        e
    }

    pub fn random_unit<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElem {
        loop {
            let a = self.random(rng);
            if self.is_unit(a) {
                return a;
            }
        }
    }

    /// JSON form of an element: its coordinate vector.
    pub fn elem_json(&self, a: RingElem) -> serde_json::Value {
        serde_json::Value::from(a.coeffs(self.m()).to_vec())
    }
}

trait TrailingZerosBase {
    fn trailing_zeros_base(self, p: u32) -> u32;
}

impl TrailingZerosBase for u32 {
    fn trailing_zeros_base(mut self, p: u32) -> u32 {
        if p == 2 {
            return self.trailing_zeros();
        }
        let mut v = 0;
        while self % p == 0 {
            self /= p;
            v += 1;
        }
        v
    }
}
