//! Finite field `F_q`, `q = p^d`, presented as `F_p[x]/(f)`.
//!
//! An element is a `u16` index whose base-`p` digits are its coordinates in
//! the power basis. Multiplication runs through log/exp tables.

use crate::error::{Error, Result};

pub type Fe = u16;

const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone)]
pub struct Fq {
    p: u32,
    d: usize,
    q: u32,
    f: Vec<u32>,
    exp: Vec<Fe>,
    log: Vec<u32>,
    add_tab: Option<Vec<Fe>>,
    neg_tab: Vec<Fe>,
    frob_tab: Vec<Fe>,
    frob_inv_tab: Vec<Fe>,
}

impl Fq {
    /// Builds the field from a monic irreducible `f` of degree `d` over `F_p`,
    /// given by its low coefficients `f_0, .., f_{d-1}`.
    pub fn new(p: u32, f_low: &[u32]) -> Result<Self> {
        let d = f_low.len();
        let q64 = (p as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
        if q64 > 1 << 16 {
            return Err(Error::InvalidParams(format!("residue field of size {q64} is too large")));
        }
        let q = q64 as u32;
        let mut fq = Fq {
            p,
            d,
            q,
            f: f_low.to_vec(),
            exp: Vec::new(),
            log: vec![0; q as usize],
            add_tab: None,
            neg_tab: Vec::new(),
            frob_tab: Vec::new(),
            frob_inv_tab: Vec::new(),
        };
        fq.neg_tab = (0..q).map(|a| fq.digit_map(a as Fe, |x| (p - x) % p)).collect();
        if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0 as Fe; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = fq.add_slow(a as Fe, b as Fe);
                }
            }
            fq.add_tab = Some(t);
        }
        fq.build_log_tables()?;
        fq.frob_tab = (0..q).map(|a| fq.pow(a as Fe, p as u64)).collect();
        let mut inv = vec![0 as Fe; q as usize];
        for a in 0..q {
            inv[fq.frob_tab[a as usize] as usize] = a as Fe;
        }
        fq.frob_inv_tab = inv;
        Ok(fq)
    }

    fn digit_map(&self, a: Fe, g: impl Fn(u32) -> u32) -> Fe {
        let mut a = a as u32;
        let mut out = 0u32;
        let mut w = 1u32;
        for _ in 0..self.d {
            out += g(a % self.p) * w;
            a /= self.p;
            w *= self.p;
        }
        out as Fe
    }

    fn add_slow(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a as u32, b as u32);
        let mut out = 0u32;
        let mut w = 1u32;
        for _ in 0..self.d {
            out += ((a % self.p + b % self.p) % self.p) * w;
            a /= self.p;
            b /= self.p;
            w *= self.p;
        }
        out as Fe
    }

    fn digits(&self, a: Fe) -> Vec<u32> {
        let mut a = a as u32;
        (0..self.d)
            .map(|_| {
                let r = a % self.p;
                a /= self.p;
                r
            })
            .collect()
    }

    fn from_digits(&self, c: &[u32]) -> Fe {
        c.iter().rev().fold(0u32, |acc, &x| acc * self.p + x) as Fe
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let (x, y) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut t = vec![0u64; 2 * self.d];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                t[i + j] = (t[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        for deg in (self.d..2 * self.d).rev() {
            let c = t[deg];
            if c == 0 {
                continue;
            }
            t[deg] = 0;
            for (i, &fi) in self.f.iter().enumerate() {
                let idx = deg - self.d + i;
                t[idx] = (t[idx] + (p - c) * fi as u64) % p;
            }
        }
        let out: Vec<u32> = t[..self.d].iter().map(|&v| v as u32).collect();
        self.from_digits(&out)
    }

    fn build_log_tables(&mut self) -> Result<()> {
        let order = self.q - 1;
        if order == 0 {
            return Err(Error::InvalidParams("field of size 1".into()));
        }
        for g in 1..self.q {
            let g = g as Fe;
            let mut exp = Vec::with_capacity(order as usize);
            let mut x: Fe = 1;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.mul_slow(x, g);
            }
            if ok && x == 1 {
                for (i, &e) in exp.iter().enumerate() {
                    self.log[e as usize] = i as u32;
                }
                let doubled: Vec<Fe> = exp.iter().chain(exp.iter()).copied().collect();
                self.exp = doubled;
                return Ok(());
            }
        }
        Err(Error::InvalidParams("defining polynomial is not primitive-searchable".into()))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Coordinates of `a` in the power basis, low degree first.
    pub fn coords(&self, a: Fe) -> Vec<u32> {
        self.digits(a)
    }

    pub fn from_coords(&self, c: &[u32]) -> Fe {
        self.from_digits(c)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.add_tab {
            Some(t) => t[(a as u32 * self.q + b as u32) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.neg_tab[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// `a^p`.
    #[inline]
    pub fn frob(&self, a: Fe) -> Fe {
        self.frob_tab[a as usize]
    }

    /// Inverse of `a ↦ a^p`.
    #[inline]
    pub fn frob_inv(&self, a: Fe) -> Fe {
        self.frob_inv_tab[a as usize]
    }

    /// `a^(p^k)` for any integer `k`.
    pub fn frob_pow(&self, a: Fe, k: i64) -> Fe {
        let k = k.rem_euclid(self.d as i64);
        (0..k).fold(a, |x, _| self.frob(x))
    }

    /// Elements of the subfield of size `p^e`, in increasing index order.
    pub fn subfield(&self, e: usize) -> Vec<Fe> {
        (0..self.q)
            .map(|a| a as Fe)
            .filter(|&a| self.frob_pow(a, e as i64) == a)
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(|a| a as Fe)
    }
}
