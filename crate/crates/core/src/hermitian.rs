//! The split hermitian model on `Λ₀ = R^n`.
//!
//! In the standard basis `y₁, .., y_n` the pairing is
//! `b(x, y) = Σ x_i σ(y_{n+1-i})`: linear in `x`, `σ`-semilinear in `y`, with
//! `b(Φ²x, y) = σ(b(y, x))` where `Φ²` acts coordinatewise as `σ²`.

use crate::coeff::{CoeffRing, RingElem};
use crate::error::{Error, Result};
use crate::field::{Fe, Fq};
use crate::lattice::{self, normalize, Lattice, Mat};
use crate::subspace::nullspace;

pub use crate::subspace::Subspace;

#[derive(Debug, Clone)]
pub struct HermitianSpace {
    ring: CoeffRing,
    n: usize,
}

/// A residue pairing `b̄(x, y) = xᵀ Ḡ y^{(p)}` on `F_q^n`.
#[derive(Debug, Clone)]
pub struct ResiduePairing {
    ring: CoeffRing,
    gram: Vec<Vec<Fe>>,
}

impl HermitianSpace {
    /// Rejects odd residue degree.
    pub fn new(ring: CoeffRing, n: usize) -> Result<Self> {
        if ring.m() % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "the hermitian model needs even residue degree, got m = {}",
                ring.m()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        Ok(HermitianSpace { ring, n })
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn field(&self) -> &Fq {
        self.ring.field()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Λ₀`.
    pub fn standard(&self) -> Lattice {
        Lattice::standard(&self.ring, self.n)
    }

    pub fn pair_b(&self, x: &[RingElem], y: &[RingElem]) -> RingElem {
        let r = &self.ring;
        let n = self.n;
        (0..n).fold(r.zero(), |acc, i| r.add(acc, r.mul(x[i], r.frobenius(y[n - 1 - i], 1))))
    }

    /// Coordinatewise `σ^{2·power}`.
    pub fn phi2_vec(&self, x: &[RingElem], power: i64) -> Vec<RingElem> {
        x.iter().map(|&e| self.ring.frobenius(e, 2 * power)).collect()
    }

    pub fn phi2(&self, l: &Lattice, power: i64) -> Result<Lattice> {
        l.frobenius(&self.ring, 2 * power)
    }

    /// Right dual `L* = {x : b(L, x) ⊆ R}`.
    pub fn dual_lattice(&self, l: &Lattice) -> Result<Lattice> {
        let (gens, shift) = lattice::std_dual_generators(&self.ring, l)?;
        let n = self.n;
        let twisted: Mat = (0..n)
            .map(|r| gens[n - 1 - r].iter().map(|&e| self.ring.frobenius(e, -1)).collect())
            .collect();
        normalize(&self.ring, shift, &twisted)
    }

    /// The residue pairing in the basis of `basis_lattice` (standard basis if
    /// `None`), after dividing `b` by `p^rescale`.
    pub fn reduce_pairing(&self, rescale: u32, basis_lattice: Option<&Lattice>) -> Result<ResiduePairing> {
        let r = &self.ring;
        let n = self.n;
        let cols: Vec<Vec<RingElem>> = match basis_lattice {
            Some(l) => {
                if l.shift() != 0 {
                    return Err(Error::InvalidParams("pairing basis must be integral with shift 0".into()));
                }
                l.columns()
            }
            None => Lattice::standard(r, n).columns(),
        };
        let mut gram = vec![vec![0 as Fe; n]; n];
        for a in 0..n {
            for c in 0..n {
                let v = self.pair_b(&cols[a], &cols[c]);
                if rescale > 0 && r.valuation(v).is_some_and(|val| val < rescale) {
                    return Err(Error::consistency(
                        "rescaled pairing is not integral on the chosen basis",
                        serde_json::json!({ "basis": basis_lattice.map(|l| l.to_json(r)) }),
                    ));
                }
                gram[a][c] = r.residue(r.div_pow_p(v, rescale));
            }
        }
        let pairing = ResiduePairing { ring: self.ring.clone(), gram };
        if !pairing.is_nondegenerate() {
            return Err(Error::consistency(
                "reduced pairing is degenerate",
                serde_json::json!({ "rescale": rescale, "basis": basis_lattice.map(|l| l.to_json(r)) }),
            ));
        }
        Ok(pairing)
    }

    /// `b̄` on `Λ₀/pΛ₀`.
    pub fn residue_pairing(&self) -> ResiduePairing {
        self.reduce_pairing(0, None).expect("the standard pairing is perfect")
    }
}

impl ResiduePairing {
    /// Wraps a Gram matrix without checking nondegeneracy.
    pub fn from_gram(ring: CoeffRing, gram: Vec<Vec<Fe>>) -> Self {
        ResiduePairing { ring, gram }
    }

    pub fn n(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Fe>] {
        &self.gram
    }

    pub fn field(&self) -> &Fq {
        self.ring.field()
    }

    pub fn eval(&self, x: &[Fe], y: &[Fe]) -> Fe {
        let f = self.field();
        let mut acc = 0;
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (c, &yc) in y.iter().enumerate() {
                let g = self.gram[a][c];
                if g != 0 && yc != 0 {
                    acc = f.add(acc, f.mul(xa, f.mul(g, f.frob(yc))));
                }
            }
        }
        acc
    }

    pub fn is_nondegenerate(&self) -> bool {
        let n = self.n();
        nullspace(self.field(), n, &self.gram).is_empty()
    }

    /// Left annihilator `F^⊥ = {x : b̄(x, F) = 0}`.
    pub fn perp(&self, fs: &Subspace) -> Subspace {
        let f = self.field();
        let n = self.n();
        let rows: Vec<Vec<Fe>> = fs
            .rows()
            .iter()
            .map(|v| {
                (0..n)
                    .map(|a| (0..n).fold(0, |acc, c| f.add(acc, f.mul(self.gram[a][c], f.frob(v[c])))))
                    .collect()
            })
            .collect();
        Subspace::from_vectors(f, n, &nullspace(f, n, &rows))
    }

    /// Right annihilator `{y : b̄(F, y) = 0}`.
    pub fn right_perp(&self, fs: &Subspace) -> Subspace {
        let f = self.field();
        let n = self.n();
        let rows: Vec<Vec<Fe>> = fs
            .rows()
            .iter()
            .map(|v| (0..n).map(|c| (0..n).fold(0, |acc, a| f.add(acc, f.mul(v[a], self.gram[a][c])))).collect())
            .collect();
        let z = nullspace(f, n, &rows);
        let y: Vec<Vec<Fe>> = z.iter().map(|v| v.iter().map(|&e| f.frob_inv(e)).collect()).collect();
        Subspace::from_vectors(f, n, &y)
    }

    /// `b̄(F, F) = 0`.
    pub fn is_isotropic(&self, fs: &Subspace) -> bool {
        fs.rows().iter().all(|u| fs.rows().iter().all(|v| self.eval(u, v) == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{make_ring, RingParams};
    use crate::subspace::grassmannian;

    #[test]
    fn self_perp_lines_in_f4_squared() {
        let ring = make_ring(RingParams::new(2, 2, 6), 0).unwrap();
        let h = HermitianSpace::new(ring, 2).unwrap();
        let b = h.residue_pairing();
        let lines = grassmannian(h.field(), 2, 1);
        assert_eq!(lines.iter().filter(|l| b.perp(l) == **l).count(), 3);
    }

    #[test]
    fn odd_degree_rejected() {
        let ring = make_ring(RingParams::new(2, 1, 6), 0).unwrap();
        assert!(HermitianSpace::new(ring, 2).is_err());
    }
}
